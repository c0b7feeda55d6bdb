#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "slacksim/isa/instruction.hpp"

namespace slacksim::isa {

enum class AsmErrorKind {
  Syntax,
  UnknownMnemonic,
  UndefinedLabel,
  DuplicateLabel,
  RegisterOutOfRange,
  ImmediateOverflow,
  OverlappingSegments,
};

class AsmError : public std::runtime_error {
 public:
  AsmError(AsmErrorKind kind, int line, const std::string& message);

  AsmErrorKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }

 private:
  AsmErrorKind kind_;
  int line_;
};

/// Assembles the textual micro-ISA format (grammar in docs/assembly.md).
Program assemble(std::string_view source);

Program assemble_file(const std::string& path);

}  // namespace slacksim::isa
