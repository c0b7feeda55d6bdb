#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "slacksim/isa/instruction.hpp"

namespace slacksim::isa {

enum class ExecErrorKind {
  UnalignedPc,
  InvalidPc,
  UnmappedAccess,
  StepLimitExceeded,
};

class ExecError : public std::runtime_error {
 public:
  ExecError(ExecErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  ExecErrorKind kind() const noexcept { return kind_; }

 private:
  ExecErrorKind kind_;
};

/// Byte-addressed memory made of the program's data segments. Accesses outside
/// every segment are errors. Words are little-endian.
class Memory {
 public:
  Memory() = default;
  explicit Memory(std::vector<DataSegment> segments) : segments_(std::move(segments)) {}

  std::uint8_t load8(std::uint32_t addr) const;
  std::uint32_t load32(std::uint32_t addr) const;
  void store8(std::uint32_t addr, std::uint8_t value);
  void store32(std::uint32_t addr, std::uint32_t value);

  void write_bytes(std::uint32_t addr, std::span<const std::uint8_t> bytes);
  std::vector<std::uint8_t> read_bytes(std::uint32_t addr, std::size_t n) const;

  bool mapped(std::uint32_t addr) const noexcept { return find(addr) != nullptr; }
  const std::vector<DataSegment>& segments() const noexcept { return segments_; }

  friend bool operator==(const Memory& a, const Memory& b) {
    if (a.segments_.size() != b.segments_.size()) return false;
    for (std::size_t i = 0; i < a.segments_.size(); ++i) {
      if (a.segments_[i].base != b.segments_[i].base || a.segments_[i].bytes != b.segments_[i].bytes) return false;
    }
    return true;
  }

 private:
  const DataSegment* find(std::uint32_t addr) const noexcept;
  DataSegment* find(std::uint32_t addr) noexcept;

  std::vector<DataSegment> segments_;
};

struct ArchState {
  std::array<std::uint32_t, kNumRegs> regs{};
  Memory mem;
  std::uint32_t pc = 0;
};

/// Initial register and memory bindings applied on top of the program image.
struct Inputs {
  std::vector<std::pair<Reg, std::uint32_t>> regs;
  std::vector<std::pair<std::uint32_t, std::vector<std::uint8_t>>> memory;
};

struct RetiredOp {
  std::uint64_t seq = 0;
  std::uint32_t pc = 0;
  Opcode op = Opcode::HALT;
  std::array<Reg, 2> src{};
  std::uint8_t num_src = 0;
  std::int32_t imm = 0;
  std::optional<Reg> dst;
  std::optional<std::uint32_t> wb_value;
  std::optional<std::uint32_t> mem_addr;
  /// Value stored by SB/SW (absent otherwise).
  std::optional<std::uint32_t> store_value;
  bool branch_taken = false;
};

struct FunctionalResult {
  ArchState state;
  std::vector<RetiredOp> stream;
};

/// Initial architectural state: program data image plus `inputs`, pc at entry.
ArchState initial_state(const Program& program, const Inputs& inputs);

/// Result of an R/I/U-format opcode. Shared by the functional model and the
/// timing model's dataflow check.
std::uint32_t alu_result(Opcode op, std::uint32_t a, std::uint32_t b, std::int32_t imm) noexcept;

/// Sequential execution until HALT (included in the stream) or `max_steps`.
FunctionalResult run_functional(const Program& program, const Inputs& inputs, std::uint64_t max_steps);

}  // namespace slacksim::isa
