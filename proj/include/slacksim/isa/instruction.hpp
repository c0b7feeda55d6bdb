#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slacksim::isa {

enum class Opcode : std::uint8_t {
  ADD, SUB, XOR, AND, OR, SLL, SRL,
  ADDI, XORI, ANDI, ORI,
  LUI,
  LBU, LW,
  SB, SW,
  BEQ, BNE,
  JAL,
  HALT,
};

inline constexpr int kNumOpcodes = static_cast<int>(Opcode::HALT) + 1;
inline constexpr int kNumRegs = 32;

using Reg = std::uint8_t;

/// Operand layout of an opcode.
enum class Format : std::uint8_t {
  R,       // op rd, rs1, rs2
  I,       // op rd, rs1, imm12
  U,       // op rd, imm20
  Load,    // op rd, imm12(rs1)
  Store,   // op rs2, imm12(rs1)
  Branch,  // op rs1, rs2, label
  Jump,    // op rd, label
  None,    // op
};

struct Instruction {
  Opcode op = Opcode::HALT;
  Reg rd = 0;
  Reg rs1 = 0;
  Reg rs2 = 0;
  std::int32_t imm = 0;
  std::uint32_t pc = 0;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

std::string_view mnemonic(Opcode op) noexcept;
std::optional<Opcode> parse_opcode(std::string_view text) noexcept;
Format format_of(Opcode op) noexcept;

/// Register sources actually read (0, 1 or 2).
int num_sources(Opcode op) noexcept;
bool writes_register(Opcode op) noexcept;
bool is_load(Opcode op) noexcept;
bool is_store(Opcode op) noexcept;
inline bool is_memory(Opcode op) noexcept { return is_load(op) || is_store(op); }
bool is_control(Opcode op) noexcept;
/// Bytes touched by a memory opcode (0 for non-memory).
int access_size(Opcode op) noexcept;

std::string to_string(const Instruction& inst);

struct DataSegment {
  std::uint32_t base = 0;
  std::vector<std::uint8_t> bytes;

  std::uint32_t end() const noexcept { return base + static_cast<std::uint32_t>(bytes.size()); }
};

/// Assembled program: one contiguous code segment plus data segments.
struct Program {
  std::vector<Instruction> code;
  std::uint32_t entry = 0;
  std::vector<DataSegment> data;
  std::map<std::string, std::uint32_t, std::less<>> symbols;

  std::uint32_t code_base() const noexcept { return code.empty() ? entry : code.front().pc; }
  std::uint32_t code_end() const noexcept { return code_base() + 4U * static_cast<std::uint32_t>(code.size()); }

  /// Instruction at `pc`, or nullptr outside the code segment / unaligned.
  const Instruction* at(std::uint32_t pc) const noexcept;

  /// Address of a label; throws std::out_of_range when undefined.
  std::uint32_t symbol(std::string_view name) const;

  const DataSegment* segment_containing(std::uint32_t addr) const noexcept;
};

}  // namespace slacksim::isa
