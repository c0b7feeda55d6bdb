#include "slacksim/isa/instruction.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace slacksim::isa {

namespace {
constexpr std::array<std::string_view, kNumOpcodes> kMnemonics = {
    "ADD", "SUB", "XOR", "AND", "OR", "SLL", "SRL", "ADDI", "XORI", "ANDI",
    "ORI", "LUI", "LBU", "LW",  "SB", "SW",  "BEQ", "BNE",  "JAL",  "HALT",
};
}  // namespace

std::string_view mnemonic(Opcode op) noexcept { return kMnemonics[static_cast<std::size_t>(op)]; }

std::optional<Opcode> parse_opcode(std::string_view text) noexcept {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (int i = 0; i < kNumOpcodes; ++i) {
    if (kMnemonics[static_cast<std::size_t>(i)] == upper) return static_cast<Opcode>(i);
  }
  return std::nullopt;
}

Format format_of(Opcode op) noexcept {
  switch (op) {
    case Opcode::ADD: case Opcode::SUB: case Opcode::XOR: case Opcode::AND:
    case Opcode::OR: case Opcode::SLL: case Opcode::SRL:
      return Format::R;
    case Opcode::ADDI: case Opcode::XORI: case Opcode::ANDI: case Opcode::ORI:
      return Format::I;
    case Opcode::LUI:
      return Format::U;
    case Opcode::LBU: case Opcode::LW:
      return Format::Load;
    case Opcode::SB: case Opcode::SW:
      return Format::Store;
    case Opcode::BEQ: case Opcode::BNE:
      return Format::Branch;
    case Opcode::JAL:
      return Format::Jump;
    case Opcode::HALT:
      return Format::None;
  }
  return Format::None;
}

int num_sources(Opcode op) noexcept {
  switch (format_of(op)) {
    case Format::R: case Format::Store: case Format::Branch: return 2;
    case Format::I: case Format::Load: return 1;
    default: return 0;
  }
}

bool writes_register(Opcode op) noexcept {
  switch (format_of(op)) {
    case Format::R: case Format::I: case Format::U: case Format::Load: case Format::Jump: return true;
    default: return false;
  }
}

bool is_load(Opcode op) noexcept { return op == Opcode::LBU || op == Opcode::LW; }
bool is_store(Opcode op) noexcept { return op == Opcode::SB || op == Opcode::SW; }
bool is_control(Opcode op) noexcept { return op == Opcode::BEQ || op == Opcode::BNE || op == Opcode::JAL; }

int access_size(Opcode op) noexcept {
  switch (op) {
    case Opcode::LBU: case Opcode::SB: return 1;
    case Opcode::LW: case Opcode::SW: return 4;
    default: return 0;
  }
}

std::string to_string(const Instruction& inst) {
  std::ostringstream os;
  os << mnemonic(inst.op);
  const auto r = [](Reg x) { return "x" + std::to_string(x); };
  switch (format_of(inst.op)) {
    case Format::R: os << ' ' << r(inst.rd) << ", " << r(inst.rs1) << ", " << r(inst.rs2); break;
    case Format::I: os << ' ' << r(inst.rd) << ", " << r(inst.rs1) << ", " << inst.imm; break;
    case Format::U: os << ' ' << r(inst.rd) << ", " << inst.imm; break;
    case Format::Load: os << ' ' << r(inst.rd) << ", " << inst.imm << '(' << r(inst.rs1) << ')'; break;
    case Format::Store: os << ' ' << r(inst.rs2) << ", " << inst.imm << '(' << r(inst.rs1) << ')'; break;
    case Format::Branch: os << ' ' << r(inst.rs1) << ", " << r(inst.rs2) << ", " << inst.imm; break;
    case Format::Jump: os << ' ' << r(inst.rd) << ", " << inst.imm; break;
    case Format::None: break;
  }
  return os.str();
}

const Instruction* Program::at(std::uint32_t pc) const noexcept {
  const std::uint32_t base = code_base();
  if (pc < base || (pc - base) % 4 != 0) return nullptr;
  const std::size_t idx = (pc - base) / 4;
  return idx < code.size() ? &code[idx] : nullptr;
}

std::uint32_t Program::symbol(std::string_view name) const {
  const auto it = symbols.find(name);
  if (it == symbols.end()) throw std::out_of_range("undefined symbol: " + std::string(name));
  return it->second;
}

const DataSegment* Program::segment_containing(std::uint32_t addr) const noexcept {
  for (const auto& seg : data) {
    if (addr >= seg.base && addr < seg.end()) return &seg;
  }
  return nullptr;
}

}  // namespace slacksim::isa
