#include "slacksim/isa/interpreter.hpp"

#include <sstream>

namespace slacksim::isa {

namespace {
std::string hex(std::uint32_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}
}  // namespace

const DataSegment* Memory::find(std::uint32_t addr) const noexcept {
  for (const auto& seg : segments_) {
    if (addr >= seg.base && addr < seg.end()) return &seg;
  }
  return nullptr;
}

DataSegment* Memory::find(std::uint32_t addr) noexcept {
  for (auto& seg : segments_) {
    if (addr >= seg.base && addr < seg.end()) return &seg;
  }
  return nullptr;
}

std::uint8_t Memory::load8(std::uint32_t addr) const {
  const auto* seg = find(addr);
  if (!seg) throw ExecError(ExecErrorKind::UnmappedAccess, "load from unmapped address " + hex(addr));
  return seg->bytes[addr - seg->base];
}

std::uint32_t Memory::load32(std::uint32_t addr) const {
  std::uint32_t v = 0;
  for (std::uint32_t b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(load8(addr + b)) << (8 * b);
  return v;
}

void Memory::store8(std::uint32_t addr, std::uint8_t value) {
  auto* seg = find(addr);
  if (!seg) throw ExecError(ExecErrorKind::UnmappedAccess, "store to unmapped address " + hex(addr));
  seg->bytes[addr - seg->base] = value;
}

void Memory::store32(std::uint32_t addr, std::uint32_t value) {
  for (std::uint32_t b = 0; b < 4; ++b) {
    if (!mapped(addr + b)) throw ExecError(ExecErrorKind::UnmappedAccess, "store to unmapped address " + hex(addr + b));
  }
  for (std::uint32_t b = 0; b < 4; ++b) store8(addr + b, static_cast<std::uint8_t>(value >> (8 * b)));
}

void Memory::write_bytes(std::uint32_t addr, std::span<const std::uint8_t> bytes) {
  for (std::size_t i = 0; i < bytes.size(); ++i) store8(addr + static_cast<std::uint32_t>(i), bytes[i]);
}

std::vector<std::uint8_t> Memory::read_bytes(std::uint32_t addr, std::size_t n) const {
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = load8(addr + static_cast<std::uint32_t>(i));
  return out;
}

ArchState initial_state(const Program& program, const Inputs& inputs) {
  ArchState st;
  st.mem = Memory(program.data);
  st.pc = program.entry;
  for (const auto& [r, v] : inputs.regs) {
    if (r != 0 && r < kNumRegs) st.regs[r] = v;
  }
  for (const auto& [addr, bytes] : inputs.memory) st.mem.write_bytes(addr, bytes);
  return st;
}

std::uint32_t alu_result(Opcode op, std::uint32_t a, std::uint32_t b, std::int32_t imm) noexcept {
  const auto uimm = static_cast<std::uint32_t>(imm);
  switch (op) {
    case Opcode::ADD: return a + b;
    case Opcode::SUB: return a - b;
    case Opcode::XOR: return a ^ b;
    case Opcode::AND: return a & b;
    case Opcode::OR: return a | b;
    case Opcode::SLL: return a << (b & 31U);
    case Opcode::SRL: return a >> (b & 31U);
    case Opcode::ADDI: return a + uimm;
    case Opcode::XORI: return a ^ uimm;
    case Opcode::ANDI: return a & uimm;
    case Opcode::ORI: return a | uimm;
    case Opcode::LUI: return uimm << 12;
    default: return 0;
  }
}

FunctionalResult run_functional(const Program& program, const Inputs& inputs, std::uint64_t max_steps) {
  FunctionalResult out;
  out.state = initial_state(program, inputs);
  auto& st = out.state;
  auto& regs = st.regs;

  for (std::uint64_t step = 0;; ++step) {
    if (step >= max_steps) {
      throw ExecError(ExecErrorKind::StepLimitExceeded, "step limit of " + std::to_string(max_steps) + " exceeded");
    }
    if (st.pc % 4 != 0) throw ExecError(ExecErrorKind::UnalignedPc, "unaligned pc " + hex(st.pc));
    const Instruction* inst = program.at(st.pc);
    if (!inst) throw ExecError(ExecErrorKind::InvalidPc, "pc " + hex(st.pc) + " outside the code segment");

    RetiredOp r;
    r.seq = step;
    r.pc = st.pc;
    r.op = inst->op;
    const int nsrc = num_sources(inst->op);
    if (nsrc >= 1) r.src[0] = inst->rs1;
    if (nsrc >= 2) r.src[1] = inst->rs2;
    r.num_src = static_cast<std::uint8_t>(nsrc);
    r.imm = inst->imm;

    const std::uint32_t a = regs[inst->rs1];
    const std::uint32_t b = regs[inst->rs2];
    std::uint32_t next_pc = st.pc + 4;
    std::optional<std::uint32_t> result;

    switch (format_of(inst->op)) {
      case Format::R: case Format::I: case Format::U:
        result = alu_result(inst->op, a, b, inst->imm);
        break;
      case Format::Load: {
        const std::uint32_t addr = a + static_cast<std::uint32_t>(inst->imm);
        r.mem_addr = addr;
        result = inst->op == Opcode::LBU ? st.mem.load8(addr) : st.mem.load32(addr);
        break;
      }
      case Format::Store: {
        const std::uint32_t addr = a + static_cast<std::uint32_t>(inst->imm);
        r.mem_addr = addr;
        if (inst->op == Opcode::SB) {
          st.mem.store8(addr, static_cast<std::uint8_t>(b));
          r.store_value = b & 0xFFU;
        } else {
          st.mem.store32(addr, b);
          r.store_value = b;
        }
        break;
      }
      case Format::Branch: {
        const bool taken = inst->op == Opcode::BEQ ? (a == b) : (a != b);
        r.branch_taken = taken;
        if (taken) next_pc = st.pc + static_cast<std::uint32_t>(inst->imm);
        break;
      }
      case Format::Jump:
        result = st.pc + 4;
        r.branch_taken = true;
        next_pc = st.pc + static_cast<std::uint32_t>(inst->imm);
        break;
      case Format::None:
        break;
    }

    if (writes_register(inst->op)) {
      r.dst = inst->rd;
      if (inst->rd != 0 && result) {
        regs[inst->rd] = *result;
        r.wb_value = *result;
      }
    }
    out.stream.push_back(r);
    if (inst->op == Opcode::HALT) break;
    st.pc = next_pc;
  }
  return out;
}

}  // namespace slacksim::isa
