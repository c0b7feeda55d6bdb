#include "slacksim/isa/assembler.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "slacksim/util/kv_file.hpp"

namespace slacksim::isa {

namespace {

const char* kind_name(AsmErrorKind kind) {
  switch (kind) {
    case AsmErrorKind::Syntax: return "syntax error";
    case AsmErrorKind::UnknownMnemonic: return "unknown mnemonic";
    case AsmErrorKind::UndefinedLabel: return "undefined label";
    case AsmErrorKind::DuplicateLabel: return "duplicate label";
    case AsmErrorKind::RegisterOutOfRange: return "register out of range";
    case AsmErrorKind::ImmediateOverflow: return "immediate overflow";
    case AsmErrorKind::OverlappingSegments: return "overlapping segments";
  }
  return "error";
}

struct PendingLabel {
  std::string name;
  int line;
};

struct Statement {
  int line = 0;
  std::vector<PendingLabel> labels;
  std::string head;                   // mnemonic or directive, as written
  std::vector<std::string> operands;  // comma separated, trimmed
  std::uint32_t address = 0;
  bool in_code = true;
};

struct SegmentDraft {
  std::uint32_t base = 0;
  std::uint32_t size = 0;
  int line = 0;
};

std::vector<std::string> split_operands(std::string_view text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_' || s[0] == '.')) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '.'; });
}

std::optional<std::int64_t> parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  }
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v > (1ULL << 40)) return std::nullopt;
  return neg ? -static_cast<std::int64_t>(v) : static_cast<std::int64_t>(v);
}

class Assembler {
 public:
  explicit Assembler(std::string_view source) { split_lines(source); }

  Program run() {
    layout();
    encode();
    check_overlaps();
    return std::move(program_);
  }

 private:
  [[noreturn]] static void fail(AsmErrorKind kind, int line, const std::string& msg) { throw AsmError(kind, line, msg); }

  void split_lines(std::string_view source) {
    std::istringstream in{std::string(source)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      if (const auto c = raw.find_first_of("#;"); c != std::string::npos) raw.erase(c);
      std::string body = trim(raw);
      // Leading labels.
      while (true) {
        const auto colon = body.find(':');
        if (colon == std::string::npos) break;
        std::string label = trim(std::string_view(body).substr(0, colon));
        if (!is_identifier(label)) break;
        pending_labels_.push_back({label, lineno});
        body = trim(std::string_view(body).substr(colon + 1));
      }
      if (body.empty()) continue;
      Statement st;
      st.line = lineno;
      const auto ws = body.find_first_of(" \t");
      st.head = body.substr(0, ws);
      if (ws != std::string::npos) st.operands = split_operands(std::string_view(body).substr(ws + 1));
      st.labels = std::move(pending_labels_);
      pending_labels_.clear();
      statements_.push_back(std::move(st));
    }
    trailing_labels_ = std::move(pending_labels_);
  }

  void define_label(const std::string& name, std::uint32_t addr, int line) {
    if (!program_.symbols.emplace(name, addr).second) fail(AsmErrorKind::DuplicateLabel, line, "label `" + name + "` defined twice");
  }

  std::int64_t literal(const std::string& text, int line) const {
    const auto v = parse_integer(text);
    if (!v) fail(AsmErrorKind::Syntax, line, "expected an integer, got `" + text + "`");
    return *v;
  }

  // Pass 1: addresses and labels.
  void layout() {
    bool in_code = true;
    bool code_started = false;
    std::uint32_t code_pc = 0;
    std::uint32_t data_pc = 0;
    for (auto& st : statements_) {
      std::string head = st.head;
      std::transform(head.begin(), head.end(), head.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (head == ".text") {
        in_code = true;
        if (!st.operands.empty()) {
          if (code_started) fail(AsmErrorKind::Syntax, st.line, ".text base must precede the first instruction");
          code_pc = static_cast<std::uint32_t>(literal(st.operands[0], st.line));
          if (code_pc % 4 != 0) fail(AsmErrorKind::Syntax, st.line, "code base must be 4-byte aligned");
        }
      } else if (head == ".data") {
        if (st.operands.size() != 1) fail(AsmErrorKind::Syntax, st.line, ".data takes one address");
        in_code = false;
        data_pc = static_cast<std::uint32_t>(literal(st.operands[0], st.line));
        segments_.push_back({data_pc, 0, st.line});
      }
      st.in_code = in_code;
      st.address = in_code ? code_pc : data_pc;
      for (const auto& [name, line] : st.labels) define_label(name, st.address, line);

      std::uint32_t size = 0;
      if (head == ".byte") {
        size = static_cast<std::uint32_t>(st.operands.size());
      } else if (head == ".word") {
        size = 4 * static_cast<std::uint32_t>(st.operands.size());
      } else if (head == ".zero") {
        if (st.operands.size() != 1) fail(AsmErrorKind::Syntax, st.line, ".zero takes one count");
        size = static_cast<std::uint32_t>(literal(st.operands[0], st.line));
      } else if (head == ".text" || head == ".data") {
        continue;
      } else if (head[0] == '.') {
        fail(AsmErrorKind::Syntax, st.line, "unknown directive `" + st.head + "`");
      } else {
        if (!in_code) fail(AsmErrorKind::Syntax, st.line, "instruction inside a .data segment");
        if (!code_started) {
          program_.entry = code_pc;
          code_started = true;
        }
        code_pc += 4;
        continue;
      }
      if (in_code) fail(AsmErrorKind::Syntax, st.line, "data directive outside a .data segment");
      data_pc += size;
      segments_.back().size += size;
    }
    const std::uint32_t end_addr = in_code ? code_pc : data_pc;
    for (const auto& [name, line] : trailing_labels_) define_label(name, end_addr, line);
  }

  Reg reg(const std::string& text, int line) const {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "zero") return 0;
    if (t.size() < 2 || t[0] != 'x') fail(AsmErrorKind::Syntax, line, "expected a register, got `" + text + "`");
    const auto v = parse_integer(std::string_view(t).substr(1));
    if (!v || *v < 0) fail(AsmErrorKind::Syntax, line, "expected a register, got `" + text + "`");
    if (*v >= kNumRegs) fail(AsmErrorKind::RegisterOutOfRange, line, "register `" + text + "` out of range x0..x31");
    return static_cast<Reg>(*v);
  }

  std::uint32_t lookup(const std::string& name, int line) const {
    const auto it = program_.symbols.find(name);
    if (it == program_.symbols.end()) fail(AsmErrorKind::UndefinedLabel, line, "undefined label `" + name + "`");
    return it->second;
  }

  // Integer literal, label, %hi(label) or %lo(label).
  std::int64_t value(const std::string& text, int line) const {
    if (text.rfind("%hi(", 0) == 0 || text.rfind("%lo(", 0) == 0) {
      if (text.back() != ')') fail(AsmErrorKind::Syntax, line, "malformed `" + text + "`");
      const std::string inner = trim(std::string_view(text).substr(4, text.size() - 5));
      const std::int64_t addr = is_identifier(inner) ? lookup(inner, line) : literal(inner, line);
      const std::int64_t hi = (addr + 0x800) >> 12;
      return text[1] == 'h' ? (hi & 0xFFFFF) : addr - (hi << 12);
    }
    if (is_identifier(text)) return lookup(text, line);
    return literal(text, line);
  }

  static void check_range(std::int64_t v, std::int64_t lo, std::int64_t hi, int line, const char* field) {
    if (v < lo || v > hi) {
      fail(AsmErrorKind::ImmediateOverflow, line,
           "immediate " + std::to_string(v) + " overflows " + field + " field [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }

  void expect_operands(const Statement& st, std::size_t n) const {
    if (st.operands.size() != n) {
      fail(AsmErrorKind::Syntax, st.line, "`" + st.head + "` expects " + std::to_string(n) + " operands, got " + std::to_string(st.operands.size()));
    }
  }

  // "imm(rs1)" or "(rs1)".
  std::pair<std::int64_t, Reg> mem_operand(const std::string& text, int line) const {
    const auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')') fail(AsmErrorKind::Syntax, line, "expected imm(reg), got `" + text + "`");
    const std::string off = trim(std::string_view(text).substr(0, open));
    const std::string base = trim(std::string_view(text).substr(open + 1, text.size() - open - 2));
    return {off.empty() ? 0 : value(off, line), reg(base, line)};
  }

  // Pass 2: encoding.
  void encode() {
    for (const auto& seg : segments_) program_.data.push_back({seg.base, std::vector<std::uint8_t>(seg.size, 0)});
    std::size_t seg_idx = 0;
    std::uint32_t seg_cursor = 0;
    for (const auto& st : statements_) {
      std::string head = st.head;
      std::transform(head.begin(), head.end(), head.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (head == ".text") continue;
      if (head == ".data") {
        seg_idx = static_cast<std::size_t>(std::find_if(segments_.begin(), segments_.end(), [&](const SegmentDraft& s) { return s.line == st.line; }) - segments_.begin());
        seg_cursor = 0;
        continue;
      }
      if (head == ".byte" || head == ".word" || head == ".zero") {
        auto& bytes = program_.data[seg_idx].bytes;
        if (head == ".zero") {
          seg_cursor += static_cast<std::uint32_t>(literal(st.operands[0], st.line));
          continue;
        }
        for (const auto& op : st.operands) {
          const std::int64_t v = value(op, st.line);
          if (head == ".byte") {
            check_range(v, -128, 255, st.line, "byte");
            bytes[seg_cursor++] = static_cast<std::uint8_t>(v);
          } else {
            check_range(v, -(1LL << 31), (1LL << 32) - 1, st.line, "word");
            const auto w = static_cast<std::uint32_t>(v);
            for (int b = 0; b < 4; ++b) bytes[seg_cursor++] = static_cast<std::uint8_t>(w >> (8 * b));
          }
        }
        continue;
      }
      program_.code.push_back(encode_instruction(st));
    }
  }

  Instruction encode_instruction(const Statement& st) const {
    const auto op = parse_opcode(st.head);
    if (!op) fail(AsmErrorKind::UnknownMnemonic, st.line, "unknown mnemonic `" + st.head + "`");
    Instruction inst;
    inst.op = *op;
    inst.pc = st.address;
    switch (format_of(*op)) {
      case Format::R:
        expect_operands(st, 3);
        inst.rd = reg(st.operands[0], st.line);
        inst.rs1 = reg(st.operands[1], st.line);
        inst.rs2 = reg(st.operands[2], st.line);
        break;
      case Format::I: {
        expect_operands(st, 3);
        inst.rd = reg(st.operands[0], st.line);
        inst.rs1 = reg(st.operands[1], st.line);
        const auto v = value(st.operands[2], st.line);
        check_range(v, -2048, 2047, st.line, "12-bit signed");
        inst.imm = static_cast<std::int32_t>(v);
        break;
      }
      case Format::U: {
        expect_operands(st, 2);
        inst.rd = reg(st.operands[0], st.line);
        const auto v = value(st.operands[1], st.line);
        check_range(v, 0, 0xFFFFF, st.line, "20-bit upper");
        inst.imm = static_cast<std::int32_t>(v);
        break;
      }
      case Format::Load: {
        expect_operands(st, 2);
        inst.rd = reg(st.operands[0], st.line);
        const auto [off, base] = mem_operand(st.operands[1], st.line);
        check_range(off, -2048, 2047, st.line, "12-bit signed");
        inst.rs1 = base;
        inst.imm = static_cast<std::int32_t>(off);
        break;
      }
      case Format::Store: {
        expect_operands(st, 2);
        inst.rs2 = reg(st.operands[0], st.line);
        const auto [off, base] = mem_operand(st.operands[1], st.line);
        check_range(off, -2048, 2047, st.line, "12-bit signed");
        inst.rs1 = base;
        inst.imm = static_cast<std::int32_t>(off);
        break;
      }
      case Format::Branch: {
        expect_operands(st, 3);
        inst.rs1 = reg(st.operands[0], st.line);
        inst.rs2 = reg(st.operands[1], st.line);
        const auto v = target_offset(st.operands[2], st);
        check_range(v, -4096, 4094, st.line, "13-bit branch offset");
        inst.imm = static_cast<std::int32_t>(v);
        break;
      }
      case Format::Jump: {
        expect_operands(st, 2);
        inst.rd = reg(st.operands[0], st.line);
        const auto v = target_offset(st.operands[1], st);
        check_range(v, -(1 << 20), (1 << 20) - 2, st.line, "21-bit jump offset");
        inst.imm = static_cast<std::int32_t>(v);
        break;
      }
      case Format::None:
        expect_operands(st, 0);
        break;
    }
    return inst;
  }

  // Label targets are PC-relative; numeric operands are taken as the offset itself.
  std::int64_t target_offset(const std::string& text, const Statement& st) const {
    if (is_identifier(text)) return static_cast<std::int64_t>(lookup(text, st.line)) - st.address;
    const auto v = literal(text, st.line);
    if (v % 4 != 0) fail(AsmErrorKind::Syntax, st.line, "branch offset must be a multiple of 4");
    return v;
  }

  void check_overlaps() const {
    struct Range {
      std::uint32_t lo, hi;
      int line;
    };
    std::vector<Range> ranges;
    if (!program_.code.empty()) ranges.push_back({program_.code_base(), program_.code_end(), 0});
    for (const auto& seg : segments_) {
      if (seg.size > 0) ranges.push_back({seg.base, seg.base + seg.size, seg.line});
    }
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      for (std::size_t j = i + 1; j < ranges.size(); ++j) {
        if (ranges[i].lo < ranges[j].hi && ranges[j].lo < ranges[i].hi) {
          fail(AsmErrorKind::OverlappingSegments, std::max(ranges[i].line, ranges[j].line), "segment overlaps another segment or the code");
        }
      }
    }
  }

  std::vector<PendingLabel> pending_labels_;
  std::vector<PendingLabel> trailing_labels_;
  std::vector<Statement> statements_;
  std::vector<SegmentDraft> segments_;
  Program program_;
};

}  // namespace

AsmError::AsmError(AsmErrorKind kind, int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + kind_name(kind) + ": " + message), kind_(kind), line_(line) {}

Program assemble(std::string_view source) { return Assembler(source).run(); }

Program assemble_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open assembly file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return assemble(buf.str());
}

}  // namespace slacksim::isa
