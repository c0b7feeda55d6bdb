// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Criteria 6 to 8 drive the slacksim
// executable end to end and read back the files it writes.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "slacksim/harness/core_configs.hpp"
#include "slacksim/harness/perf_pipeline.hpp"
#include "slacksim/harness/plan.hpp"
#include "slacksim/isa/assembler.hpp"
#include "slacksim/isa/interpreter.hpp"
#include "slacksim/ooo/core.hpp"
#include "slacksim/power/collect.hpp"
#include "slacksim/sca/cpa.hpp"
#include "slacksim/sca/kernels.hpp"
#include "slacksim/sca/metrics.hpp"
#include "slacksim/sca/pca.hpp"
#include "slacksim/sca/poi.hpp"
#include "slacksim/sca/templates.hpp"
#include "support/aes_oracle.hpp"
#include "support/random_programs.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace slacksim;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

const fs::path& work_dir() {
  static const fs::path dir = fs::path(SLACKSIM_ACCEPTANCE_WORK_DIR);
  return dir;
}

const isa::Program& aes_program() {
  static const isa::Program p = isa::assemble_file(harness::default_program_path());
  return p;
}

std::string run_command(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) out += buf.data();
  status = pclose(pipe);
  return out;
}

std::string cli() { return std::string("\"") + SLACKSIM_CLI + "\""; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// 1. Functional correctness under every scheduler mode.

Verdict criterion_functional() {
  const auto key = oracle::from_hex("000102030405060708090a0b0c0d0e0f");
  const auto pt = oracle::from_hex("00112233445566778899aabbccddeeff");
  const auto expected = oracle::from_hex("69c4e0d86a7b0430d8cdb78070b4c55a");
  const auto layout = power::AesLayout::of(aes_program());
  const auto inputs = power::aes_inputs(layout, key, pt);
  const auto fr = isa::run_functional(aes_program(), inputs, ooo::kDefaultMaxSteps);
  const auto ct = fr.state.mem.read_bytes(layout.ciphertext, 16);
  if (!std::equal(ct.begin(), ct.end(), expected.begin())) return {false, "functional ciphertext mismatch"};

  // Each timing run executes loads and stores in its own issue order on a
  // private memory image; the ciphertext is read back from that image.
  for (const auto& core : harness::all_core_configs()) {
    try {
      const auto rec = ooo::simulate(aes_program(), inputs, core.pipeline, core.mode, 1);
      const auto bytes = rec.final_memory.read_bytes(layout.ciphertext, 16);
      if (!std::equal(bytes.begin(), bytes.end(), expected.begin())) return {false, core.name + ": ciphertext mismatch"};
    } catch (const std::exception& e) {
      return {false, core.name + ": " + e.what()};
    }
  }
  return {true, "FIPS-197 C.1 ciphertext 69c4e0d8...c55a under all 6 cores"};
}

// ---------------------------------------------------------------------------
// 2. Scheduling soundness on random programs.

Verdict criterion_scheduling() {
  Prng gen(20240601);
  const auto cores = harness::all_core_configs();
  std::size_t checked = 0;
  for (int n = 0; n < 1000; ++n) {
    const auto program = isa::assemble(testgen::random_program(gen, static_cast<int>(10 + gen.uniform(50))));
    const auto fr = isa::run_functional(program, {}, 100000);
    const auto& stream = fr.stream;

    // Independent producer analysis over the retired stream.
    std::vector<std::vector<std::size_t>> producers(stream.size());
    std::array<std::optional<std::size_t>, isa::kNumRegs> last_writer{};
    std::map<std::uint32_t, std::size_t> last_store_byte;
    for (std::size_t i = 0; i < stream.size(); ++i) {
      const auto& op = stream[i];
      for (int k = 0; k < op.num_src; ++k) {
        const auto r = op.src[static_cast<std::size_t>(k)];
        if (r != 0 && last_writer[r]) producers[i].push_back(*last_writer[r]);
      }
      if (op.mem_addr) {
        for (int b = 0; b < isa::access_size(op.op); ++b) {
          const auto addr = *op.mem_addr + static_cast<std::uint32_t>(b);
          if (isa::is_load(op.op) && last_store_byte.count(addr)) producers[i].push_back(last_store_byte[addr]);
          if (isa::is_store(op.op)) last_store_byte[addr] = i;
        }
      }
      if (op.dst && *op.dst != 0) last_writer[*op.dst] = i;
    }
    std::vector<std::pair<int, std::uint32_t>> expected_wb;
    for (const auto& op : stream) {
      if (op.wb_value) expected_wb.emplace_back(*op.dst, *op.wb_value);
    }
    std::sort(expected_wb.begin(), expected_wb.end());

    for (const auto& core : cores) {
      ooo::ExecutionRecord rec;
      try {
        rec = ooo::simulate(program, {}, core.pipeline, core.mode, static_cast<std::uint64_t>(n));
      } catch (const std::exception& e) {
        return {false, "program " + std::to_string(n) + " on " + core.name + ": " + e.what()};
      }
      if (rec.insts.size() != stream.size()) return {false, "retired count differs on " + core.name};
      std::vector<std::pair<int, std::uint32_t>> got;
      for (const auto& d : rec.insts) {
        if (d.wb_value) got.emplace_back(*d.dst, *d.wb_value);
      }
      std::sort(got.begin(), got.end());
      if (got != expected_wb) return {false, "write-back multiset differs for program " + std::to_string(n) + " on " + core.name};

      std::vector<std::uint32_t> from_index(rec.wb_values.begin(), rec.wb_values.end());
      std::vector<std::uint32_t> from_insts;
      for (const auto& d : rec.insts) {
        if (d.wb_value) from_insts.push_back(*d.wb_value);
      }
      std::sort(from_index.begin(), from_index.end());
      std::sort(from_insts.begin(), from_insts.end());
      if (from_index != from_insts) return {false, "per-cycle write-back index inconsistent on " + core.name};

      for (std::size_t i = 0; i < rec.insts.size(); ++i) {
        const auto& d = rec.insts[i];
        for (const auto p : producers[i]) {
          if (d.issue_cycle < rec.insts[p].complete_cycle) {
            return {false, core.name + ": instruction " + std::to_string(i) + " issued before its producer completed"};
          }
        }
        if (std::holds_alternative<ooo::InOrder>(core.mode) && i > 0 && d.issue_cycle < rec.insts[i - 1].issue_cycle) {
          return {false, "in-order core issued out of program order"};
        }
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " program x mode runs: write-backs, order and causality hold"};
}

// ---------------------------------------------------------------------------
// 3. Slack Unit safety and convergence on the three-instruction kernel.

Verdict criterion_slack_kernel() {
  // INST 1 is an independent ADDI whose result waits for INST 0, the tail of
  // a nine-deep ADDI chain, so the observed slack is 8 cycles; INST 2
  // consumes both.
  std::string src = "    ADDI x2, x0, 5\n    ADDI x1, x0, 1\n";
  for (int i = 0; i < 8; ++i) src += "    ADDI x1, x1, 1\n";
  src += "    ADD  x3, x1, x2\n    HALT\n";
  const auto program = isa::assemble(src);
  const auto fr = isa::run_functional(program, {}, 100);
  const auto init = isa::initial_state(program, {});
  const std::size_t inst1 = 0, inst0 = 9, inst2 = 10;
  const std::uint32_t inst1_pc = fr.stream[inst1].pc;

  ooo::Core plain({}, ooo::OutOfOrder{}, 1);
  const auto reference = plain.run(fr.stream, init);
  const auto ref_issue = reference.insts[inst2].issue_cycle;
  const auto expected_slack = reference.insts[inst0].complete_cycle - reference.insts[inst1].complete_cycle;

  ooo::Core core({}, ooo::SlackScheduled{}, 7);
  std::optional<int> stable_at;
  std::ostringstream why;
  for (int it = 1; it <= 20; ++it) {
    const auto before = core.slack_unit()->nct(inst1_pc);
    const auto rec = core.run(fr.stream, init);
    const auto& d = rec.insts[inst1];
    if (before && d.extra_delay > before->slack) {
      return {false, "iteration " + std::to_string(it) + ": delay " + std::to_string(d.extra_delay) + " exceeds slack " +
                         std::to_string(before->slack)};
    }
    if (!before && d.extra_delay != 0) return {false, "delay injected without an NCT entry"};
    core.slack_unit()->check_invariants();
    const auto after = core.slack_unit()->nct(inst1_pc);
    if (!stable_at && after && after->stable) stable_at = it;
    if (stable_at && it > *stable_at && rec.insts[inst2].issue_cycle != ref_issue) {
      return {false, "iteration " + std::to_string(it) + ": consumer issued at " + std::to_string(rec.insts[inst2].issue_cycle) +
                         " instead of " + std::to_string(ref_issue)};
    }
  }
  if (!stable_at) return {false, "NCT entry never became stable"};
  if (*stable_at > 10) return {false, "NCT entry stable only after " + std::to_string(*stable_at) + " iterations"};
  const auto final_entry = core.slack_unit()->nct(inst1_pc);
  if (!final_entry || !final_entry->stable) return {false, "NCT entry lost its stable state"};
  if (final_entry->slack != expected_slack) {
    return {false, "stored slack " + std::to_string(final_entry->slack) + " != observed slack " + std::to_string(expected_slack)};
  }
  if (!core.slack_unit()->in_ct(fr.stream[inst0].pc)) return {false, "critical producer missing from the CT"};
  return {true, "slack " + std::to_string(expected_slack) + ", stable after iteration " + std::to_string(*stable_at) +
                    ", delays <= slack, consumer issue unchanged (cycle " + std::to_string(ref_issue) + ")"};
}

// ---------------------------------------------------------------------------
// 4. Performance claim.

Verdict criterion_performance() {
  const auto rep = harness::run_perf_pipeline(harness::core_names(), 2000, 1, aes_program());
  const auto ipc = [&](const char* name) { return rep.find(name)->normalized_ipc; };
  const double par = ipc("paradise"), perf = ipc("random-iso-perf"), sec = ipc("random-iso-security"),
               agg = ipc("random-aggressive");
  std::ostringstream os;
  os << "normalized IPC paradise " << fmt(par, 4) << ", random-iso-perf " << fmt(perf, 4) << ", random-iso-security "
     << fmt(sec, 4) << ", random-aggressive " << fmt(agg, 4);
  const bool ok = par >= 0.90 && agg < sec && sec < std::min(par, perf);
  return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// 5. Attack-stack oracles.

Verdict criterion_attack_oracles() {
  double worst = 0.0;
  for (unsigned seed = 1; seed <= 50; ++seed) {
    const auto ts = testgen::synthetic(8, 4, seed % 4, static_cast<std::uint8_t>(seed * 37), 3.0, seed);
    sca::CpaAccumulator acc(4);
    acc.add_range(ts, 0, 0, ts.size());
    const auto fast = acc.correlations();
    const auto ref = sca::reference::correlate(ts, 0);
    for (unsigned k = 0; k < 256; ++k) {
      for (std::size_t s = 0; s < 4; ++s) {
        const double r = testgen::brute_force_cpa(ts, k, s);
        worst = std::max({worst, std::abs(fast.at(k, s) - r), std::abs(ref.at(k, s) - r)});
      }
    }
  }
  if (worst > 1e-12) return {false, "CPA deviates from brute force by " + std::to_string(worst)};

  // GE against hand-averaged ranks.
  std::vector<sca::ScoreVector> attacks(5);
  const int ranks[] = {0, 4, 2, 9, 0};
  for (std::size_t a = 0; a < attacks.size(); ++a) {
    attacks[a].scores.fill(0.0);
    attacks[a].scores[0x42] = 0.5;
    for (int r = 0; r < ranks[a]; ++r) attacks[a].scores[static_cast<std::size_t>(r)] = 0.9;
  }
  if (sca::guessing_entropy(attacks, 0x42) != 3.0) return {false, "GE differs from the hand-averaged rank 3.0"};

  // PCA orthonormality.
  Eigen::MatrixXd rows(400, 12);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n01;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) rows(i, j) = n01(gen) * static_cast<double>(j + 1);
  }
  const auto proj = sca::pca_fit(rows, 8);
  const double ortho = (proj.components * proj.components.transpose() - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff();
  if (ortho > 1e-9) return {false, "PCA basis not orthonormal: " + std::to_string(ortho)};

  // Template self-consistency with 50 attack traces.
  const auto prof = testgen::synthetic(20000, 16, 9, 0, 1.0, 41, true);
  const auto atk = testgen::synthetic(50, 16, 9, 0xd4, 1.0, 42);
  const auto poi = sca::profiled_poi(prof, 0, 0.05);
  const auto tp = sca::pca_fit(sca::poi_matrix(prof, poi), std::min<std::size_t>(2, poi.indices.size()));
  const auto tpl = sca::template_fit(prof, poi, tp, 0);
  const int rank = sca::key_rank(sca::template_attack(atk, tpl, poi, tp, 0), 0xd4);
  if (rank != 0) return {false, "template attack ranks the true key at " + std::to_string(rank)};
  std::ostringstream os;
  os << "CPA max deviation " << worst << ", GE exact, PCA orthonormality " << ortho << ", template rank 0 with 50 traces";
  return {true, os.str()};
}

// ---------------------------------------------------------------------------
// 6 and 7. Desk-scale security evaluation and determinism.

struct Count {
  std::optional<std::size_t> n;  // nullopt: unbroken within the attack budget
  std::string text;
};

std::map<std::string, std::map<std::string, Count>> read_summary(const fs::path& dir) {
  std::map<std::string, std::map<std::string, Count>> out;
  std::istringstream in(read_file(dir / "summary.csv"));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() < 3) continue;
    Count c;
    c.text = f[2];
    if (!f[2].empty() && f[2][0] != '>') c.n = std::stoull(f[2]);
    out[f[0]][f[1]] = c;
  }
  return out;
}

// Unbroken counts compare as larger than every finite count.
bool less(const Count& a, const Count& b) { return a.n && (!b.n || *a.n < *b.n); }
bool less_equal(const Count& a, const Count& b) { return !b.n || (a.n && *a.n <= *b.n); }

struct DeskRun {
  bool ok = false;
  std::string error;
  fs::path dir;
  double seconds = 0.0;
};

DeskRun run_desk_scale(const std::string& tag, int workers) {
  DeskRun r;
  r.dir = work_dir() / ("desk_scale_" + tag);
  fs::remove_all(r.dir);
  const auto t0 = std::chrono::steady_clock::now();
  int status = 0;
  const auto out = run_command(cli() + " --workers " + std::to_string(workers) + " evaluate \"" + SLACKSIM_DESK_PLAN +
                                   "\" -o \"" + r.dir.string() + "\"",
                               status);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.ok = status == 0 && fs::exists(r.dir / "summary.csv");
  if (!r.ok) r.error = out;
  return r;
}

Verdict criterion_security(const DeskRun& run) {
  if (!run.ok) return {false, "evaluate failed: " + run.error};
  auto s = read_summary(run.dir);
  const auto get = [&](const char* core, const char* eval) { return s[core][eval]; };
  const auto ratio = [&](const Count& num, const Count& den) {
    // Lower bound when the numerator is unbroken: the attack budget stands in for its count.
    const double n = num.n ? static_cast<double>(*num.n) : std::stod(num.text.substr(1));
    return n / static_cast<double>(*den.n);
  };
  std::ostringstream os;
  bool ok = true;

  const auto io = get("io-baseline", "basic"), ob = get("ooo-baseline", "basic"), rp = get("random-iso-perf", "basic"),
             pb = get("paradise", "basic");
  const bool a_order = less_equal(io, ob) && less(ob, rp) && less(rp, pb);
  const double a_ratio = ob.n ? ratio(pb, ob) : 0.0;
  const bool a = a_order && a_ratio >= 20.0;
  os << "a=" << (a ? "PASS" : "FAIL") << " (io " << io.text << " <= ooo " << ob.text << " < iso-perf " << rp.text
     << " < paradise " << pb.text << ", ratio " << (pb.n ? "" : ">=") << fmt(a_ratio, 1) << "x)";
  ok = ok && a;

  bool b = true;
  os << "; b=";
  std::ostringstream bd;
  for (const char* core : {"paradise", "random-aggressive"}) {
    const auto ed = get(core, "educated"), ba = get(core, "basic");
    const bool fewer = less(ed, ba);
    b = b && fewer;
    bd << ' ' << core << " educated " << ed.text << (fewer ? " < " : " !< ") << "basic " << ba.text << ';';
  }
  os << (b ? "PASS" : "FAIL") << " (" << bd.str().substr(1, bd.str().size() - 2) << ")";
  ok = ok && b;

  bool c = true;
  std::ostringstream cd;
  for (const char* core : {"paradise", "random-iso-perf", "random-iso-security", "random-aggressive"}) {
    const auto ad = get(core, "advanced"), ed = get(core, "educated");
    const bool le = less_equal(ad, ed);
    c = c && le;
    cd << core << " adv " << ad.text << (le ? " <= " : " !<= ") << "edu " << ed.text << "; ";
  }
  const auto oa = get("ooo-baseline", "advanced");
  const bool ooo_fewer = less(oa, ob);
  const double c_ratio = oa.n ? ratio(get("paradise", "advanced"), oa) : 0.0;
  c = c && ooo_fewer && c_ratio >= 5.0;
  cd << "ooo adv " << oa.text << (ooo_fewer ? " < " : " !< ") << "basic " << ob.text << "; paradise/ooo adv "
     << fmt(c_ratio, 1) << "x";
  os << "; c=" << (c ? "PASS" : "FAIL") << " (" << cd.str() << ")";
  ok = ok && c;

  const bool fast = run.seconds <= 3600.0;
  os << "; runtime " << fmt(run.seconds, 0) << " s";
  ok = ok && fast;
  return {ok, os.str()};
}

Verdict criterion_determinism(const DeskRun& w1, const DeskRun& w8a, const DeskRun& w8b) {
  for (const auto* r : {&w1, &w8a, &w8b}) {
    if (!r->ok) return {false, "evaluate failed: " + r->error};
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(w1.dir)) {
    const auto name = entry.path().filename();
    const auto base = read_file(entry.path());
    for (const auto* other : {&w8a, &w8b}) {
      if (!fs::exists(other->dir / name) || read_file(other->dir / name) != base) {
        return {false, name.string() + " differs between runs"};
      }
    }
    ++files;
  }
  std::size_t other_files = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(w8a.dir)) ++other_files;
  if (other_files != files) return {false, "runs wrote different file sets"};
  return {true, std::to_string(files) + " CSV files byte-identical across --workers 1, --workers 8 and a repeat run"};
}

// ---------------------------------------------------------------------------
// 8. Fixed-vs-random t-test diagnostic.

Verdict criterion_ttest() {
  const auto fixed = (work_dir() / "ttest_fixed.ptrc").string();
  const auto random = (work_dir() / "ttest_random.ptrc").string();
  int status = 0;
  std::string out = run_command(cli() + " --seed 11 collect --core ooo-baseline --kind attack -n 5000 "
                                        "--fixed-plaintext 00112233445566778899aabbccddeeff -o \"" + fixed + "\"",
                                status);
  if (status != 0) return {false, "collect (fixed) failed: " + out};
  out = run_command(cli() + " --seed 12 collect --core ooo-baseline --kind attack -n 5000 -o \"" + random + "\"", status);
  if (status != 0) return {false, "collect (random) failed: " + out};
  out = run_command(cli() + " ttest --fixed \"" + fixed + "\" --random \"" + random + "\"", status);
  if (status != 0) return {false, "ttest failed: " + out};
  const auto pos = out.find("max |t| = ");
  if (pos == std::string::npos) return {false, "no max |t| in output"};
  const double max_t = std::stod(out.substr(pos + 10));
  const bool labelled = out.find("diagnostic only") != std::string::npos;
  return {max_t > 4.5 && labelled,
          "max |t| = " + fmt(max_t, 1) + " over 5000 + 5000 traces" + (labelled ? ", output labelled diagnostic only" : ", label missing")};
}

}  // namespace

int main() {
  fs::create_directories(work_dir());
  int failures = 0;
  const auto report = [&](int id, const char* name, const std::function<Verdict()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << id << " (" << name << ", " << fmt(secs, 1) << " s): " << v.detail
              << std::endl;
  };

  report(1, "functional correctness", criterion_functional);
  report(2, "scheduling soundness", criterion_scheduling);
  report(3, "slack unit safety and convergence", criterion_slack_kernel);
  report(4, "performance", criterion_performance);
  report(5, "attack-stack oracles", criterion_attack_oracles);

  DeskRun w1, w8a, w8b;
  report(6, "security ordering", [&] {
    w1 = run_desk_scale("w1", 1);
    return criterion_security(w1);
  });
  report(7, "determinism", [&] {
    w8a = run_desk_scale("w8a", 8);
    w8b = run_desk_scale("w8b", 8);
    return criterion_determinism(w1, w8a, w8b);
  });
  report(8, "t-test diagnostic", criterion_ttest);

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
