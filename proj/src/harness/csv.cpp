#include "slacksim/harness/csv.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slacksim::harness {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_count(const std::optional<std::size_t>& n, std::size_t max) {
  return n ? std::to_string(*n) : ">" + std::to_string(max);
}

std::string ge_csv(const sca::GECurve& curve) {
  std::ostringstream os;
  os << "traces,ge\n";
  for (std::size_t i = 0; i < curve.traces.size(); ++i) os << curve.traces[i] << ',' << format_double(curve.ge[i]) << '\n';
  return os.str();
}

std::string scores_csv(const sca::ScoreVector& scores) {
  std::ostringstream os;
  os << "guess,score\n";
  for (std::size_t k = 0; k < scores.scores.size(); ++k) os << k << ',' << format_double(scores.scores[k]) << '\n';
  return os.str();
}

std::string correlation_csv(const std::vector<double>& correlation) {
  std::ostringstream os;
  os << "sample_index,correlation\n";
  for (std::size_t s = 0; s < correlation.size(); ++s) os << s << ',' << format_double(correlation[s]) << '\n';
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace slacksim::harness
