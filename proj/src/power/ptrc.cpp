#include "slacksim/power/ptrc.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace slacksim::power {

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF);
  out.write(buf, sizeof(T));
}

void read_exact(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw PtrcError(PtrcErrorKind::Truncated, "PTRC file is truncated");
}

template <typename T>
T get(std::istream& in) {
  unsigned char buf[sizeof(T)];
  read_exact(in, reinterpret_cast<char*>(buf), sizeof(T));
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

void write_set(std::ostream& out, const TraceSet& ts) {
  if (ts.size() > std::numeric_limits<std::uint32_t>::max() || ts.n_samples() > std::numeric_limits<std::uint32_t>::max()) {
    throw PtrcError(PtrcErrorKind::SampleOverflow, "trace set too large for PTRC");
  }
  if (ts.config_id.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw PtrcError(PtrcErrorKind::SampleOverflow, "config id too long for PTRC");
  }
  for (std::size_t i = 0; i < ts.samples().size(); ++i) {
    if (ts.samples()[i] > std::numeric_limits<std::uint16_t>::max()) {
      std::ostringstream os;
      os << "sample value " << ts.samples()[i] << " (trace " << i / ts.n_samples() << ") exceeds u16";
      throw PtrcError(PtrcErrorKind::SampleOverflow, os.str());
    }
  }
  out.write("PTRC", 4);
  put<std::uint16_t>(out, kPtrcVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(ts.kind));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ts.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ts.n_samples()));
  put<std::uint16_t>(out, static_cast<std::uint16_t>(ts.config_id.size()));
  out.write(ts.config_id.data(), static_cast<std::streamsize>(ts.config_id.size()));
  put<std::uint64_t>(out, ts.master_seed);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out.write(reinterpret_cast<const char*>(ts.plaintext(i).data()), 16);
    out.write(reinterpret_cast<const char*>(ts.key(i).data()), 16);
    for (std::uint32_t s : ts.trace(i)) put<std::uint16_t>(out, static_cast<std::uint16_t>(s));
  }
  if (!out) throw PtrcError(PtrcErrorKind::Io, "write failed");
}

TraceSet read_set(std::istream& in) {
  char magic[4];
  read_exact(in, magic, 4);
  if (std::string_view(magic, 4) != "PTRC") throw PtrcError(PtrcErrorKind::BadMagic, "not a PTRC file (bad magic)");
  const auto version = get<std::uint16_t>(in);
  if (version != kPtrcVersion) {
    throw PtrcError(PtrcErrorKind::VersionMismatch, "unsupported PTRC version " + std::to_string(version));
  }
  const auto kind = get<std::uint8_t>(in);
  if (kind > 1) throw PtrcError(PtrcErrorKind::BadMagic, "unknown set kind " + std::to_string(kind));
  const auto n_traces = get<std::uint32_t>(in);
  const auto n_samples = get<std::uint32_t>(in);
  const auto id_len = get<std::uint16_t>(in);
  std::string id(id_len, '\0');
  read_exact(in, id.data(), id_len);
  const auto seed = get<std::uint64_t>(in);

  TraceSet ts(static_cast<SetKind>(kind), n_traces, n_samples);
  ts.config_id = std::move(id);
  ts.master_seed = seed;
  std::vector<unsigned char> row(2 * static_cast<std::size_t>(n_samples));
  for (std::size_t i = 0; i < n_traces; ++i) {
    read_exact(in, reinterpret_cast<char*>(ts.plaintext(i).data()), 16);
    read_exact(in, reinterpret_cast<char*>(ts.key(i).data()), 16);
    read_exact(in, reinterpret_cast<char*>(row.data()), row.size());
    auto t = ts.trace(i);
    for (std::size_t s = 0; s < n_samples; ++s) t[s] = static_cast<std::uint32_t>(row[2 * s] | (row[2 * s + 1] << 8));
  }
  return ts;
}

void save_set(const TraceSet& ts, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PtrcError(PtrcErrorKind::Io, "cannot open for writing: " + path);
  write_set(out, ts);
}

TraceSet load_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PtrcError(PtrcErrorKind::Io, "cannot open: " + path);
  return read_set(in);
}

}  // namespace slacksim::power
