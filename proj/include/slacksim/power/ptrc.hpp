#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "slacksim/power/trace.hpp"

namespace slacksim::power {

// PTRC layout, all integers little-endian:
//   "PTRC" | u16 version | u8 kind | u32 n_traces | u32 n_samples
//   | u16 id_len | id bytes | u64 master_seed
//   | n_traces x { 16 B plaintext | 16 B key | n_samples x u16 }

inline constexpr std::uint16_t kPtrcVersion = 1;

enum class PtrcErrorKind { BadMagic, VersionMismatch, Truncated, SampleOverflow, Io };

class PtrcError : public std::runtime_error {
 public:
  PtrcError(PtrcErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  PtrcErrorKind kind() const noexcept { return kind_; }

 private:
  PtrcErrorKind kind_;
};

void write_set(std::ostream& out, const TraceSet& ts);
TraceSet read_set(std::istream& in);

void save_set(const TraceSet& ts, const std::string& path);
TraceSet load_set(const std::string& path);

}  // namespace slacksim::power
