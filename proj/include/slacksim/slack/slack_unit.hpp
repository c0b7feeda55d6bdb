#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "slacksim/slack/set_assoc_table.hpp"
#include "slacksim/util/prng.hpp"

namespace slacksim::slack {

struct SlackConfig {
  unsigned ways = 4;
  unsigned sets = 16;
  unsigned pc_offset_bits = 8;
  unsigned slack_field_bits = 8;

  void validate() const;
  unsigned max_slack() const noexcept { return (1U << slack_field_bits) - 1U; }
  friend bool operator==(const SlackConfig&, const SlackConfig&) = default;
};

enum class Phase { Stable, Unstable };

struct DelayDecision {
  unsigned delay = 0;
  Phase phase = Phase::Unstable;
};

struct NctEntry {
  unsigned slack = 0;
  bool stable = false;
};

struct DtEntry {
  /// Non-critical producer PC = consumer PC + 4 * offset.
  std::int32_t producer_offset = 0;
};

struct CtEntry {};

/// One operand producer as seen when its consumer issues.
struct ProducerObservation {
  std::uint32_t pc = 0;
  std::uint64_t completion = 0;
  /// Delay injected into this dynamic instance at dispatch (0 = none).
  unsigned injected_delay = 0;
};

struct SlackUnitStats {
  std::uint64_t dispatch_lookups = 0;
  std::uint64_t unstable_injections = 0;
  std::uint64_t stable_draws = 0;
  std::uint64_t classifications = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t eq2_updates = 0;
};

/// Destination, Non-Critical and Critical tables plus the detection and
/// injection policy. A PC is never present in both the NCT and the CT.
class SlackUnit {
 public:
  explicit SlackUnit(SlackConfig config = {});

  const SlackConfig& config() const noexcept { return config_; }

  /// Step 1: query on dispatch. Miss -> nullopt; unstable hit -> the stored
  /// slack verbatim; stable hit -> uniform draw in [0, slack].
  std::optional<DelayDecision> on_dispatch(std::uint32_t pc, Prng& rng);

  /// Step 2: classification on issue of a consumer with two producers.
  /// Ignores injected delays; see observe_issue() for the routing used by the core.
  void on_issue(std::uint32_t consumer_pc, std::span<const ProducerObservation> producers);

  /// Unstable-phase correction: slack -= overshoot (floored at zero, which
  /// moves the PC to the CT); overshoot == 0 marks the entry stable. A stable
  /// entry that overshoots drops back to the unstable phase.
  void update_after_injection(std::uint32_t producer_pc, unsigned injected_delay, unsigned overshoot);

  /// Entry point used by the timing model: producers that carried an injected
  /// delay are corrected through update_after_injection() with
  /// overshoot = max(0, own completion - other completion); otherwise the
  /// observation is classified by on_issue().
  void observe_issue(std::uint32_t consumer_pc, std::span<const ProducerObservation> producers);

  std::optional<NctEntry> nct(std::uint32_t pc) const;
  bool in_ct(std::uint32_t pc) const;
  std::optional<DtEntry> dt(std::uint32_t consumer_pc) const;

  /// Direct table seeding for tests and replays.
  void seed_nct(std::uint32_t pc, NctEntry entry);
  void seed_ct(std::uint32_t pc);

  const SetAssocTable<NctEntry>& nct_table() const noexcept { return nct_; }
  const SetAssocTable<CtEntry>& ct_table() const noexcept { return ct_; }
  const SetAssocTable<DtEntry>& dt_table() const noexcept { return dt_; }

  /// Number of NCT entries still in the unstable phase.
  std::size_t unstable_entries() const;

  const SlackUnitStats& stats() const noexcept { return stats_; }

  /// Text dump of all three tables, one valid entry per line.
  std::string dump() const;

  /// Throws std::logic_error if a PC sits in both NCT and CT.
  void check_invariants() const;

 private:
  void mark_critical(std::uint32_t pc);
  void record_non_critical(std::uint32_t pc, unsigned slack);
  std::optional<std::int32_t> representable_offset(std::uint32_t consumer_pc, std::uint32_t producer_pc) const;

  SlackConfig config_;
  SetAssocTable<DtEntry> dt_;
  SetAssocTable<NctEntry> nct_;
  SetAssocTable<CtEntry> ct_;
  SlackUnitStats stats_;
};

}  // namespace slacksim::slack
