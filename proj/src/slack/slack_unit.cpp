#include "slacksim/slack/slack_unit.hpp"

#include <algorithm>
#include <cassert>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace slacksim::slack {

void SlackConfig::validate() const {
  if (ways == 0 || sets == 0) throw std::invalid_argument("slack unit ways and sets must be >= 1");
  if (pc_offset_bits != 8) throw std::invalid_argument("slack unit DT offsets are 8 bits wide");
  if (slack_field_bits == 0 || slack_field_bits > 16) throw std::invalid_argument("slack field width must be in [1, 16] bits");
}

SlackUnit::SlackUnit(SlackConfig config)
    : config_(config), dt_(config.sets, config.ways), nct_(config.sets, config.ways), ct_(config.sets, config.ways) {
  config_.validate();
}

std::optional<DelayDecision> SlackUnit::on_dispatch(std::uint32_t pc, Prng& rng) {
  ++stats_.dispatch_lookups;
  NctEntry* e = nct_.access(pc);
  if (!e) return std::nullopt;
  if (!e->stable) {
    ++stats_.unstable_injections;
    return DelayDecision{e->slack, Phase::Unstable};
  }
  ++stats_.stable_draws;
  const auto delay = static_cast<unsigned>(rng.uniform(e->slack));
  assert(delay <= e->slack);
  return DelayDecision{delay, Phase::Stable};
}

void SlackUnit::mark_critical(std::uint32_t pc) {
  nct_.erase(pc);
  ct_.insert(pc, CtEntry{});
}

void SlackUnit::record_non_critical(std::uint32_t pc, unsigned slack) {
  if (ct_.access(pc) != nullptr) {
    // Critical for some other consumer: critical status wins.
    ++stats_.conflicts;
    return;
  }
  slack = std::min(slack, config_.max_slack());
  if (NctEntry* e = nct_.access(pc)) {
    e->slack = std::min(e->slack, slack);
    return;
  }
  if (slack == 0) return;
  nct_.insert(pc, NctEntry{slack, false});
}

std::optional<std::int32_t> SlackUnit::representable_offset(std::uint32_t consumer_pc, std::uint32_t producer_pc) const {
  const std::int64_t diff = (static_cast<std::int64_t>(producer_pc) - static_cast<std::int64_t>(consumer_pc)) / 4;
  const std::int64_t lo = -(std::int64_t{1} << (config_.pc_offset_bits - 1));
  const std::int64_t hi = (std::int64_t{1} << (config_.pc_offset_bits - 1)) - 1;
  if (diff < lo || diff > hi) return std::nullopt;
  return static_cast<std::int32_t>(diff);
}

void SlackUnit::on_issue(std::uint32_t consumer_pc, std::span<const ProducerObservation> producers) {
  if (producers.size() != 2 || producers[0].pc == producers[1].pc) return;
  ++stats_.classifications;
  const auto& a = producers[0];
  const auto& b = producers[1];

  if (a.completion == b.completion) {
    mark_critical(a.pc);
    mark_critical(b.pc);
    dt_.erase(consumer_pc);
    return;
  }
  const auto& critical = a.completion > b.completion ? a : b;
  const auto& non_critical = a.completion > b.completion ? b : a;
  const auto slack = static_cast<unsigned>(std::min<std::uint64_t>(critical.completion - non_critical.completion, config_.max_slack()));

  mark_critical(critical.pc);
  record_non_critical(non_critical.pc, slack);

  const auto offset = representable_offset(consumer_pc, non_critical.pc);
  if (DtEntry* d = dt_.access(consumer_pc)) {
    if (offset && d->producer_offset == *offset) {
      // Same non-critical producer as last time: the slack is confirmed.
      if (NctEntry* e = nct_.access(non_critical.pc)) e->stable = true;
    } else {
      const auto old_pc = static_cast<std::uint32_t>(static_cast<std::int64_t>(consumer_pc) + 4 * static_cast<std::int64_t>(d->producer_offset));
      nct_.erase(old_pc);
      if (offset) {
        d->producer_offset = *offset;
      } else {
        dt_.erase(consumer_pc);
      }
    }
  } else if (offset) {
    dt_.insert(consumer_pc, DtEntry{*offset});
  }
}

void SlackUnit::update_after_injection(std::uint32_t producer_pc, unsigned /*injected_delay*/, unsigned overshoot) {
  NctEntry* e = nct_.access(producer_pc);
  if (!e) return;
  if (e->stable && overshoot == 0) return;
  ++stats_.eq2_updates;
  if (overshoot >= e->slack) {
    mark_critical(producer_pc);
    return;
  }
  e->slack -= overshoot;
  e->stable = overshoot == 0;
}

void SlackUnit::observe_issue(std::uint32_t consumer_pc, std::span<const ProducerObservation> producers) {
  if (producers.size() != 2 || producers[0].pc == producers[1].pc) return;
  const bool injected0 = producers[0].injected_delay > 0;
  const bool injected1 = producers[1].injected_delay > 0;
  if (!injected0 && !injected1) {
    on_issue(consumer_pc, producers);
    return;
  }
  for (int i = 0; i < 2; ++i) {
    const auto& self = producers[static_cast<std::size_t>(i)];
    const auto& other = producers[static_cast<std::size_t>(1 - i)];
    if (self.injected_delay == 0) continue;
    const std::uint64_t over = self.completion > other.completion ? self.completion - other.completion : 0;
    update_after_injection(self.pc, self.injected_delay, static_cast<unsigned>(std::min<std::uint64_t>(over, config_.max_slack() + 1ULL)));
  }
}

std::optional<NctEntry> SlackUnit::nct(std::uint32_t pc) const {
  const auto* e = nct_.peek(pc);
  return e ? std::optional<NctEntry>(*e) : std::nullopt;
}

bool SlackUnit::in_ct(std::uint32_t pc) const { return ct_.peek(pc) != nullptr; }

std::optional<DtEntry> SlackUnit::dt(std::uint32_t consumer_pc) const {
  const auto* e = dt_.peek(consumer_pc);
  return e ? std::optional<DtEntry>(*e) : std::nullopt;
}

void SlackUnit::seed_nct(std::uint32_t pc, NctEntry entry) {
  ct_.erase(pc);
  entry.slack = std::min(entry.slack, config_.max_slack());
  nct_.insert(pc, entry);
}

void SlackUnit::seed_ct(std::uint32_t pc) { mark_critical(pc); }

std::size_t SlackUnit::unstable_entries() const {
  std::size_t n = 0;
  for (unsigned s = 0; s < nct_.sets(); ++s) {
    for (unsigned w = 0; w < nct_.ways(); ++w) {
      const auto& e = nct_.entry(s, w);
      if (e.valid && !e.payload.stable) ++n;
    }
  }
  return n;
}

std::string SlackUnit::dump() const {
  std::ostringstream os;
  const auto pc = [](std::uint32_t v) {
    std::ostringstream h;
    h << "0x" << std::hex << std::setw(4) << std::setfill('0') << v;
    return h.str();
  };
  for (unsigned s = 0; s < dt_.sets(); ++s) {
    for (unsigned w = 0; w < dt_.ways(); ++w) {
      const auto& e = dt_.entry(s, w);
      if (e.valid) os << "DT  set=" << s << " way=" << w << " pc=" << pc(e.tag) << " offset=" << e.payload.producer_offset << '\n';
    }
  }
  for (unsigned s = 0; s < nct_.sets(); ++s) {
    for (unsigned w = 0; w < nct_.ways(); ++w) {
      const auto& e = nct_.entry(s, w);
      if (e.valid) {
        os << "NCT set=" << s << " way=" << w << " pc=" << pc(e.tag) << " slack=" << e.payload.slack
           << " stable=" << (e.payload.stable ? 1 : 0) << '\n';
      }
    }
  }
  for (unsigned s = 0; s < ct_.sets(); ++s) {
    for (unsigned w = 0; w < ct_.ways(); ++w) {
      const auto& e = ct_.entry(s, w);
      if (e.valid) os << "CT  set=" << s << " way=" << w << " pc=" << pc(e.tag) << '\n';
    }
  }
  return os.str();
}

void SlackUnit::check_invariants() const {
  for (unsigned s = 0; s < nct_.sets(); ++s) {
    for (unsigned w = 0; w < nct_.ways(); ++w) {
      const auto& e = nct_.entry(s, w);
      if (!e.valid) continue;
      if (ct_.peek(e.tag) != nullptr) {
        throw std::logic_error("pc present in both NCT and CT");
      }
      if (e.payload.slack > config_.max_slack()) throw std::logic_error("NCT slack exceeds field width");
    }
  }
}

}  // namespace slacksim::slack
