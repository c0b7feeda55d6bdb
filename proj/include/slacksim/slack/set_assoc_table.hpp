#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace slacksim::slack {

/// Set-associative array with true LRU replacement per set.
///
/// Recency is tracked with a per-table access counter: the way with the
/// smallest stamp in a set is the least recently used one. Set index is
/// (tag / 4) mod sets, the tag is the full PC.
template <typename Payload>
class SetAssocTable {
 public:
  struct Entry {
    bool valid = false;
    std::uint32_t tag = 0;
    std::uint64_t stamp = 0;
    Payload payload{};
  };

  SetAssocTable(unsigned sets, unsigned ways) : sets_(sets), ways_(ways), entries_(static_cast<std::size_t>(sets) * ways) {
    if (sets == 0 || ways == 0) throw std::invalid_argument("table geometry must be at least 1x1");
  }

  unsigned sets() const noexcept { return sets_; }
  unsigned ways() const noexcept { return ways_; }
  unsigned set_of(std::uint32_t tag) const noexcept { return (tag / 4U) % sets_; }

  std::optional<unsigned> find_way(unsigned set, std::uint32_t tag) const noexcept {
    for (unsigned w = 0; w < ways_; ++w) {
      const Entry& e = entry(set, w);
      if (e.valid && e.tag == tag) return w;
    }
    return std::nullopt;
  }

  /// Lookup without touching recency.
  const Payload* peek(std::uint32_t tag) const noexcept {
    const unsigned s = set_of(tag);
    const auto w = find_way(s, tag);
    return w ? &entry(s, *w).payload : nullptr;
  }

  /// Lookup that promotes a hit to most recently used.
  Payload* access(std::uint32_t tag) noexcept {
    const unsigned s = set_of(tag);
    const auto w = find_way(s, tag);
    if (!w) return nullptr;
    lru_access(s, *w);
    return &entry(s, *w).payload;
  }

  void lru_access(unsigned set, unsigned way) { entry(set, way).stamp = ++clock_; }

  /// Inserts (or overwrites) `tag` in `set`; returns the evicted entry when a
  /// valid entry had to make room.
  std::optional<Entry> lru_insert(unsigned set, std::uint32_t tag, Payload payload) {
    if (set >= sets_) throw std::out_of_range("set index out of range");
    if (const auto hit = find_way(set, tag)) {
      Entry& e = entry(set, *hit);
      e.payload = std::move(payload);
      lru_access(set, *hit);
      return std::nullopt;
    }
    unsigned victim = 0;
    bool found_free = false;
    for (unsigned w = 0; w < ways_; ++w) {
      if (!entry(set, w).valid) {
        victim = w;
        found_free = true;
        break;
      }
      if (entry(set, w).stamp < entry(set, victim).stamp) victim = w;
    }
    std::optional<Entry> evicted;
    if (!found_free) evicted = entry(set, victim);
    Entry& e = entry(set, victim);
    e.valid = true;
    e.tag = tag;
    e.payload = std::move(payload);
    lru_access(set, victim);
    return evicted;
  }

  std::optional<Entry> insert(std::uint32_t tag, Payload payload) { return lru_insert(set_of(tag), tag, std::move(payload)); }

  bool erase(std::uint32_t tag) noexcept {
    const unsigned s = set_of(tag);
    const auto w = find_way(s, tag);
    if (!w) return false;
    entry(s, *w) = Entry{};
    return true;
  }

  const Entry& entry(unsigned set, unsigned way) const { return entries_[static_cast<std::size_t>(set) * ways_ + way]; }

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.valid ? 1 : 0;
    return n;
  }

 private:
  Entry& entry(unsigned set, unsigned way) { return entries_[static_cast<std::size_t>(set) * ways_ + way]; }

  unsigned sets_;
  unsigned ways_;
  std::uint64_t clock_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace slacksim::slack
