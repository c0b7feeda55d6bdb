#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace slacksim::sca {

extern const std::array<std::uint8_t, 256> kSbox;

inline int hamming_weight(std::uint32_t v) noexcept { return std::popcount(v); }

/// HW(Sbox[p ^ k]), the first-round leakage hypothesis.
inline int sbox_hypothesis(std::uint8_t plaintext_byte, std::uint8_t key_guess) noexcept {
  return hamming_weight(kSbox[plaintext_byte ^ key_guess]);
}

/// hypothesis_table()[k][p] == sbox_hypothesis(p, k).
const std::array<std::array<std::uint8_t, 256>, 256>& hypothesis_table() noexcept;

}  // namespace slacksim::sca
