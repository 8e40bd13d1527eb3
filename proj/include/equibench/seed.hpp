#pragma once

#include <bit>
#include <concepts>
#include <cstdint>
#include <string_view>

namespace equibench {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t seed_key(std::string_view text) noexcept { return fnv1a(text); }
inline std::uint64_t seed_key(double value) noexcept { return std::bit_cast<std::uint64_t>(value); }
template <std::integral T>
std::uint64_t seed_key(T value) noexcept {
  return static_cast<std::uint64_t>(value);
}

/// Stable seed for a work cell. Depends only on the key values, never on
/// scheduling or on the position of the cell in a configuration list.
template <typename... Keys>
std::uint64_t derive_seed(std::uint64_t base, const Keys&... keys) noexcept {
  std::uint64_t h = splitmix64(base);
  ((h = splitmix64(h ^ seed_key(keys))), ...);
  return h;
}

}  // namespace equibench
