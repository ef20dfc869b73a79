#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace momentlab {

/// Philox4x32-10 counter-based generator.  Output depends only on
/// (key, counter), which is what lets sample blocks run in any order.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Counter operator()(Counter ctr) const noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
};

/// Two independent standard normals for sample `index` of block `block`.
/// Box-Muller over one Philox call.
std::pair<double, double> normal_pair(const Philox4x32& gen, std::uint64_t index,
                                      std::uint32_t block) noexcept;

/// Uniform in (0, 1) from 32 random bits.
inline double to_unit_open(std::uint32_t bits) noexcept {
  return (static_cast<double>(bits) + 0.5) * 0x1p-32;
}

}  // namespace momentlab
