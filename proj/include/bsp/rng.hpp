#ifndef BSP_RNG_HPP
#define BSP_RNG_HPP

#include <cstdint>
#include <string_view>

namespace bsp {

/// Deterministic, platform-independent generator (xoshiro256**, seeded
/// through splitmix64). Identical seeds give identical draw sequences on
/// every platform; period is 2^256 - 1.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53 bits of precision.
  double next_unit();

  /// Uniform on (0, 1): redraws on an exact 0.
  double next_lambda();

  /// Unbiased uniform integer on [0, n). n must be >= 1.
  std::uint64_t next_index(std::uint64_t n);

 private:
  std::uint64_t s_[4];
};

/// Substream seed for (master, label):
///   splitmix64(master XOR fnv1a64(label)).
/// Adding a new label never perturbs the substream of any other label.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

inline Rng derive(std::uint64_t master, std::string_view label) {
  return Rng(derive_seed(master, label));
}

}  // namespace bsp

#endif
