#ifndef POLARITY_RNG_HPP
#define POLARITY_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace polarity {

// Seeded randomness with bit-reproducible output. std::mt19937_64 is fully
// specified by the standard; the standard *distributions* are not, so all
// transforms (unit doubles, bounded ints) are implemented here by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double next_unit() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Unbiased integer in [0, n); n must be > 0. Rejection sampling keeps the
  // result identical on every platform.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = UINT64_MAX - UINT64_MAX % static_cast<std::uint64_t>(n);
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= bound);
    return static_cast<std::size_t>(x % static_cast<std::uint64_t>(n));
  }

 private:
  std::mt19937_64 gen_;
};

namespace rng_detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace rng_detail

// Derives an independent named seed stream from one master seed. Used so
// corpus generation, training, pair sampling and ablation each get their own
// reproducible stream.
inline std::uint64_t stream_seed(std::uint64_t master, std::string_view stream_name) {
  return rng_detail::splitmix64(master ^ rng_detail::fnv1a64(stream_name));
}

}  // namespace polarity

#endif  // POLARITY_RNG_HPP
