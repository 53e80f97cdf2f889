#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "filab/vec.hpp"

namespace filab {

namespace detail {
// splitmix64; used to derive independent per-trial streams from (seed, trial).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Deterministic RNG wrapper. Trials of an experiment draw from independent
// streams via for_trial(seed, index), so per-trial results do not depend on
// execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t s = seed ^ (0xd1342543de82ef95ULL * (trial + 1));
    return Rng(detail::splitmix64(s));
  }

  double uniform() { return unif_(gen_); }

  double gaussian() { return normal_(gen_); }

  Vec gaussian_vec(int d) {
    Vec v(static_cast<std::size_t>(d));
    for (double& x : v) x = gaussian();
    return v;
  }

  // Uniform direction on the unit sphere.
  Vec unit_vec(int d) {
    for (;;) {
      Vec v = gaussian_vec(d);
      const double n = norm(v);
      if (n > 1e-12) {
        scale(v, 1.0 / n);
        return v;
      }
    }
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace filab
