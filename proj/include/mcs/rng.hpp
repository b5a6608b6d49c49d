#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace mcs {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based stream. Children are derived from the key only, so the
// stream for (run, step, entity) does not depend on how many draws other
// streams consumed.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key = 0) : key_(splitmix64(key)), counter_(0) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return splitmix64(key_ ^ splitmix64(++counter_)); }

  Rng child(std::uint64_t tag) const {
    Rng r;
    r.key_ = splitmix64(key_ + 0xD1B54A32D192ED03ULL * (tag + 1));
    r.counter_ = 0;
    return r;
  }
  template <typename... Tags>
  Rng child(std::uint64_t tag, Tags... rest) const {
    return child(tag).child(static_cast<std::uint64_t>(rest)...);
  }

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> d(0, n - 1);
    return d(*this);
  }
  int integer(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(*this);
  }

  double normal(double mean, double sd) {
    if (sd <= 0.0) return mean;
    std::normal_distribution<double> d(mean, sd);
    return d(*this);
  }

  // Gaussian conditioned on x >= 0 (resampled). Falls back to the mean if
  // the mass above zero is negligible.
  double truncated_normal(double mean, double sd) {
    if (sd <= 0.0) return std::max(mean, 0.0);
    for (int attempt = 0; attempt < 64; ++attempt) {
      double x = normal(mean, sd);
      if (x >= 0.0) return x;
    }
    return std::max(mean, 0.0);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

// Stream tags so call sites don't collide.
enum class StreamTag : std::uint64_t {
  scenario = 1,
  step = 2,
  mcsp = 3,
  mu = 4,
  execution = 5,
};

inline std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

}  // namespace mcs
