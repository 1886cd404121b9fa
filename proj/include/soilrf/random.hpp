#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace soilrf {

/// Seeded standard-normal source. std::normal_distribution is
/// implementation-defined, so the polar method is spelled out here to keep
/// seeded output identical across standard libraries.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}
  NormalSampler(std::initializer_list<std::uint64_t> key) : engine_(mix(key)) {}

  double uniform() {
    // 53 random bits in (0, 1).
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

  double operator()(double mean, double stddev) { return mean + stddev * (*this)(); }

 private:
  // splitmix64 over the key words.
  static std::uint64_t mix(std::initializer_list<std::uint64_t> key) {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (std::uint64_t k : key) {
      h ^= k + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      std::uint64_t z = (h += 0x9E3779B97F4A7C15ull);
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      h = z ^ (z >> 31);
    }
    return h;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace soilrf
