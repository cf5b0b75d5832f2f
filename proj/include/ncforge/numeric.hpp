#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ncf {

// The single rounding rule used for frame sampling, hotspot placement and
// timestamp-to-frame mapping: ties go away from zero.
inline double round_half_away(double x) { return std::round(x); }

inline std::int64_t round_to_index(double x) { return static_cast<std::int64_t>(std::round(x)); }

// Seeded generator with a platform-independent draw sequence. std::mt19937_64
// is fully specified by the standard; the std:: distributions are not, so the
// uniform and normal draws are derived here from raw engine output.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ncf
