#pragma once

#include <cmath>
#include <cstdint>

#include "spw/linalg.hpp"

namespace spw {

// Deterministic random stream used by every experiment suite.  splitmix64 is
// small, has no hidden global state, and gives the same bytes on every
// platform, which is what makes repeated runs with one seed byte-identical.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the cached second variate keeps the
  // stream consumption deterministic (two uniforms per pair).
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Complex standard normal: real and imaginary parts N(0, 1/2), so
  // E|z|^2 = 1.
  cdbl next_complex_normal() {
    const double re = next_normal();
    const double im = next_normal();
    return cdbl(re * 0.7071067811865475244, im * 0.7071067811865475244);
  }

  CVec next_complex_vector(int n) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = next_complex_normal();
    return v;
  }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace spw
