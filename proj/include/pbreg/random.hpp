#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace pbreg {

// Derives the seed of stream `index` from a master seed. Streams for
// different indices are statistically independent, so replicate b always
// sees the same numbers regardless of scheduling or worker count.
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index);

// Seeded generator with platform-independent variate construction: every
// variate is built from the raw 64-bit Mersenne Twister output by code in
// this library, never by std:: distributions (whose algorithms vary).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by inversion.
  double normal();
  /// Gamma(shape, 1), Marsaglia–Tsang.
  double gamma(double shape);
  double chi_square(double df);
  double student_t(double df);
  double beta(double a, double b);
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace pbreg
