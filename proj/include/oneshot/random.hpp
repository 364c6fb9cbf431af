#pragma once

// Reproducible random numbers and random matrices.
//
// Generator: SplitMix64 in counter mode. Output k (k = 1, 2, ...) of a stream
// with seed s is mix(s + k * 0x9E3779B97F4A7C15) with the standard SplitMix64
// finalizer. Uniforms are (u >> 11) * 2^-53. Normals use Box-Muller on two
// consecutive uniforms u1, u2: sqrt(-2 ln(1 - u1)) * cos(2 pi u2). A standard
// complex Gaussian is (z1 + i z2) / sqrt(2) from two consecutive normals.
// Matrices are filled row-major. Haar unitaries are the Q factor of a
// Householder QR of a complex Ginibre matrix, with column j multiplied by
// R_jj / |R_jj| so the distribution is exactly Haar.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "oneshot/linalg.hpp"

namespace oneshot::random {

inline std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next() {
    ++counter_;
    return splitmix_finalize(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) / std::sqrt(2.0);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Deterministic child seed for (base, a, b, c), e.g. (battery seed, suite, cell, trial).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = splitmix_finalize(base + 0x9E3779B97F4A7C15ULL);
  h = splitmix_finalize(h ^ (a + 0x632BE59BD9B4E019ULL));
  h = splitmix_finalize(h ^ (b + 0x8CB92BA72F3D8DD7ULL));
  h = splitmix_finalize(h ^ (c + 0xD1B54A32D192ED03ULL));
  return h;
}

inline CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, SplitMix64& rng) {
  CMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

inline CMatrix haar_unitary(Eigen::Index d, SplitMix64& rng) {
  const CMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    if (a > 0.0) q.col(j) *= rjj / a;
  }
  return q;
}

/// Haar-random unit vector in C^d (first column of a Haar unitary).
inline CVector haar_vector(Eigen::Index d, SplitMix64& rng) { return haar_unitary(d, rng).col(0); }

}  // namespace oneshot::random
