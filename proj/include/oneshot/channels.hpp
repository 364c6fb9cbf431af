#pragma once

// Quantum channels in Stinespring form E(X) = tr_env(V X V^dagger), with V an
// isometry from C^in into C^out (x) C^env (out is the outer index).

#include <cstdint>

#include "oneshot/errors.hpp"
#include "oneshot/linalg.hpp"
#include "oneshot/random.hpp"

namespace oneshot::harness {

class Channel {
 public:
  Channel(CMatrix isometry, int dim_out, int dim_env) : v_(std::move(isometry)), out_(dim_out), env_(dim_env) {
    if (v_.rows() != static_cast<Eigen::Index>(dim_out) * dim_env) throw DomainError("Channel: isometry rows must be out * env");
    const CMatrix gram = v_.adjoint() * v_;
    if (detail::max_abs(gram - CMatrix::Identity(gram.rows(), gram.cols())) > 1e-10) {
      throw DomainError("Channel: V is not an isometry (trace preservation fails)");
    }
  }

  int dim_in() const { return static_cast<int>(v_.cols()); }
  int dim_out() const { return out_; }
  int dim_env() const { return env_; }
  const CMatrix& isometry() const { return v_; }

  CMatrix apply(const CMatrix& x) const {
    if (x.rows() != v_.cols()) throw DomainError("Channel: input dimension mismatch");
    return detail::hermitian_part(partial_trace_b(v_ * x * v_.adjoint(), out_, env_));
  }

  QuantumState apply(const QuantumState& rho) const {
    CMatrix y = apply(rho.matrix());
    if (rho.is_normalized()) y /= y.trace().real();
    return QuantumState(y, rho.normalization());
  }

  PositiveOperator apply(const PositiveOperator& sigma) const { return PositiveOperator(apply(sigma.matrix())); }

 private:
  CMatrix v_;
  int out_;
  int env_;
};

inline Channel identity_channel(int d) { return Channel(CMatrix::Identity(d, d), d, 1); }

/// Random channel from a Haar isometry (the first dim_in columns of a Haar
/// unitary on C^out (x) C^env).
inline Channel gen_channel(int dim_in, int dim_env, std::uint64_t seed, int dim_out = 0) {
  if (dim_out == 0) dim_out = dim_in;
  if (dim_in < 1 || dim_env < 1 || dim_out < 1) throw DomainError("gen_channel: dimensions must be >= 1");
  if (dim_out * dim_env < dim_in) throw DomainError("gen_channel: out * env must be >= in for an isometry");
  random::SplitMix64 rng(seed);
  const CMatrix u = random::haar_unitary(static_cast<Eigen::Index>(dim_out) * dim_env, rng);
  return Channel(u.leftCols(dim_in), dim_out, dim_env);
}

/// Dephasing in the orthonormal basis given by the columns of u.
inline Channel pinching_channel(const CMatrix& u) {
  const Eigen::Index d = u.rows();
  CMatrix v = CMatrix::Zero(d * d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    // |u_i> (x) |i> <u_i|
    for (Eigen::Index a = 0; a < d; ++a) v.row(a * d + i) += u(a, i) * u.col(i).adjoint();
  }
  return Channel(v, static_cast<int>(d), static_cast<int>(d));
}

/// Pinching in a Haar-random basis.
inline Channel gen_pinching(int d, std::uint64_t seed) {
  random::SplitMix64 rng(seed);
  return pinching_channel(random::haar_unitary(d, rng));
}

}  // namespace oneshot::harness
