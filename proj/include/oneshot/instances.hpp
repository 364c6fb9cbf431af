#pragma once

// Random test instances. Every instance is a pure function of its spec.

#include <cstdint>
#include <string>

#include "oneshot/errors.hpp"
#include "oneshot/linalg.hpp"
#include "oneshot/matrix_json.hpp"
#include "oneshot/random.hpp"

namespace oneshot::harness {

enum class InstanceKind { haar_mixed, ginibre, classical_diagonal, pure_bipartite, near_degenerate };

inline const char* to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::haar_mixed: return "haar-mixed";
    case InstanceKind::ginibre: return "ginibre";
    case InstanceKind::classical_diagonal: return "classical-diagonal";
    case InstanceKind::pure_bipartite: return "pure-bipartite";
    case InstanceKind::near_degenerate: return "near-degenerate";
  }
  return "unknown";
}

inline InstanceKind instance_kind_from_string(const std::string& s) {
  for (auto k : {InstanceKind::haar_mixed, InstanceKind::ginibre, InstanceKind::classical_diagonal,
                 InstanceKind::pure_bipartite, InstanceKind::near_degenerate})
    if (s == to_string(k)) return k;
  throw DomainError("unknown instance kind: " + s);
}

struct InstanceSpec {
  InstanceKind kind = InstanceKind::haar_mixed;
  int dim = 2;    // total dimension (dim_a * dim_b for bipartite kinds)
  int dim_a = 0;  // 0 when not bipartite
  int dim_b = 0;
  int rank = 2;
  std::uint64_t seed = 0;

  void validate() const {
    if (dim < 1) throw DomainError("InstanceSpec: dim must be >= 1");
    if (rank < 1 || rank > dim) throw DomainError("InstanceSpec: rank must lie in [1, dim]");
    if ((dim_a != 0 || dim_b != 0) && dim_a * dim_b != dim) throw DomainError("InstanceSpec: dim must equal dim_a * dim_b");
    if (kind == InstanceKind::pure_bipartite && rank != 1) throw DomainError("InstanceSpec: pure-bipartite needs rank 1");
  }
};

inline io::Json spec_to_json(const InstanceSpec& s) {
  io::Json j{{"kind", to_string(s.kind)}, {"dim", s.dim}, {"rank", s.rank}, {"seed", s.seed}};
  if (s.dim_a != 0) {
    j["dim_a"] = s.dim_a;
    j["dim_b"] = s.dim_b;
  }
  return j;
}

inline CMatrix gen_state_matrix(const InstanceSpec& spec) {
  spec.validate();
  random::SplitMix64 rng(spec.seed);
  const int d = spec.dim;
  const int r = spec.rank;
  switch (spec.kind) {
    case InstanceKind::haar_mixed: {
      // Reduced state of a Haar pure state on C^d (x) C^r.
      const CVector psi = random::haar_vector(static_cast<Eigen::Index>(d) * r, rng);
      CMatrix m(d, r);
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < r; ++k) m(i, k) = psi(static_cast<Eigen::Index>(i) * r + k);
      CMatrix rho = m * m.adjoint();
      return rho / rho.trace().real();
    }
    case InstanceKind::ginibre: {
      const CMatrix g = random::ginibre(d, r, rng);
      CMatrix rho = g * g.adjoint();
      return rho / rho.trace().real();
    }
    case InstanceKind::classical_diagonal: {
      RVector p = RVector::Zero(d);
      for (int i = 0; i < r; ++i) p(i) = -std::log(1.0 - rng.uniform());
      p /= p.sum();
      return p.cast<Complex>().asDiagonal();
    }
    case InstanceKind::pure_bipartite: {
      const CVector psi = random::haar_vector(d, rng);
      return psi * psi.adjoint();
    }
    case InstanceKind::near_degenerate: {
      const CMatrix u = random::haar_unitary(d, rng);
      RVector p = RVector::Zero(d);
      for (int i = 0; i < r; ++i) p(i) = (1.0 + 1e-7 * rng.normal()) / r;
      p /= p.sum();
      return u * p.cast<Complex>().asDiagonal() * u.adjoint();
    }
  }
  throw DomainError("gen_state: unknown kind");
}

inline QuantumState gen_state(const InstanceSpec& spec) {
  return QuantumState(gen_state_matrix(spec), Normalization::normalized);
}

/// Full-rank positive operator: a normalized d x d Ginibre state times a
/// trace factor uniform in [0.5, 2].
inline PositiveOperator gen_sigma(int dim, std::uint64_t seed) {
  random::SplitMix64 rng(seed);
  const CMatrix g = random::ginibre(dim, dim, rng);
  CMatrix s = g * g.adjoint();
  s /= s.trace().real();
  return PositiveOperator(CMatrix(s * (0.5 + 1.5 * rng.uniform())));
}

/// Normalized full-rank Ginibre state (for sigma in S).
inline QuantumState gen_full_rank_state(int dim, std::uint64_t seed) {
  return gen_state({InstanceKind::ginibre, dim, 0, 0, dim, seed});
}

}  // namespace oneshot::harness
