#pragma once

// Dense Hermitian matrix machinery: eigendecompositions, spectral functions,
// Moore-Penrose powers, positive-part projectors and state distances.
//
// Everything here is a pure function of immutable values.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "oneshot/errors.hpp"

namespace oneshot {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

namespace tol {
/// Relative Hermiticity tolerance for inputs (entrywise, relative to max |A_ij|).
inline constexpr double herm = 1e-10;
/// Absolute tolerance on the minimum eigenvalue of positive operators.
inline constexpr double psd = 1e-9;
/// "Strictly positive" eigenvalue cutoff for {X}_+, relative to ||X||_inf.
inline constexpr double eig_pos = 1e-10;
/// Numerical-rank cutoff relative to the largest eigenvalue.
inline constexpr double rank = 1e-12;
/// Trace tolerance for normalized / subnormalized states.
inline constexpr double trace = 1e-9;
/// Relative leakage tr((1 - Pi_sigma) rho) / tr(rho) below which supp(rho) is
/// considered to lie inside supp(sigma).
inline constexpr double support_leak = 1e-10;
}  // namespace tol

namespace detail {

inline double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline CMatrix hermitian_part(const CMatrix& a) { return (a + a.adjoint()) / 2.0; }

struct Eigh {
  RVector values;   // ascending
  CMatrix vectors;  // columns
};

inline Eigh eigh(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("Hermitian eigendecomposition did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RVector eigvalsh(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("Hermitian eigendecomposition did not converge");
  }
  return solver.eigenvalues();
}

/// V f(Lambda) V^dagger.
template <typename F>
CMatrix spectral_apply(const Eigh& e, F&& f) {
  RVector mapped(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) mapped(i) = f(e.values(i));
  CMatrix out = e.vectors * mapped.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  return hermitian_part(out);
}

inline double spectral_norm_herm(const RVector& values) {
  return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

/// Square root of a positive semidefinite matrix with eigenvalues below
/// rank * lambda_max treated as zero.
inline CMatrix psd_sqrt(const CMatrix& a) {
  const Eigh e = eigh(hermitian_part(a));
  const double cut = tol::rank * std::max(e.values.maxCoeff(), 0.0);
  return spectral_apply(e, [cut](double x) { return x > cut ? std::sqrt(x) : 0.0; });
}

inline double trace_norm(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().sum();
}

/// Projector onto the span of eigenvectors with eigenvalue > cutoff.
inline CMatrix projector_above(const Eigh& e, double cutoff) {
  return spectral_apply(e, [cutoff](double x) { return x > cutoff ? 1.0 : 0.0; });
}

/// Orthonormal basis (columns) of the support of a PSD matrix at rankTol.
inline CMatrix support_basis(const CMatrix& a) {
  const Eigh e = eigh(hermitian_part(a));
  const double cut = tol::rank * std::max(e.values.maxCoeff(), 0.0);
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > cut) ++count;
  CMatrix basis(a.rows(), count);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > cut) basis.col(col++) = e.vectors.col(i);
  return basis;
}

}  // namespace detail

/// Dense d x d complex Hermitian matrix. Stored as (A + A^dagger) / 2.
class HermitianOperator {
 public:
  HermitianOperator() : m_(CMatrix::Zero(1, 1)) {}

  explicit HermitianOperator(const CMatrix& a) {
    if (a.rows() != a.cols()) throw DomainError("HermitianOperator: matrix is not square");
    if (a.rows() < 1) throw DomainError("HermitianOperator: dimension must be >= 1");
    if (!a.allFinite()) throw DomainError("HermitianOperator: non-finite entries");
    const double scale = std::max(1.0, detail::max_abs(a));
    if (detail::max_abs(a - a.adjoint()) > tol::herm * scale) {
      throw DomainError("HermitianOperator: matrix is not Hermitian");
    }
    m_ = detail::hermitian_part(a);
  }

  static HermitianOperator identity(int d) { return HermitianOperator(CMatrix::Identity(d, d)); }
  static HermitianOperator zero(int d) { return HermitianOperator(CMatrix::Zero(d, d)); }
  static HermitianOperator diagonal(const RVector& diag) {
    return HermitianOperator(CMatrix(diag.cast<Complex>().asDiagonal()));
  }
  static HermitianOperator projector(const CVector& ket) {
    const CVector v = ket / ket.norm();
    return HermitianOperator(v * v.adjoint());
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& o) const { return HermitianOperator(m_ + o.m_); }
  HermitianOperator operator-(const HermitianOperator& o) const { return HermitianOperator(m_ - o.m_); }
  HermitianOperator operator-() const { return HermitianOperator(-m_); }
  HermitianOperator operator*(double s) const { return HermitianOperator(m_ * s); }

 private:
  CMatrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& a) { return a * s; }

/// Eigenvalues ascending, eigenvectors as orthonormal columns.
struct EigenDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;

  CMatrix reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }
};

inline EigenDecomposition eig(const HermitianOperator& a) {
  auto e = detail::eigh(a.matrix());
  return {std::move(e.values), std::move(e.vectors)};
}

namespace detail {

/// Validates positivity and clips eigenvalues in [-psdTol, 0) to zero.
inline CMatrix checked_psd(const CMatrix& a, const char* what) {
  const Eigh e = eigh(a);
  const double lo = e.values.minCoeff();
  if (lo < -tol::psd) {
    throw DomainError(std::string(what) + ": operator is not positive semidefinite (min eigenvalue " +
                      std::to_string(lo) + ")");
  }
  if (lo >= 0.0) return a;
  return spectral_apply(e, [](double x) { return std::max(x, 0.0); });
}

}  // namespace detail

enum class Normalization { normalized, subnormalized };

/// Element of P: positive semidefinite with strictly positive trace.
class PositiveOperator {
 public:
  explicit PositiveOperator(const HermitianOperator& a)
      : op_(detail::checked_psd(a.matrix(), "PositiveOperator")) {
    if (!(op_.trace() > 0.0)) throw DomainError("PositiveOperator: trace must be positive");
  }
  explicit PositiveOperator(const CMatrix& a) : PositiveOperator(HermitianOperator(a)) {}

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const CMatrix& matrix() const { return op_.matrix(); }
  double trace() const { return op_.trace(); }

 private:
  HermitianOperator op_;
};

/// Element of S (normalized) or S_bullet (subnormalized).
class QuantumState {
 public:
  QuantumState(const HermitianOperator& a, Normalization n)
      : op_(detail::checked_psd(a.matrix(), "QuantumState")), norm_(n) {
    const double t = op_.trace();
    if (n == Normalization::normalized) {
      if (std::abs(t - 1.0) > tol::trace) {
        throw DomainError("QuantumState: normalized state must have unit trace (got " + std::to_string(t) + ")");
      }
    } else if (!(t > 0.0) || t > 1.0 + tol::trace) {
      throw DomainError("QuantumState: subnormalized state needs trace in (0, 1] (got " + std::to_string(t) + ")");
    }
  }
  QuantumState(const CMatrix& a, Normalization n) : QuantumState(HermitianOperator(a), n) {}

  /// Picks the flag from the trace: normalized when within traceTol of one.
  static QuantumState from_matrix(const CMatrix& a) {
    const double t = a.trace().real();
    return QuantumState(a, std::abs(t - 1.0) <= tol::trace ? Normalization::normalized
                                                           : Normalization::subnormalized);
  }

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const CMatrix& matrix() const { return op_.matrix(); }
  double trace() const { return op_.trace(); }
  Normalization normalization() const { return norm_; }
  bool is_normalized() const { return norm_ == Normalization::normalized; }

  // A state is a positive operator; allows passing states where sigma is expected.
  operator PositiveOperator() const { return PositiveOperator(op_); }

 private:
  HermitianOperator op_;
  Normalization norm_;
};

/// {X}_+ : projector onto eigenvectors with eigenvalue > eigPosTol * ||X||_inf.
inline HermitianOperator positive_part_projector(const HermitianOperator& x) {
  const auto e = detail::eigh(x.matrix());
  const double cut = tol::eig_pos * detail::spectral_norm_herm(e.values);
  return HermitianOperator(detail::projector_above(e, cut));
}

/// Moore-Penrose power A^t of a positive semidefinite matrix: eigenvalues
/// above rankTol * lambda_max are raised to t, the rest map to zero.
inline HermitianOperator mp_power(const HermitianOperator& a, double t) {
  const auto e = detail::eigh(a.matrix());
  if (e.values.minCoeff() < -tol::psd) throw DomainError("mp_power: operator is not positive semidefinite");
  const double top = std::max(e.values.maxCoeff(), 0.0);
  if (top == 0.0) {
    if (t < 0.0) throw DomainError("mp_power: negative power of the zero operator");
    return HermitianOperator::zero(a.dim());
  }
  const double cut = tol::rank * top;
  return HermitianOperator(detail::spectral_apply(e, [cut, t](double x) { return x > cut ? std::pow(x, t) : 0.0; }));
}

inline HermitianOperator mp_power(const PositiveOperator& a, double t) { return mp_power(a.op(), t); }

namespace detail {
inline void require_same_dim(int a, int b, const char* what) {
  if (a != b) throw DomainError(std::string(what) + ": dimension mismatch");
}
}  // namespace detail

/// T(rho, sigma) = 1/2 ||rho - sigma||_1.
inline double trace_distance(const QuantumState& rho, const QuantumState& sigma) {
  detail::require_same_dim(rho.dim(), sigma.dim(), "trace_distance");
  return 0.5 * detail::eigvalsh(rho.matrix() - sigma.matrix()).cwiseAbs().sum();
}

/// Generalized fidelity (||sqrt(rho) sqrt(sigma)||_1 + sqrt((1-tr rho)(1-tr sigma)))^2.
inline double generalized_fidelity(const QuantumState& rho, const QuantumState& sigma) {
  detail::require_same_dim(rho.dim(), sigma.dim(), "generalized_fidelity");
  const double overlap = detail::trace_norm(detail::psd_sqrt(rho.matrix()) * detail::psd_sqrt(sigma.matrix()));
  const double radicand = (1.0 - rho.trace()) * (1.0 - sigma.trace());
  const double root = std::sqrt(std::max(radicand, 0.0)) + overlap;
  return std::clamp(root * root, 0.0, 1.0);
}

/// P(rho, sigma) = sqrt(1 - F(rho, sigma)).
inline double purified_distance(const QuantumState& rho, const QuantumState& sigma) {
  return std::sqrt(std::max(0.0, 1.0 - generalized_fidelity(rho, sigma)));
}

/// A <= B in the Loewner order, i.e. lambda_min(B - A) >= -tol.
inline bool operator_leq(const HermitianOperator& a, const HermitianOperator& b, double tolerance) {
  detail::require_same_dim(a.dim(), b.dim(), "operator_leq");
  return detail::eigvalsh(b.matrix() - a.matrix()).minCoeff() >= -tolerance;
}

// ---------------------------------------------------------------------------
// Tensor helpers

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// tr_B of an operator on A (x) B, with A the slow (row-major outer) index.
inline CMatrix partial_trace_b(const CMatrix& x, int dim_a, int dim_b) {
  if (x.rows() != dim_a * dim_b || x.cols() != dim_a * dim_b) throw DomainError("partial_trace_b: dimension mismatch");
  CMatrix out = CMatrix::Zero(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      for (int k = 0; k < dim_b; ++k) out(i, j) += x(i * dim_b + k, j * dim_b + k);
  return out;
}

/// tr_A of an operator on A (x) B.
inline CMatrix partial_trace_a(const CMatrix& x, int dim_a, int dim_b) {
  if (x.rows() != dim_a * dim_b || x.cols() != dim_a * dim_b) throw DomainError("partial_trace_a: dimension mismatch");
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_b; ++i)
    for (int j = 0; j < dim_b; ++j)
      for (int k = 0; k < dim_a; ++k) out(i, j) += x(k * dim_b + i, k * dim_b + j);
  return out;
}

inline bool is_projector(const HermitianOperator& p, double tolerance = 1e-10) {
  const CMatrix& m = p.matrix();
  return detail::max_abs(m * m - m) <= tolerance;
}

/// Projector onto supp(A) at rankTol.
inline HermitianOperator support_projector(const HermitianOperator& a) {
  const CMatrix basis = detail::support_basis(a.matrix());
  return HermitianOperator(basis * basis.adjoint());
}

}  // namespace oneshot
