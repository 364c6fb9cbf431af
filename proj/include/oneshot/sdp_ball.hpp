#pragma once

// Building blocks for the smoothing programs: operator-valued variables,
// matrix equalities, and the two smoothing balls (purified and trace) as
// constraint fragments of an SdpProblem.

#include <cmath>
#include <functional>
#include <vector>

#include "oneshot/linalg.hpp"
#include "oneshot/sdp.hpp"

namespace oneshot::sdp {

/// A d x d operator variable rho~ = F Y F^dagger, Y a Hermitian block of size
/// k = F.cols(). With F = 1 this is an ordinary PSD variable; a support
/// frame restricts rho~ to span(F).
struct OperatorVariable {
  int block = 0;
  CMatrix frame;

  int dim() const { return static_cast<int>(frame.rows()); }

  /// Block coefficient of the functional Re tr(H rho~).
  HermitianOperator pullback(const CMatrix& h) const {
    return HermitianOperator(detail_hermitize(frame.adjoint() * h * frame));
  }

  CMatrix value(const SdpSolution& s) const {
    return frame * s.primal_blocks[static_cast<std::size_t>(block)] * frame.adjoint();
  }

 private:
  static CMatrix detail_hermitize(const CMatrix& a) { return oneshot::detail::hermitian_part(a); }
};

inline OperatorVariable add_operator_variable(SdpProblem& p, const CMatrix& frame) {
  const int k = static_cast<int>(frame.cols());
  if (k < 1) throw DomainError("add_operator_variable: empty frame");
  return {p.add_block(k), frame};
}

inline OperatorVariable add_operator_variable(SdpProblem& p, int dim) {
  return add_operator_variable(p, CMatrix::Identity(dim, dim));
}

/// Basis of d x d Hermitian matrices such that Re tr(E_j X) runs over the
/// real and imaginary parts of the independent entries of X.
inline std::vector<CMatrix> hermitian_basis(int d) {
  std::vector<CMatrix> out;
  for (int k = 0; k < d; ++k) {
    CMatrix e = CMatrix::Zero(d, d);
    e(k, k) = 1.0;
    out.push_back(e);
  }
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      CMatrix re = CMatrix::Zero(d, d);
      re(k, l) = re(l, k) = 0.5;
      out.push_back(re);
      CMatrix im = CMatrix::Zero(d, d);
      im(k, l) = Complex(0.0, 0.5);
      im(l, k) = Complex(0.0, -0.5);
      out.push_back(im);
    }
  return out;
}

/// One linear term of a matrix equation: maps a test matrix E to the block
/// coefficient whose pairing with the block gives Re tr(E * term).
struct MatrixTerm {
  int block;
  std::function<CMatrix(const CMatrix&)> pullback;
};

/// sum_terms (term) = rhs as a d x d Hermitian matrix equation.
inline void add_matrix_equality(SdpProblem& p, int d, const std::vector<MatrixTerm>& terms, const CMatrix& rhs) {
  for (const CMatrix& e : hermitian_basis(d)) {
    std::vector<Term> row;
    for (const auto& t : terms) row.push_back({t.block, HermitianOperator(oneshot::detail::hermitian_part(t.pullback(e)))});
    p.add_constraint(std::move(row), (e * rhs).trace().real(), Sense::equal);
  }
}

inline MatrixTerm variable_term(const OperatorVariable& v, double scale = 1.0) {
  const CMatrix f = v.frame;
  return {v.block, [f, scale](const CMatrix& e) -> CMatrix { return scale * (f.adjoint() * e * f); }};
}

/// The whole block Y of matching size.
inline MatrixTerm block_term(int block, double scale = 1.0) {
  return {block, [scale](const CMatrix& e) -> CMatrix { return scale * e; }};
}

/// A scalar 1x1 block t multiplying a fixed matrix A.
inline MatrixTerm scalar_term(int block, const CMatrix& a) {
  return {block, [a](const CMatrix& e) -> CMatrix {
            CMatrix c(1, 1);
            c(0, 0) = (e * a).trace().real();
            return c;
          }};
}

inline Term trace_term(const OperatorVariable& v, double scale = 1.0) {
  return {v.block, v.pullback(scale * CMatrix::Identity(v.dim(), v.dim()))};
}

/// Handle to the auxiliary variables of a fidelity ball.
struct FidelityBall {
  int fidelity_block = -1;  // [[D, X], [X^dagger, V^dagger rho~ V]], -1 when eps == 0
  int subnorm_block = -1;   // [[1 - tr rho, s], [s, 1 - tr rho~]] for subnormalized centers
  int rank = 0;
};

/// Re tr X on the off-diagonal of a 2r block.
inline HermitianOperator overlap_coefficient(int r) {
  CMatrix h = CMatrix::Zero(2 * r, 2 * r);
  h.topRightCorner(r, r) = 0.5 * CMatrix::Identity(r, r);
  h.bottomLeftCorner(r, r) = 0.5 * CMatrix::Identity(r, r);
  return HermitianOperator(h);
}

/// Constrains rho~ to the purified-distance ball of radius eps around rho:
/// F(rho, rho~) >= 1 - eps^2, tr rho~ <= 1.
inline FidelityBall fidelity_ball_constraints(SdpProblem& p, const QuantumState& rho, double eps,
                                              const OperatorVariable& rt) {
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("fidelity_ball_constraints: eps must lie in [0, 1)");
  if (rt.dim() != rho.dim()) throw DomainError("fidelity_ball_constraints: dimension mismatch");
  FidelityBall out;
  if (eps == 0.0) {
    add_matrix_equality(p, rho.dim(), {variable_term(rt)}, rho.matrix());
    return out;
  }
  const CMatrix v = oneshot::detail::support_basis(rho.matrix());
  const int r = static_cast<int>(v.cols());
  const CMatrix dmat = oneshot::detail::hermitian_part(v.adjoint() * rho.matrix() * v);
  out.rank = r;
  out.fidelity_block = p.add_block(2 * r);
  const int fb = out.fidelity_block;

  // Y11 = D
  add_matrix_equality(p, r,
                      {{fb, [r](const CMatrix& e) -> CMatrix {
                          CMatrix c = CMatrix::Zero(2 * r, 2 * r);
                          c.topLeftCorner(r, r) = e;
                          return c;
                        }}},
                      dmat);
  // Y22 = V^dagger rho~ V
  const CMatrix f = rt.frame;
  add_matrix_equality(p, r,
                      {{fb,
                        [r](const CMatrix& e) -> CMatrix {
                          CMatrix c = CMatrix::Zero(2 * r, 2 * r);
                          c.bottomRightCorner(r, r) = e;
                          return c;
                        }},
                       {rt.block, [f, v](const CMatrix& e) -> CMatrix { return -(f.adjoint() * v * e * v.adjoint() * f); }}},
                      CMatrix::Zero(r, r));

  const double target = std::sqrt(1.0 - eps * eps);
  const HermitianOperator overlap = overlap_coefficient(r);
  if (rho.is_normalized()) {
    p.add_constraint({{fb, -1.0 * overlap}}, -target, Sense::less_equal);
    p.add_constraint({trace_term(rt)}, 1.0, Sense::less_equal);
  } else {
    out.subnorm_block = p.add_block(2, BlockKind::real_symmetric);
    const int sb = out.subnorm_block;
    CMatrix e11 = CMatrix::Zero(2, 2), e22 = CMatrix::Zero(2, 2), e12 = CMatrix::Zero(2, 2);
    e11(0, 0) = 1.0;
    e22(1, 1) = 1.0;
    e12(0, 1) = e12(1, 0) = 0.5;
    p.add_constraint({{sb, HermitianOperator(e11)}}, 1.0 - rho.trace(), Sense::equal);
    p.add_constraint({{sb, HermitianOperator(e22)}, trace_term(rt)}, 1.0, Sense::equal);
    p.add_constraint({{fb, -1.0 * overlap}, {sb, HermitianOperator(-e12)}}, -target, Sense::less_equal);
  }
  return out;
}

/// Handle to the splitting rho~ - rho = P - N.
struct TraceBall {
  int positive_block = -1;
  int negative_block = -1;
};

/// Constrains rho~ to the normalized trace-distance ball of radius eps
/// around a normalized rho: tr rho~ = 1, ||rho~ - rho||_1 <= 2 eps.
inline TraceBall trace_ball_constraints(SdpProblem& p, const QuantumState& rho, double eps, const OperatorVariable& rt) {
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("trace_ball_constraints: eps must lie in [0, 1)");
  if (!rho.is_normalized()) throw DomainError("trace_ball_constraints: trace ball needs a normalized center");
  if (rt.dim() != rho.dim()) throw DomainError("trace_ball_constraints: dimension mismatch");
  TraceBall out;
  const int d = rho.dim();
  if (eps == 0.0) {
    add_matrix_equality(p, d, {variable_term(rt)}, rho.matrix());
    return out;
  }
  out.positive_block = p.add_block(d);
  out.negative_block = p.add_block(d);
  add_matrix_equality(p, d, {variable_term(rt), block_term(out.positive_block, -1.0), block_term(out.negative_block, 1.0)},
                      rho.matrix());
  p.add_constraint({{out.positive_block, HermitianOperator::identity(d)}, {out.negative_block, HermitianOperator::identity(d)}},
                   2.0 * eps, Sense::less_equal);
  p.add_constraint({trace_term(rt)}, 1.0, Sense::equal);
  return out;
}

}  // namespace oneshot::sdp
