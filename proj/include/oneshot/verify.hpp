#pragma once

// Verifiers for the inequalities relating the one-shot divergences. Each
// returns slacks (rhs - lhs, in bits) so callers can apply their own
// tolerance; +inf means the inequality holds trivially.

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oneshot/channels.hpp"
#include "oneshot/divergences.hpp"
#include "oneshot/smoothing.hpp"

namespace oneshot::harness {

namespace detail {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// a - b in extended reals, with inf - inf read as 0.
inline double diff(const DivergenceValue& a, const DivergenceValue& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite()) return inf;
  if (b.is_infinite()) return -inf;
  return a.value() - b.value();
}

}  // namespace detail

/// Slacks of D_s^eps <= D_h^eps and D_h^eps <= D_s^{eps+delta} + log 1/delta.
inline std::array<double, 2> verify_eq9(const QuantumState& rho, const PositiveOperator& sigma, double eps, double delta) {
  if (!(delta > 0.0 && eps + delta < 1.0)) throw DomainError("verify_eq9: need delta > 0 and eps + delta < 1");
  const DivergenceValue s1 = ds(rho, sigma, eps);
  const DivergenceValue h = dh(rho, sigma, eps);
  const DivergenceValue s2 = ds(rho, sigma, eps + delta);
  return {detail::diff(h, s1), detail::diff(s2 + std::log2(1.0 / delta), h)};
}

/// Slacks D(rho||sigma) - D(E(rho)||E(sigma)) for D_h^eps, D~_alpha and D_max^{eps,P}.
inline std::array<double, 3> verify_data_processing(const QuantumState& rho, const PositiveOperator& sigma,
                                                    const Channel& channel, double eps, double alpha) {
  const QuantumState er = channel.apply(rho);
  const PositiveOperator es = channel.apply(sigma);
  const auto ball = SmoothingBall::purified(eps);
  return {detail::diff(dh(rho, sigma, eps), dh(er, es, eps)),
          detail::diff(renyi(rho, sigma, alpha), renyi(er, es, alpha)),
          detail::diff(dmax_smooth(rho, sigma, ball).value, dmax_smooth(er, es, ball).value)};
}

/// Independent re-check of a smoothing certificate built by gentle projection:
/// recomputes the smoothed state from the projector, the distance, and the
/// witness value, using only linalg primitives.
inline std::vector<CertificateCheck> reverify_certificate(const QuantumState& rho, const HermitianOperator& m,
                                                          const SmoothingCertificate& c, double radius) {
  std::vector<CertificateCheck> out;
  const CMatrix& pm = c.projector.matrix();
  out.push_back({"projector idempotent", oneshot::detail::max_abs(pm * pm - pm), 0.0, 1e-9});
  const double w = (pm * rho.matrix()).trace().real();
  const CMatrix keep = CMatrix::Identity(rho.dim(), rho.dim()) - pm;
  const CMatrix expected = keep * rho.matrix() * keep / (1.0 - w);
  out.push_back({"smoothed state matches (1-P) rho (1-P)/(1 - tr P rho)",
                 oneshot::detail::max_abs(expected - c.smoothed_state.matrix()), 0.0, 1e-9});
  const double dist = purified_distance(rho, c.smoothed_state);
  out.push_back({"|distance - P(rho, rho~)|", std::abs(dist - c.distance), 0.0, 1e-7});
  out.push_back({"P(rho, rho~) <= radius", dist, radius, 1e-9});
  const double mr = (m.matrix() * c.smoothed_state.matrix()).trace().real();
  const double wv = mr > 0.0 ? std::log2(mr) : -detail::inf;
  out.push_back({"log tr(M rho~) <= claimed bound", wv, c.claimed_bound.value(), 1e-9});
  return out;
}

struct Theorem1Check {
  double slack_purified = 0.0;
  double slack_trace = std::numeric_limits<double>::quiet_NaN();  // normalized rho only
  SmoothingCertificate certificate;  // Renyi smoother at the dual-optimal witness
  std::vector<CertificateCheck> recheck;
};

/// D_max^{eps,P} <= D~_alpha + log(1/eps^2)/(alpha-1) + log 1/(1-eps^2); trace ball too for normalized rho.
inline Theorem1Check verify_theorem1(const QuantumState& rho, const PositiveOperator& sigma, double eps, double alpha) {
  Theorem1Check out;
  const DivergenceValue rhs = renyi(rho, sigma, alpha) + (std::log2(1.0 / (eps * eps)) / (alpha - 1.0) +
                                                          std::log2(1.0 / (1.0 - eps * eps)));
  const SmoothMaxResult sp = dmax_smooth(rho, sigma, SmoothingBall::purified(eps));
  out.slack_purified = detail::diff(rhs, sp.value);
  if (rho.is_normalized()) out.slack_trace = detail::diff(rhs, dmax_smooth(rho, sigma, SmoothingBall::trace(eps)).value);
  if (rhs.is_finite() && sp.witness.size() != 0) {
    const HermitianOperator m(sp.witness);
    out.certificate = renyi_smoother(rho, sigma, eps, alpha, m);
    out.recheck = reverify_certificate(rho, m, out.certificate, eps);
  }
  return out;
}

struct Theorem2Check {
  double slack_upper = 0.0;  // D_h^{1-eps} - (D_max^{sqrt(eps),P} - log 1/(1-eps))
  LowerBoundCheck lower;
  SmoothingCertificate certificate;  // information-spectrum smoother at the dual-optimal witness
  std::vector<CertificateCheck> recheck;
};

inline Theorem2Check verify_theorem2(const QuantumState& rho, const PositiveOperator& sigma, double eps, double delta) {
  Theorem2Check out;
  const SmoothMaxResult sm = dmax_smooth(rho, sigma, SmoothingBall::purified(std::sqrt(eps)));
  out.slack_upper = detail::diff(dh(rho, sigma, 1.0 - eps), sm.value - std::log2(1.0 / (1.0 - eps)));
  out.lower = verify_dmax_lower_bound(rho, sigma, eps, delta);
  if (sm.witness.size() != 0) {
    const HermitianOperator m(sm.witness);
    out.certificate = hypothesis_smoother(rho, sigma, eps, m);
    out.recheck = reverify_certificate(rho, m, out.certificate, std::sqrt(eps));
  }
  return out;
}

struct Theorem3Check {
  JointSmoothingResult result;
  std::vector<CertificateCheck> recheck;
};

/// Runs the joint smoothing program and re-verifies the returned state.
inline Theorem3Check verify_theorem3(const QuantumState& rho_ab, const PositiveOperator& sigma_a,
                                     const PositiveOperator& sigma_b, double eps, double eps2,
                                     JointMode mode = JointMode::theorem, double delta = 0.1) {
  Theorem3Check out;
  out.result = joint_smoother_feasibility(rho_ab, sigma_a, sigma_b, eps, eps2, default_eta, mode, delta);
  const int da = sigma_a.dim(), db = sigma_b.dim();
  const CMatrix& st = out.result.smoothed_joint_state.matrix();
  const CMatrix ra = partial_trace_b(st, da, db);
  const CMatrix rb = partial_trace_a(st, da, db);
  auto lmin = [](const CMatrix& a) { return oneshot::detail::eigvalsh(oneshot::detail::hermitian_part(a)).minCoeff(); };
  out.recheck.push_back({"|tr_B rho~ - marginal_A|", oneshot::detail::max_abs(ra - out.result.marginal_a.matrix()), 0.0, 1e-10});
  out.recheck.push_back({"|tr_A rho~ - marginal_B|", oneshot::detail::max_abs(rb - out.result.marginal_b.matrix()), 0.0, 1e-10});
  out.recheck.push_back({"P(rho_AB, rho~) <= radius", purified_distance(rho_ab, out.result.smoothed_joint_state),
                         out.result.radius, 1e-6});
  out.recheck.push_back({"rho~ >= 0", -lmin(st), 0.0, 1e-6});
  if (out.result.lambda_a.is_finite()) {
    out.recheck.push_back({"operator_leq(rho~_A, 2^lambda_A sigma_A)",
                           operator_leq(HermitianOperator(ra), HermitianOperator(std::exp2(out.result.lambda_a.value()) * sigma_a.matrix()), 1e-6) ? 0.0 : 1.0,
                           0.0, 0.0});
  }
  if (out.result.lambda_b.is_finite()) {
    out.recheck.push_back({"operator_leq(rho~_B, 2^lambda_B sigma_B)",
                           operator_leq(HermitianOperator(rb), HermitianOperator(std::exp2(out.result.lambda_b.value()) * sigma_b.matrix()), 1e-6) ? 0.0 : 1.0,
                           0.0, 0.0});
  }
  return out;
}

inline Theorem3Check verify_corollary(const QuantumState& rho_ab, const PositiveOperator& sigma_a,
                                      const PositiveOperator& sigma_b, double eps, double eps2, double delta) {
  return verify_theorem3(rho_ab, sigma_a, sigma_b, eps, eps2, JointMode::corollary, delta);
}

}  // namespace oneshot::harness
