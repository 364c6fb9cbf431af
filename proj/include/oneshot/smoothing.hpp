#pragma once

// Constructive smoothing: gentle projection, the Renyi-threshold smoother,
// the information-spectrum smoother, the lower bound on the smooth
// max-divergence via hypothesis testing, and joint smoothing of both
// marginals of a bipartite state.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oneshot/divergences.hpp"
#include "oneshot/errors.hpp"
#include "oneshot/linalg.hpp"
#include "oneshot/matrix_json.hpp"
#include "oneshot/sdp.hpp"
#include "oneshot/sdp_ball.hpp"

namespace oneshot {

/// Default for the vanishing margin eta, in bits.
inline constexpr double default_eta = 1e-6;

/// One inequality lhs <= rhs of a certificate.
struct CertificateCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;

  double slack() const { return rhs - lhs; }
  bool holds() const { return lhs <= rhs + tolerance; }
};

struct SmoothingCertificate {
  std::string method;
  QuantumState smoothed_state{HermitianOperator::identity(1), Normalization::normalized};
  HermitianOperator projector;  // the projector removed by the smoother
  double distance = 0.0;        // purified distance to the original state
  DivergenceValue claimed_bound;
  double witness_value = 0.0;   // log2 tr(M rho~) (may be -inf)
  std::vector<CertificateCheck> checks;

  bool all_hold() const {
    for (const auto& c : checks)
      if (!c.holds()) return false;
    return true;
  }
};

namespace detail {

inline io::Json finite_or_null(double v) { return std::isfinite(v) ? io::Json(v) : io::Json(nullptr); }

inline void require_admissible_witness(const HermitianOperator& m, const PositiveOperator& sigma, const char* what) {
  require_same_dim(m.dim(), sigma.dim(), what);
  if (eigvalsh(m.matrix()).minCoeff() < -tol::psd) throw DomainError(std::string(what) + ": M must be positive semidefinite");
  if ((m.matrix() * sigma.matrix()).trace().real() > 1.0 + 1e-9) throw DomainError(std::string(what) + ": tr M sigma must be <= 1");
}

/// Outcome distributions of rho and sigma in the eigenbasis of M.
struct Measured {
  CMatrix basis;
  RVector p;
  RVector q;
};

inline Measured measure_in_eigenbasis(const HermitianOperator& m, const CMatrix& rho, const CMatrix& sigma) {
  Measured out;
  out.basis = eigh(m.matrix()).vectors;
  const Eigen::Index d = out.basis.cols();
  out.p.resize(d);
  out.q.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const CVector v = out.basis.col(i);
    out.p(i) = std::max(0.0, (v.adjoint() * rho * v)(0, 0).real());
    out.q(i) = std::max(0.0, (v.adjoint() * sigma * v)(0, 0).real());
  }
  return out;
}

inline CMatrix projector_on(const CMatrix& basis, const std::vector<bool>& pick) {
  CMatrix out = CMatrix::Zero(basis.rows(), basis.rows());
  for (Eigen::Index i = 0; i < basis.cols(); ++i)
    if (pick[static_cast<std::size_t>(i)]) out += basis.col(i) * basis.col(i).adjoint();
  return hermitian_part(out);
}

/// i with p_i <= 2^k q_i, using the 0/0 convention for q ~ 0.
inline std::vector<bool> below_threshold(const RVector& p, const RVector& q, double log_threshold) {
  const double qmax = q.size() ? q.maxCoeff() : 0.0;
  const double thr = std::exp2(log_threshold);
  std::vector<bool> out(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const bool null_q = q(i) <= tol::rank * qmax;
    out[static_cast<std::size_t>(i)] = null_q ? p(i) <= tol::rank : p(i) <= thr * q(i);
  }
  return out;
}

}  // namespace detail

inline io::Json certificate_to_json(const SmoothingCertificate& c) {
  io::Json checks = io::Json::array();
  for (const auto& k : c.checks) {
    checks.push_back({{"name", k.name},
                      {"lhs", detail::finite_or_null(k.lhs)},
                      {"rhs", detail::finite_or_null(k.rhs)},
                      {"tolerance", k.tolerance},
                      {"holds", k.holds()}});
  }
  return {{"method", c.method},
          {"smoothedState", io::state_to_json(c.smoothed_state)},
          {"projector", io::matrix_to_json(c.projector)},
          {"distance", c.distance},
          {"claimedBound", c.claimed_bound.is_finite() ? io::Json(c.claimed_bound.value()) : io::Json("inf")},
          {"witnessValue", detail::finite_or_null(c.witness_value)},
          {"checks", std::move(checks)},
          {"allHold", c.all_hold()}};
}

// ---------------------------------------------------------------------------

struct GentleProjection {
  QuantumState state;
  double distance;
};

/// rho~ = (1 - P) rho (1 - P) / (1 - tr P rho), at purified distance sqrt(tr P rho).
inline GentleProjection gentle_projection(const QuantumState& rho, const HermitianOperator& p) {
  detail::require_same_dim(rho.dim(), p.dim(), "gentle_projection");
  if (!is_projector(p)) throw DomainError("gentle_projection: P is not a projector");
  const double w = (p.matrix() * rho.matrix()).trace().real();
  if (w >= 1.0 - 1e-12) throw DegenerateProjection("gentle_projection: tr P rho is (numerically) 1");
  const CMatrix keep = CMatrix::Identity(rho.dim(), rho.dim()) - p.matrix();
  CMatrix out = detail::hermitian_part(keep * rho.matrix() * keep) / (1.0 - std::max(w, 0.0));
  if (!(out.trace().real() > 1e-12)) throw DegenerateProjection("gentle_projection: nothing of rho survives the projection");
  if (rho.is_normalized()) out /= out.trace().real();
  return {QuantumState(out, rho.normalization()), std::sqrt(std::max(w, 0.0))};
}

/// Smoother from a Renyi bound: removes the eigenvectors of M whose outcome
/// ratio exceeds 2^D~alpha (1/eps^2)^{1/(alpha-1)}.
inline SmoothingCertificate renyi_smoother(const QuantumState& rho, const PositiveOperator& sigma, double eps,
                                           double alpha, const HermitianOperator& m) {
  detail::same_dim(rho, sigma, "renyi_smoother");
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("renyi_smoother: alpha must be > 1");
  detail::check_eps(eps, false, "renyi_smoother");
  detail::require_admissible_witness(m, sigma, "renyi_smoother");
  const DivergenceValue dr = renyi(rho, sigma, alpha);
  if (dr.is_infinite()) throw DomainError("renyi_smoother: the Renyi divergence is infinite");

  const double log_theta = dr.value() + std::log2(1.0 / (eps * eps)) / (alpha - 1.0);
  const auto meas = detail::measure_in_eigenbasis(m, rho.matrix(), sigma.matrix());
  std::vector<bool> in_i = detail::below_threshold(meas.p, meas.q, log_theta);
  for (auto&& b : in_i) b = !b;  // I = {p/q > theta}
  bool all = true;
  for (bool b : in_i) all = all && b;
  if (all) throw CertificateViolation("renyi_smoother: every index exceeds the threshold");

  const HermitianOperator proj(detail::projector_on(meas.basis, in_i));
  const double removed = (proj.matrix() * rho.matrix()).trace().real();
  if (removed > eps * eps + 1e-9) {
    throw CertificateViolation("renyi_smoother: tr Pi rho = " + std::to_string(removed) + " exceeds eps^2");
  }
  const GentleProjection g = gentle_projection(rho, proj);
  const double mr = (m.matrix() * g.state.matrix()).trace().real();

  SmoothingCertificate c;
  c.method = "renyi";
  c.smoothed_state = g.state;
  c.projector = proj;
  c.distance = g.distance;
  c.claimed_bound = DivergenceValue::finite(log_theta + std::log2(1.0 / (1.0 - eps * eps)));
  c.witness_value = mr > 0.0 ? std::log2(mr) : -std::numeric_limits<double>::infinity();
  const double theta = std::exp2(log_theta);
  c.checks = {
      {"removed weight tr(Pi rho) <= eps^2", removed, eps * eps, 1e-9},
      {"tr(M rho~)(1 - tr Pi rho) <= threshold", mr * (1.0 - removed), theta, 1e-9 * std::max(1.0, theta)},
      {"purified distance <= eps", g.distance, eps, 1e-9},
      {"log tr(M rho~) <= claimed bound", c.witness_value, c.claimed_bound.value(), 1e-9},
  };
  return c;
}

/// Smoother from the information spectrum of the measured distributions:
/// keeps outcomes with P(i) <= 2^{K+eta} Q(i), K = D_s^{1-eps}(P || Q).
inline SmoothingCertificate hypothesis_smoother(const QuantumState& rho, const PositiveOperator& sigma, double eps,
                                                const HermitianOperator& m, double eta = default_eta) {
  detail::same_dim(rho, sigma, "hypothesis_smoother");
  detail::check_eps(eps, false, "hypothesis_smoother");
  detail::require_normalized(rho, "hypothesis_smoother");
  if (!(eta > 0.0)) throw DomainError("hypothesis_smoother: eta must be > 0");
  detail::require_admissible_witness(m, sigma, "hypothesis_smoother");

  const auto meas = detail::measure_in_eigenbasis(m, rho.matrix(), sigma.matrix());
  const double k = classical::ds(meas.p, meas.q, 1.0 - eps).value;
  std::vector<bool> out_i = detail::below_threshold(meas.p, meas.q, k + eta);
  for (auto&& b : out_i) b = !b;  // removed: complement of I
  const HermitianOperator proj(detail::projector_on(meas.basis, out_i));
  const double removed = (proj.matrix() * rho.matrix()).trace().real();
  if (removed >= eps) throw CertificateViolation("hypothesis_smoother: removed weight " + std::to_string(removed) + " >= eps");
  const GentleProjection g = gentle_projection(rho, proj);
  const double mr = (m.matrix() * g.state.matrix()).trace().real();

  SmoothingCertificate c;
  c.method = "hypothesis";
  c.smoothed_state = g.state;
  c.projector = proj;
  c.distance = g.distance;
  c.claimed_bound = DivergenceValue::finite(k + eta + std::log2(1.0 / (1.0 - eps)));
  c.witness_value = mr > 0.0 ? std::log2(mr) : -std::numeric_limits<double>::infinity();
  const double cap = std::exp2(k + eta) / (1.0 - eps);
  c.checks = {
      {"removed weight tr(Pi rho) <= eps", removed, eps, 1e-9},
      {"tr(M rho~) <= 2^(K+eta)/(1-eps)", mr, cap, 1e-9 * std::max(1.0, cap)},
      {"purified distance <= sqrt(eps)", g.distance, std::sqrt(eps), 1e-9},
  };
  return c;
}

// ---------------------------------------------------------------------------

struct LowerBoundCheck {
  bool holds = false;
  double slack = 0.0;     // lhs - rhs (may be +inf)
  DivergenceValue lhs;    // D_max^{sqrt(eps),P} - log 1/(1-eps)
  DivergenceValue rhs;    // D_h^{1-eps-delta} - log 4/delta^2
  // Fidelity chain sqrt(1-eps) <= sqrt(F) <= sqrt(tr Q rho~) + sqrt(tr(1-Q) rho) <= sqrt(2^l tr Q sigma) + sqrt(1-eps-delta).
  std::vector<double> chain;
  bool chain_holds = true;
  bool saturated = false;  // the optimal smoother sits on the ball boundary
};

/// Checks D_max^{sqrt(eps),P}(rho||sigma) - log 1/(1-eps) >= D_h^{1-eps-delta}(rho||sigma) - log 4/delta^2.
inline LowerBoundCheck verify_dmax_lower_bound(const QuantumState& rho, const PositiveOperator& sigma, double eps,
                                               double delta, double tolerance = 1e-6) {
  detail::same_dim(rho, sigma, "verify_dmax_lower_bound");
  detail::check_eps(eps, false, "verify_dmax_lower_bound");
  detail::require_normalized(rho, "verify_dmax_lower_bound");
  if (!(delta > 0.0 && eps + delta < 1.0)) throw DomainError("verify_dmax_lower_bound: delta must lie in (0, 1 - eps)");

  LowerBoundCheck out;
  const SmoothMaxResult sm = dmax_smooth(rho, sigma, SmoothingBall::purified(std::sqrt(eps)));
  const HypothesisTest ht = dh_test(rho, sigma, 1.0 - eps - delta);
  out.lhs = sm.value - std::log2(1.0 / (1.0 - eps));
  out.rhs = ht.value - std::log2(4.0 / (delta * delta));
  if (out.lhs.is_infinite()) {
    out.slack = std::numeric_limits<double>::infinity();
    out.holds = true;
    return out;
  }
  out.slack = out.rhs.is_infinite() ? -std::numeric_limits<double>::infinity() : out.lhs.value() - out.rhs.value();
  out.holds = out.slack >= -tolerance;

  const QuantumState smoothed = QuantumState::from_matrix(sm.smoothed);
  const double fid = generalized_fidelity(rho, smoothed);
  const CMatrix& q = ht.test;
  const CMatrix notq = CMatrix::Identity(rho.dim(), rho.dim()) - q;
  const double qrt = std::max(0.0, (q * smoothed.matrix()).trace().real());
  const double nqr = std::max(0.0, (notq * rho.matrix()).trace().real());
  const double qs = std::max(0.0, (q * sigma.matrix()).trace().real());
  out.chain = {std::sqrt(1.0 - eps), std::sqrt(fid), std::sqrt(qrt) + std::sqrt(nqr),
               std::sqrt(std::exp2(sm.value.value()) * qs) + std::sqrt(1.0 - eps - delta)};
  for (std::size_t i = 0; i + 1 < out.chain.size(); ++i) out.chain_holds = out.chain_holds && out.chain[i] <= out.chain[i + 1] + tolerance;
  out.saturated = std::abs(fid - (1.0 - eps)) <= 1e-6;
  return out;
}

// ---------------------------------------------------------------------------
// Joint smoothing of a bipartite state

struct JointResponse {
  SmoothingCertificate certificate;  // projector = 1 - Pi_A (x) Pi_B
  HermitianOperator projector_a;     // Pi_A (kept)
  HermitianOperator projector_b;
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  double delta = 0.0;                // -log(1 - eps - eps')
};

namespace detail {

inline void check_joint_params(double eps, double eps2, const char* what) {
  if (!(eps > 0.0 && eps2 > 0.0 && eps + eps2 < 1.0)) throw DomainError(std::string(what) + ": need eps, eps' > 0 and eps + eps' < 1");
}

inline void check_bipartite(const QuantumState& rho_ab, const PositiveOperator& sa, const PositiveOperator& sb, const char* what) {
  if (rho_ab.dim() != sa.dim() * sb.dim()) throw DomainError(std::string(what) + ": dim(rho_AB) must be dim(sigma_A) * dim(sigma_B)");
  require_normalized(rho_ab, what);
}

inline void require_effect(const HermitianOperator& m, int d, const char* what) {
  require_same_dim(m.dim(), d, what);
  const RVector ev = eigvalsh(m.matrix());
  if (ev.minCoeff() < -tol::psd || ev.maxCoeff() > 1.0 + tol::psd) throw DomainError(std::string(what) + ": need 0 <= M <= 1");
}

}  // namespace detail

/// The per-witness step of joint smoothing: for effects M_A, M_B, projects rho_AB
/// onto Pi_A (x) Pi_B built from the measured information spectra.
inline JointResponse joint_smoother_response(const QuantumState& rho_ab, const PositiveOperator& sigma_a,
                                             const PositiveOperator& sigma_b, double eps, double eps2,
                                             const HermitianOperator& m_a, const HermitianOperator& m_b,
                                             double eta = default_eta) {
  const char* what = "joint_smoother_response";
  detail::check_joint_params(eps, eps2, what);
  detail::check_bipartite(rho_ab, sigma_a, sigma_b, what);
  if (!(eta > 0.0)) throw DomainError("joint_smoother_response: eta must be > 0");
  const int da = sigma_a.dim(), db = sigma_b.dim();
  detail::require_effect(m_a, da, what);
  detail::require_effect(m_b, db, what);

  const CMatrix rho_a = partial_trace_b(rho_ab.matrix(), da, db);
  const CMatrix rho_b = partial_trace_a(rho_ab.matrix(), da, db);
  const auto ma = detail::measure_in_eigenbasis(m_a, rho_a, sigma_a.matrix());
  const auto mb = detail::measure_in_eigenbasis(m_b, rho_b, sigma_b.matrix());
  const double ka = classical::ds(ma.p, ma.q, 1.0 - eps).value;
  const double kb = classical::ds(mb.p, mb.q, 1.0 - eps2).value;
  const CMatrix pa = detail::projector_on(ma.basis, detail::below_threshold(ma.p, ma.q, ka + eta));
  const CMatrix pb = detail::projector_on(mb.basis, detail::below_threshold(mb.p, mb.q, kb + eta));
  const CMatrix pab = kron(pa, pb);
  const double n = (pab * rho_ab.matrix()).trace().real();
  if (n < 1e-12) throw DegenerateProjection("joint_smoother_response: Pi_A (x) Pi_B annihilates rho_AB");

  JointResponse out;
  out.projector_a = HermitianOperator(pa);
  out.projector_b = HermitianOperator(pb);
  out.delta = -std::log2(1.0 - eps - eps2);
  out.lambda_a = ka + eta + out.delta;
  out.lambda_b = kb + eta + out.delta;

  CMatrix smoothed = detail::hermitian_part(pab * rho_ab.matrix() * pab) / n;
  smoothed /= smoothed.trace().real();
  const QuantumState st(smoothed, Normalization::normalized);
  const CMatrix sa_t = partial_trace_b(smoothed, da, db);
  const CMatrix sb_t = partial_trace_a(smoothed, da, db);
  const double lhs_a = (m_a.matrix() * sa_t).trace().real();
  const double lhs_b = (m_b.matrix() * sb_t).trace().real();
  const double rhs_a = std::exp2(out.lambda_a) * (m_a.matrix() * sigma_a.matrix()).trace().real();
  const double rhs_b = std::exp2(out.lambda_b) * (m_b.matrix() * sigma_b.matrix()).trace().real();
  const double kept_a = (pa * rho_a).trace().real();
  const double kept_b = (pb * rho_b).trace().real();

  SmoothingCertificate& c = out.certificate;
  c.method = "joint";
  c.smoothed_state = st;
  c.projector = HermitianOperator(CMatrix::Identity(rho_ab.dim(), rho_ab.dim()) - pab);
  c.distance = purified_distance(rho_ab, st);
  c.claimed_bound = DivergenceValue::finite(out.lambda_a);
  c.witness_value = lhs_a > 0.0 && rhs_a > 0.0 ? std::log2(lhs_a / rhs_a) + out.lambda_a : -std::numeric_limits<double>::infinity();
  c.checks = {
      {"1 - eps <= tr(Pi_A rho_A)", 1.0 - eps, kept_a, 1e-9},
      {"1 - eps' <= tr(Pi_B rho_B)", 1.0 - eps2, kept_b, 1e-9},
      {"tr((1 - Pi_A (x) Pi_B) rho_AB) <= eps + eps'", 1.0 - n, eps + eps2, 1e-9},
      {"purified distance <= sqrt(eps + eps')", c.distance, std::sqrt(eps + eps2), 1e-9},
      {"tr(M_A rho~_A) <= 2^lambda_A tr(M_A sigma_A)", lhs_a, rhs_a, 1e-9 * std::max(1.0, rhs_a)},
      {"tr(M_B rho~_B) <= 2^lambda_B tr(M_B sigma_B)", lhs_b, rhs_b, 1e-9 * std::max(1.0, rhs_b)},
  };
  return out;
}

enum class JointMode { theorem, corollary };

struct JointSmoothingResult {
  QuantumState smoothed_joint_state{HermitianOperator::identity(1), Normalization::normalized};
  QuantumState marginal_a{HermitianOperator::identity(1), Normalization::normalized};
  QuantumState marginal_b{HermitianOperator::identity(1), Normalization::normalized};
  DivergenceValue lambda_a;
  DivergenceValue lambda_b;
  double delta = 0.0;        // correction in both lambdas (eta comes on top in theorem mode)
  double radius = 0.0;       // purified-distance radius
  double fidelity = 0.0;     // generalized fidelity to rho_AB achieved by the SDP
  double distance = 0.0;     // purified distance, recomputed
  int iterations = 0;
  std::vector<CertificateCheck> checks;  // independent re-verification

  bool all_hold() const {
    for (const auto& c : checks)
      if (!c.holds()) return false;
    return true;
  }
};

/// Finds one state near rho_AB whose marginals satisfy both max-divergence
/// bounds: maximizes the fidelity to rho_AB subject to
/// tr_B rho~ <= 2^lambda_A sigma_A, tr_A rho~ <= 2^lambda_B sigma_B, tr rho~ = 1,
/// then checks the optimum lies in the ball.
///
/// theorem:   lambda = D_h^{1-eps}(rho_A || sigma_A) + Delta + eta, radius sqrt(eps + eps').
/// corollary: lambda = D_max^{sqrt(eps),P}(rho_A || sigma_A) + 2 - 2 log delta - log(1 - eps - eps' - 2 delta),
///            radius sqrt(eps + eps' + 2 delta).
inline JointSmoothingResult joint_smoother_feasibility(const QuantumState& rho_ab, const PositiveOperator& sigma_a,
                                                       const PositiveOperator& sigma_b, double eps, double eps2,
                                                       double eta = default_eta, JointMode mode = JointMode::theorem,
                                                       double delta = 0.1, const sdp::SdpOptions& options = {}) {
  const char* what = "joint_smoother_feasibility";
  detail::check_joint_params(eps, eps2, what);
  detail::check_bipartite(rho_ab, sigma_a, sigma_b, what);
  const int da = sigma_a.dim(), db = sigma_b.dim(), d = rho_ab.dim();
  const QuantumState rho_a(partial_trace_b(rho_ab.matrix(), da, db), Normalization::normalized);
  const QuantumState rho_b(partial_trace_a(rho_ab.matrix(), da, db), Normalization::normalized);

  JointSmoothingResult out;
  if (mode == JointMode::theorem) {
    if (!(eta > 0.0)) throw DomainError("joint_smoother_feasibility: eta must be > 0");
    out.delta = -std::log2(1.0 - eps - eps2);
    out.radius = std::sqrt(eps + eps2);
    out.lambda_a = dh(rho_a, sigma_a, 1.0 - eps) + (out.delta + eta);
    out.lambda_b = dh(rho_b, sigma_b, 1.0 - eps2) + (out.delta + eta);
  } else {
    if (!(delta > 0.0 && eps + eps2 + 2.0 * delta < 1.0)) {
      throw DomainError("joint_smoother_feasibility: corollary mode needs delta > 0 and eps + eps' + 2 delta < 1");
    }
    out.delta = 2.0 - 2.0 * std::log2(delta) - std::log2(1.0 - eps - eps2 - 2.0 * delta);
    out.radius = std::sqrt(eps + eps2 + 2.0 * delta);
    out.lambda_a = dmax_smooth(rho_a, sigma_a, SmoothingBall::purified(std::sqrt(eps))).value + out.delta;
    out.lambda_b = dmax_smooth(rho_b, sigma_b, SmoothingBall::purified(std::sqrt(eps2))).value + out.delta;
  }

  // Maximize Re tr X over [[D, X], [X^dagger, V^dagger rho~ V]] >= 0.
  sdp::SdpProblem p;
  const sdp::OperatorVariable v = sdp::add_operator_variable(p, d);
  const CMatrix basis = detail::support_basis(rho_ab.matrix());
  const int r = static_cast<int>(basis.cols());
  const CMatrix dmat = detail::hermitian_part(basis.adjoint() * rho_ab.matrix() * basis);
  const int fb = p.add_block(2 * r);
  p.set_objective(fb, -1.0 * sdp::overlap_coefficient(r));
  sdp::add_matrix_equality(p, r,
                           {{fb, [r](const CMatrix& e) -> CMatrix {
                               CMatrix c = CMatrix::Zero(2 * r, 2 * r);
                               c.topLeftCorner(r, r) = e;
                               return c;
                             }}},
                           dmat);
  sdp::add_matrix_equality(p, r,
                           {{fb,
                             [r](const CMatrix& e) -> CMatrix {
                               CMatrix c = CMatrix::Zero(2 * r, 2 * r);
                               c.bottomRightCorner(r, r) = e;
                               return c;
                             }},
                            {v.block, [basis](const CMatrix& e) -> CMatrix { return -(basis * e * basis.adjoint()); }}},
                           CMatrix::Zero(r, r));
  p.add_constraint({sdp::trace_term(v)}, 1.0, sdp::Sense::equal);
  const CMatrix ida = CMatrix::Identity(da, da), idb = CMatrix::Identity(db, db);
  if (out.lambda_a.is_finite()) {
    const int sa = p.add_block(da);
    sdp::add_matrix_equality(p, da,
                             {sdp::block_term(sa), {v.block, [idb](const CMatrix& e) -> CMatrix { return kron(e, idb); }}},
                             std::exp2(out.lambda_a.value()) * sigma_a.matrix());
  }
  if (out.lambda_b.is_finite()) {
    const int sb = p.add_block(db);
    sdp::add_matrix_equality(p, db,
                             {sdp::block_term(sb), {v.block, [ida](const CMatrix& e) -> CMatrix { return kron(ida, e); }}},
                             std::exp2(out.lambda_b.value()) * sigma_b.matrix());
  }

  const sdp::SdpSolution sol = sdp::solve(p, options);
  out.iterations = sol.iterations;
  if (sol.status == sdp::Status::infeasible) {
    throw CertificateViolation("joint_smoother_feasibility: marginal constraints are infeasible");
  }
  if (sol.status != sdp::Status::optimal) {
    throw NumericalFailure(std::string("joint_smoother_feasibility: solver status ") + sdp::to_string(sol.status),
                           sdp::dump_problem(p));
  }
  const double overlap = -sol.primal_value;
  out.fidelity = overlap * overlap;
  if (out.fidelity < 1.0 - out.radius * out.radius - 1e-6) {
    throw CertificateViolation("joint_smoother_feasibility: best fidelity " + std::to_string(out.fidelity) +
                               " is outside the ball");
  }

  const CMatrix smoothed = detail::tidy_state(v.value(sol), true);
  out.smoothed_joint_state = QuantumState(smoothed, Normalization::normalized);
  out.marginal_a = QuantumState(partial_trace_b(smoothed, da, db), Normalization::normalized);
  out.marginal_b = QuantumState(partial_trace_a(smoothed, da, db), Normalization::normalized);
  out.distance = purified_distance(rho_ab, out.smoothed_joint_state);

  auto min_eig = [](const CMatrix& a) { return detail::eigvalsh(detail::hermitian_part(a)).minCoeff(); };
  out.checks.push_back({"purified distance <= radius", out.distance, out.radius, 1e-6});
  out.checks.push_back({"|tr rho~ - 1|", std::abs(smoothed.trace().real() - 1.0), 0.0, 1e-6});
  out.checks.push_back({"-lambda_min(rho~)", -min_eig(smoothed), 0.0, 1e-6});
  if (out.lambda_a.is_finite()) {
    out.checks.push_back({"rho~_A <= 2^lambda_A sigma_A (-lambda_min)",
                          -min_eig(std::exp2(out.lambda_a.value()) * sigma_a.matrix() - out.marginal_a.matrix()), 0.0, 1e-6});
  }
  if (out.lambda_b.is_finite()) {
    out.checks.push_back({"rho~_B <= 2^lambda_B sigma_B (-lambda_min)",
                          -min_eig(std::exp2(out.lambda_b.value()) * sigma_b.matrix() - out.marginal_b.matrix()), 0.0, 1e-6});
  }
  return out;
}

}  // namespace oneshot
