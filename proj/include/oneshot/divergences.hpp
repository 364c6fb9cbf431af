#pragma once

// One-shot divergences between a state rho and a positive operator sigma,
// all in bits: max-divergence and its smoothed versions, sandwiched Renyi
// divergences, relative entropy, hypothesis-testing and information-spectrum
// divergences.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oneshot/errors.hpp"
#include "oneshot/linalg.hpp"
#include "oneshot/sdp.hpp"
#include "oneshot/sdp_ball.hpp"

namespace oneshot {

/// Extended real in bits: finite or +infinity.
class DivergenceValue {
 public:
  DivergenceValue() = default;
  static DivergenceValue finite(double v) {
    if (!std::isfinite(v)) throw DomainError("DivergenceValue: finite value expected");
    DivergenceValue d;
    d.v_ = v;
    return d;
  }
  static DivergenceValue infinity() {
    DivergenceValue d;
    d.inf_ = true;
    return d;
  }

  bool is_infinite() const { return inf_; }
  bool is_finite() const { return !inf_; }
  /// The finite value; +inf as a double for the infinite variant.
  double value() const { return inf_ ? std::numeric_limits<double>::infinity() : v_; }

  std::string str() const { return inf_ ? std::string("inf") : std::to_string(v_); }

  friend bool operator==(const DivergenceValue& a, const DivergenceValue& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }
  friend bool operator<(const DivergenceValue& a, const DivergenceValue& b) {
    if (a.inf_) return false;
    return b.inf_ || a.v_ < b.v_;
  }
  friend bool operator<=(const DivergenceValue& a, const DivergenceValue& b) { return !(b < a); }
  friend DivergenceValue operator+(const DivergenceValue& a, double s) {
    return a.inf_ ? a : DivergenceValue::finite(a.v_ + s);
  }
  friend DivergenceValue operator-(const DivergenceValue& a, double s) { return a + (-s); }

 private:
  double v_ = 0.0;
  bool inf_ = false;
};

enum class BallKind { purified, trace };

inline const char* to_string(BallKind k) { return k == BallKind::purified ? "purified" : "trace"; }

class SmoothingBall {
 public:
  SmoothingBall(BallKind kind, double radius) : kind_(kind), radius_(radius) {
    if (!(radius >= 0.0 && radius < 1.0)) throw DomainError("SmoothingBall: radius must lie in [0, 1)");
  }
  static SmoothingBall purified(double eps) { return {BallKind::purified, eps}; }
  static SmoothingBall trace(double eps) { return {BallKind::trace, eps}; }

  BallKind kind() const { return kind_; }
  double radius() const { return radius_; }

 private:
  BallKind kind_;
  double radius_;
};

namespace detail {

inline void same_dim(const QuantumState& rho, const PositiveOperator& sigma, const char* what) {
  require_same_dim(rho.dim(), sigma.dim(), what);
}

/// tr((1 - Pi_sigma) rho).
inline double leakage(const CMatrix& rho, const CMatrix& sigma) {
  const CMatrix f = support_basis(sigma);
  return rho.trace().real() - (f.adjoint() * rho * f).trace().real();
}

inline bool unsupported(const QuantumState& rho, const PositiveOperator& sigma) {
  return leakage(rho.matrix(), sigma.matrix()) > tol::support_leak * rho.trace();
}

inline double trace_product(const CMatrix& a, const CMatrix& b) { return (a * b).trace().real(); }

inline void check_eps(double eps, bool allow_zero, const char* what) {
  const bool ok = allow_zero ? (eps >= 0.0 && eps < 1.0) : (eps > 0.0 && eps < 1.0);
  if (!ok) throw DomainError(std::string(what) + (allow_zero ? ": eps must lie in [0, 1)" : ": eps must lie in (0, 1)"));
}

inline void require_normalized(const QuantumState& rho, const char* what) {
  if (!rho.is_normalized()) throw DomainError(std::string(what) + ": rho must be normalized");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed forms

/// D_max(rho || sigma) = log ||sigma^{-1/2} rho sigma^{-1/2}||_inf, +inf when
/// supp(rho) is not contained in supp(sigma).
inline DivergenceValue dmax(const QuantumState& rho, const PositiveOperator& sigma) {
  detail::same_dim(rho, sigma, "dmax");
  if (detail::unsupported(rho, sigma)) return DivergenceValue::infinity();
  const CMatrix s = mp_power(sigma, -0.5).matrix();
  const double top = detail::eigvalsh(detail::hermitian_part(s * rho.matrix() * s)).maxCoeff();
  return DivergenceValue::finite(std::log2(top));
}

/// Sandwiched Renyi divergence of order alpha in [1/2, 1) or (1, inf).
inline DivergenceValue renyi(const QuantumState& rho, const PositiveOperator& sigma, double alpha) {
  detail::same_dim(rho, sigma, "renyi");
  if (alpha == 1.0) throw DomainError("renyi: alpha = 1 is the relative entropy; use rel_entropy");
  if (!(alpha >= 0.5) || !std::isfinite(alpha)) throw DomainError("renyi: alpha must lie in [1/2, 1) or (1, inf)");
  if (alpha > 1.0 && detail::unsupported(rho, sigma)) return DivergenceValue::infinity();
  const CMatrix s = mp_power(sigma, (1.0 - alpha) / (2.0 * alpha)).matrix();
  const RVector ev = detail::eigvalsh(detail::hermitian_part(s * rho.matrix() * s));
  double q = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0.0) q += std::pow(ev(i), alpha);
  if (!(q > 0.0)) return DivergenceValue::infinity();  // alpha < 1 with rho orthogonal to sigma
  return DivergenceValue::finite(std::log2(q / rho.trace()) / (alpha - 1.0));
}

/// Umegaki relative entropy normalized by tr rho.
inline DivergenceValue rel_entropy(const QuantumState& rho, const PositiveOperator& sigma) {
  detail::same_dim(rho, sigma, "rel_entropy");
  if (detail::unsupported(rho, sigma)) return DivergenceValue::infinity();
  const auto er = detail::eigh(rho.matrix());
  const double rcut = tol::rank * std::max(er.values.maxCoeff(), 0.0);
  double self = 0.0;
  for (Eigen::Index i = 0; i < er.values.size(); ++i)
    if (er.values(i) > rcut) self += er.values(i) * std::log2(er.values(i));
  const auto es = detail::eigh(sigma.matrix());
  const double scut = tol::rank * std::max(es.values.maxCoeff(), 0.0);
  const CMatrix log_sigma = detail::spectral_apply(es, [scut](double x) { return x > scut ? std::log2(x) : 0.0; });
  const double cross = detail::trace_product(rho.matrix(), log_sigma);
  return DivergenceValue::finite((self - cross) / rho.trace());
}

// ---------------------------------------------------------------------------
// Hypothesis testing

struct HypothesisTest {
  DivergenceValue value;
  CMatrix test;        // optimal Lambda, 0 <= Lambda <= 1, tr Lambda rho = 1 - eps
  double beta = 0.0;   // tr Lambda sigma
  double threshold = 0.0;
  int iterations = 0;
};

namespace detail {

inline CMatrix np_projector(const CMatrix& rho, const CMatrix& sigma, double t) {
  const auto e = eigh(hermitian_part(rho - t * sigma));
  const double cut = tol::eig_pos * spectral_norm_herm(e.values);
  return projector_above(e, cut);
}

}  // namespace detail

/// D_h^eps with the optimal test: Neyman-Pearson projectors {rho - t sigma}_+
/// bracketed in t, mixed so that tr Lambda rho = 1 - eps exactly.
inline HypothesisTest dh_test(const QuantumState& rho, const PositiveOperator& sigma, double eps) {
  detail::same_dim(rho, sigma, "dh");
  detail::check_eps(eps, true, "dh");
  detail::require_normalized(rho, "dh");
  const CMatrix& r = rho.matrix();
  const CMatrix& s = sigma.matrix();
  const int d = rho.dim();
  const double tau = 1.0 - eps;
  HypothesisTest out;

  auto finish = [&](const CMatrix& lam) {
    out.test = detail::hermitian_part(lam);
    out.beta = detail::trace_product(out.test, s);
    out.value = out.beta > 0.0 ? DivergenceValue::finite(-std::log2(out.beta)) : DivergenceValue::infinity();
    return out;
  };

  const CMatrix pr = support_projector(rho.op()).matrix();
  if (eps == 0.0) return finish(pr);

  const CMatrix fs = detail::support_basis(s);
  const CMatrix pker = CMatrix::Identity(d, d) - fs * fs.adjoint();
  if (detail::trace_product(r, pker) >= tau) {
    out.beta = 0.0;
    out.test = pker;
    out.value = DivergenceValue::infinity();
    return out;
  }

  auto f = [&](double t, CMatrix& proj) {
    proj = detail::np_projector(r, s, t);
    return detail::trace_product(r, proj);
  };

  const DivergenceValue dm = dmax(rho, sigma);
  double t0 = dm.is_finite() ? std::exp2(dm.value()) : 1.0;
  double t_lo = 0.0, t_hi = 0.0, f_lo = 1.0, f_hi = 0.0;
  CMatrix l_lo = pr, l_hi, cur;
  double f0 = f(t0, cur);
  if (f0 >= tau) {
    t_lo = t0;
    f_lo = f0;
    l_lo = cur;
    t_hi = t0;
    for (int k = 0; k < 400; ++k) {
      t_hi *= 2.0;
      f_hi = f(t_hi, l_hi);
      if (f_hi < tau) break;
      t_lo = t_hi;
      f_lo = f_hi;
      l_lo = l_hi;
    }
    if (f_hi >= tau) throw NumericalFailure("dh: could not bracket the Neyman-Pearson threshold");
  } else {
    t_hi = t0;
    f_hi = f0;
    l_hi = cur;
    t_lo = t0;
    bool found = false;
    for (int k = 0; k < 200; ++k) {
      t_lo /= 2.0;
      f_lo = f(t_lo, cur);
      if (f_lo >= tau) {
        l_lo = cur;
        found = true;
        break;
      }
      t_hi = t_lo;
      f_hi = f_lo;
      l_hi = cur;
    }
    if (!found) {
      t_lo = 0.0;
      f_lo = 1.0;
      l_lo = pr;
    }
  }

  int it = 0;
  while (t_lo > 0.0 && t_hi / t_lo > 1.0 + 1e-10 && it < 120) {
    const double mid = std::sqrt(t_lo * t_hi);
    const double fm = f(mid, cur);
    if (fm >= tau) {
      t_lo = mid;
      f_lo = fm;
      l_lo = cur;
    } else {
      t_hi = mid;
      f_hi = fm;
      l_hi = cur;
    }
    ++it;
  }
  out.iterations = it;
  out.threshold = std::sqrt(std::max(t_lo, 0.0) * t_hi);
  const double w = f_lo > f_hi ? std::clamp((tau - f_hi) / (f_lo - f_hi), 0.0, 1.0) : 1.0;
  return finish(w * l_lo + (1.0 - w) * l_hi);
}

/// D_h^eps(rho || sigma) = -log min{tr Lambda sigma : tr Lambda rho >= 1 - eps, 0 <= Lambda <= 1}.
inline DivergenceValue dh(const QuantumState& rho, const PositiveOperator& sigma, double eps) {
  return dh_test(rho, sigma, eps).value;
}

struct SdpEstimate {
  DivergenceValue value;
  CMatrix optimizer;
  sdp::SdpSolution solution;
};

/// The same quantity straight from the semidefinite program (cross-check).
inline SdpEstimate dh_sdp(const QuantumState& rho, const PositiveOperator& sigma, double eps,
                          const sdp::SdpOptions& options = {}) {
  detail::same_dim(rho, sigma, "dh_sdp");
  detail::check_eps(eps, true, "dh_sdp");
  detail::require_normalized(rho, "dh_sdp");
  const int d = rho.dim();
  sdp::SdpProblem p;
  const int lam = p.add_block(d);
  const int comp = p.add_block(d);
  p.set_objective(lam, sigma.op());
  sdp::add_matrix_equality(p, d, {sdp::block_term(lam), sdp::block_term(comp)}, CMatrix::Identity(d, d));
  p.add_constraint({{lam, -1.0 * rho.op()}}, -(1.0 - eps), sdp::Sense::less_equal);
  SdpEstimate out;
  out.solution = sdp::solve(p, options);
  if (out.solution.status != sdp::Status::optimal) {
    throw NumericalFailure(std::string("dh_sdp: solver status ") + sdp::to_string(out.solution.status));
  }
  out.optimizer = out.solution.primal_blocks[static_cast<std::size_t>(lam)];
  const double beta = out.solution.primal_value;
  out.value = beta > 0.0 ? DivergenceValue::finite(-std::log2(beta)) : DivergenceValue::infinity();
  return out;
}

// ---------------------------------------------------------------------------
// Information spectrum

/// Bound on |lambda| for the information-spectrum scan, in bits.
inline constexpr double spectrum_cap = 60.0;

struct SpectrumValue {
  double value = 0.0;
  bool capped = false;  // the result sits on +-spectrum_cap
};

namespace detail {

/// Generalized eigenvalues t where t sigma - rho becomes singular, as log2 t.
inline std::vector<double> spectrum_breakpoints(const CMatrix& rho, const CMatrix& sigma) {
  const auto es = eigh(sigma);
  const double cut = tol::rank * std::max(es.values.maxCoeff(), 0.0);
  std::vector<Eigen::Index> sup, ker;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) (es.values(i) > cut ? sup : ker).push_back(i);
  std::vector<double> out;
  if (sup.empty()) return out;
  const auto k1 = static_cast<Eigen::Index>(sup.size());
  const auto k2 = static_cast<Eigen::Index>(ker.size());
  CMatrix v1(rho.rows(), k1), v2(rho.rows(), k2);
  RVector s1(k1);
  for (Eigen::Index i = 0; i < k1; ++i) {
    v1.col(i) = es.vectors.col(sup[static_cast<std::size_t>(i)]);
    s1(i) = es.values(sup[static_cast<std::size_t>(i)]);
  }
  for (Eigen::Index i = 0; i < k2; ++i) v2.col(i) = es.vectors.col(ker[static_cast<std::size_t>(i)]);
  CMatrix schur = v1.adjoint() * rho * v1;
  if (k2 > 0) {
    const CMatrix r12 = v1.adjoint() * rho * v2;
    const CMatrix r22 = hermitian_part(v2.adjoint() * rho * v2);
    const auto e22 = eigh(r22);
    const double c22 = tol::rank * std::max(e22.values.maxCoeff(), 0.0);
    const CMatrix pinv = spectral_apply(e22, [c22](double x) { return x > c22 ? 1.0 / x : 0.0; });
    schur -= r12 * pinv * r12.adjoint();
  }
  const RVector isq = s1.cwiseSqrt().cwiseInverse();
  const CMatrix g = isq.cast<Complex>().asDiagonal() * hermitian_part(schur) * isq.cast<Complex>().asDiagonal();
  const RVector ev = eigvalsh(hermitian_part(g));
  const double top = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > tol::rank * top && ev(i) > 0.0) out.push_back(std::log2(ev(i)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// f(lambda) = tr rho {2^lambda sigma - rho}_+.
inline double spectrum_tail(const QuantumState& rho, const PositiveOperator& sigma, double lambda) {
  detail::same_dim(rho, sigma, "spectrum_tail");
  const CMatrix proj = detail::np_projector(sigma.matrix() * std::exp2(lambda), rho.matrix(), 1.0);
  return detail::trace_product(rho.matrix(), proj);
}

/// D_s^eps with the cap flag: sup{lambda in [-cap, cap] : f(lambda) <= eps}.
inline SpectrumValue ds_detail(const QuantumState& rho, const PositiveOperator& sigma, double eps) {
  detail::same_dim(rho, sigma, "ds");
  detail::check_eps(eps, false, "ds");
  detail::require_normalized(rho, "ds");
  auto f = [&](double l) { return spectrum_tail(rho, sigma, l); };
  if (f(spectrum_cap) <= eps) return {spectrum_cap, true};

  std::vector<double> pts{-spectrum_cap};
  for (double b : detail::spectrum_breakpoints(rho.matrix(), sigma.matrix()))
    if (b > -spectrum_cap && b < spectrum_cap) pts.push_back(b);
  pts.push_back(spectrum_cap);

  constexpr int samples = 24;
  for (std::size_t j = pts.size() - 1; j >= 1; --j) {
    const double lo = pts[j - 1], hi = pts[j];
    // Interior samples, rightmost first.
    double right = hi;
    for (int k = samples; k >= 1; --k) {
      const double x = lo + (hi - lo) * k / (samples + 1);
      if (f(x) <= eps) {
        double a = x, b = right;
        for (int it = 0; it < 200 && b - a > 1e-12 * std::max(1.0, std::abs(a)); ++it) {
          const double mid = 0.5 * (a + b);
          (f(mid) <= eps ? a : b) = mid;
        }
        return {a, false};
      }
      right = x;
    }
    if (f(lo) <= eps) return {lo, j == 1};
  }
  return {-spectrum_cap, true};
}

/// D_s^eps(rho || sigma) = sup{lambda : tr rho {2^lambda sigma - rho}_+ <= eps}.
inline DivergenceValue ds(const QuantumState& rho, const PositiveOperator& sigma, double eps) {
  return DivergenceValue::finite(ds_detail(rho, sigma, eps).value);
}

// ---------------------------------------------------------------------------
// Classical evaluators on probability vectors (commuting case)

namespace classical {

/// Log-likelihood ratios with the 0/0 convention: q ~ 0 gives +inf when p > 0,
/// p = 0 gives -inf (no mass either way).
inline std::vector<std::pair<double, double>> atoms(const RVector& p, const RVector& q) {
  if (p.size() != q.size()) throw DomainError("classical: size mismatch");
  const double qmax = q.size() ? q.maxCoeff() : 0.0;
  std::vector<std::pair<double, double>> out;  // (llr, mass)
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 0.0) continue;
    const double l = q(i) <= tol::rank * qmax ? std::numeric_limits<double>::infinity() : std::log2(p(i) / q(i));
    out.push_back({l, p(i)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// sup{lambda : Pr_p[llr < lambda] <= eps}, capped at +-spectrum_cap.
inline SpectrumValue ds(const RVector& p, const RVector& q, double eps) {
  double below = 0.0;
  for (const auto& [l, m] : atoms(p, q)) {
    if (std::isinf(l)) break;
    if (below + m > eps) {
      if (l >= spectrum_cap) return {spectrum_cap, true};
      if (l <= -spectrum_cap) return {-spectrum_cap, true};
      return {l, false};
    }
    below += m;
  }
  return {spectrum_cap, true};
}

/// -log of the optimal randomized Neyman-Pearson type-II error at type-I error eps.
inline DivergenceValue dh(const RVector& p, const RVector& q, double eps) {
  if (p.size() != q.size()) throw DomainError("classical::dh: size mismatch");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) idx[static_cast<std::size_t>(i)] = i;
  // Sort by decreasing likelihood ratio p/q (q = 0 first).
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return p(a) * q(b) > p(b) * q(a); });
  const double need = (1.0 - eps) * p.sum();
  double got = 0.0, beta = 0.0;
  for (Eigen::Index i : idx) {
    if (got >= need) break;
    const double take = p(i) > 0.0 ? std::min(1.0, (need - got) / p(i)) : 0.0;
    got += take * p(i);
    beta += take * q(i);
  }
  return beta > 0.0 ? DivergenceValue::finite(-std::log2(beta)) : DivergenceValue::infinity();
}

}  // namespace classical

// ---------------------------------------------------------------------------
// Smooth max-divergence

struct SmoothMaxResult {
  DivergenceValue value;
  CMatrix smoothed;  // optimal rho~ (empty when the value is infinite)
  CMatrix witness;   // dual-optimal M >= 0 with tr M sigma <= 1 (empty when not available)
  sdp::Status status = sdp::Status::optimal;
  double gap = 0.0;
  int iterations = 0;
};

namespace detail {

inline CMatrix dmax_kernel_witness(const QuantumState& rho, const PositiveOperator& sigma, double value) {
  const CMatrix x = std::exp2(value) * sigma.matrix() - rho.matrix();
  const auto e = eigh(hermitian_part(x));
  // Eigenvectors at the bottom of the spectrum: the near-kernel of 2^D sigma - rho.
  const double scale = std::max(1.0, spectral_norm_herm(e.values));
  CMatrix m = CMatrix::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) <= e.values(0) + 1e-8 * scale) m += e.vectors.col(i) * e.vectors.col(i).adjoint();
  const double ts = trace_product(m, sigma.matrix());
  return ts > 0.0 ? CMatrix(m / ts) : CMatrix(m);
}

inline void add_ball(sdp::SdpProblem& p, const QuantumState& rho, const SmoothingBall& ball,
                     const sdp::OperatorVariable& v) {
  if (ball.kind() == BallKind::purified) {
    sdp::fidelity_ball_constraints(p, rho, ball.radius(), v);
  } else {
    sdp::trace_ball_constraints(p, rho, ball.radius(), v);
  }
}

inline void check_ball(const QuantumState& rho, const SmoothingBall& ball, const char* what) {
  if (ball.kind() == BallKind::trace && !rho.is_normalized()) {
    throw DomainError(std::string(what) + ": the trace ball needs a normalized rho");
  }
}

/// Pulls a solver iterate back into the set of (sub)normalized states.
inline CMatrix tidy_state(const CMatrix& x, bool normalize) {
  CMatrix y = spectral_apply(eigh(hermitian_part(x)), [](double v) { return std::max(v, 0.0); });
  const double t = y.trace().real();
  if (normalize || t > 1.0) y /= t;
  return y;
}

}  // namespace detail

/// D_max^eps(rho || sigma) = min over rho~ in the ball of D_max(rho~ || sigma),
/// solved as one SDP; also returns the smoother rho~ and the dual-optimal M.
inline SmoothMaxResult dmax_smooth(const QuantumState& rho, const PositiveOperator& sigma, const SmoothingBall& ball,
                                   const sdp::SdpOptions& options = {}) {
  detail::same_dim(rho, sigma, "dmax_smooth");
  detail::check_ball(rho, ball, "dmax_smooth");
  const double eps = ball.radius();
  SmoothMaxResult out;
  if (eps == 0.0) {
    out.value = dmax(rho, sigma);
    out.smoothed = rho.matrix();
    if (out.value.is_finite()) out.witness = detail::dmax_kernel_witness(rho, sigma, out.value.value());
    return out;
  }
  const double leak = detail::leakage(rho.matrix(), sigma.matrix());
  const double allowed = ball.kind() == BallKind::purified ? eps * eps : eps;
  if (leak > allowed) {
    out.value = DivergenceValue::infinity();
    out.status = sdp::Status::infeasible;
    return out;
  }
  if (ball.kind() == BallKind::purified && rho.trace() <= eps * eps) {
    throw DomainError("dmax_smooth: the ball contains the zero operator (tr rho <= eps^2); the value is -inf");
  }

  const CMatrix frame = detail::support_basis(sigma.matrix());
  const int k = static_cast<int>(frame.cols());
  const CMatrix sigma_k = detail::hermitian_part(frame.adjoint() * sigma.matrix() * frame);

  sdp::SdpProblem p;
  const int t = p.add_block(1, sdp::BlockKind::real_symmetric);
  p.set_objective(t, HermitianOperator::identity(1));
  const sdp::OperatorVariable v = sdp::add_operator_variable(p, frame);
  const int slack = p.add_block(k);
  // slack = t sigma - rho~ on the support frame.
  sdp::add_matrix_equality(p, k, {sdp::block_term(slack), sdp::block_term(v.block), sdp::scalar_term(t, -sigma_k)},
                           CMatrix::Zero(k, k));
  detail::add_ball(p, rho, ball, v);

  const sdp::SdpSolution sol = sdp::solve(p, options);
  out.status = sol.status;
  out.gap = sol.gap;
  out.iterations = sol.iterations;
  if (sol.status == sdp::Status::infeasible) {
    out.value = DivergenceValue::infinity();
    return out;
  }
  if (sol.status != sdp::Status::optimal) {
    throw NumericalFailure(std::string("dmax_smooth: solver status ") + sdp::to_string(sol.status), sdp::dump_problem(p));
  }
  const double tval = sol.primal_value;
  if (!(tval > 0.0)) throw NumericalFailure("dmax_smooth: non-positive optimal t", sdp::dump_problem(p));
  out.value = DivergenceValue::finite(std::log2(tval));
  out.smoothed = detail::tidy_state(v.value(sol), ball.kind() == BallKind::trace);

  CMatrix m = frame * sol.dual_blocks[static_cast<std::size_t>(slack)] * frame.adjoint();
  m = detail::spectral_apply(detail::eigh(detail::hermitian_part(m)), [](double x) { return std::max(x, 0.0); });
  const double ms = detail::trace_product(m, sigma.matrix());
  if (ms > 1.0) m /= ms;
  out.witness = m;

  // Post-hoc membership and domination.
  const QuantumState smoothed = QuantumState::from_matrix(out.smoothed);
  const double dist = ball.kind() == BallKind::purified ? purified_distance(rho, smoothed) : trace_distance(rho, smoothed);
  if (dist > eps + 1e-6) {
    throw NumericalFailure("dmax_smooth: smoother left the ball (distance " + std::to_string(dist) + ")", sdp::dump_problem(p));
  }
  if (!operator_leq(smoothed.op(), HermitianOperator(tval * sigma.matrix()), 1e-6)) {
    throw NumericalFailure("dmax_smooth: smoother is not dominated by 2^value sigma", sdp::dump_problem(p));
  }
  return out;
}

/// inf over rho~ in the ball of log tr(M rho~), for M >= 0 with tr M sigma <= 1.
/// Never exceeds the smooth max-divergence; equal at the dual-optimal M.
inline double dmax_dual_witness(const QuantumState& rho, const PositiveOperator& sigma, const SmoothingBall& ball,
                                const HermitianOperator& m, const sdp::SdpOptions& options = {}) {
  detail::same_dim(rho, sigma, "dmax_dual_witness");
  detail::require_same_dim(rho.dim(), m.dim(), "dmax_dual_witness");
  detail::check_ball(rho, ball, "dmax_dual_witness");
  if (detail::eigvalsh(m.matrix()).minCoeff() < -tol::psd) throw DomainError("dmax_dual_witness: M must be positive semidefinite");
  if (detail::trace_product(m.matrix(), sigma.matrix()) > 1.0 + 1e-9) throw DomainError("dmax_dual_witness: tr M sigma must be <= 1");
  if (ball.radius() == 0.0) return std::log2(std::max(0.0, detail::trace_product(m.matrix(), rho.matrix())));

  sdp::SdpProblem p;
  const sdp::OperatorVariable v = sdp::add_operator_variable(p, rho.dim());
  p.set_objective(v.block, m);
  detail::add_ball(p, rho, ball, v);
  const sdp::SdpSolution sol = sdp::solve(p, options);
  if (sol.status != sdp::Status::optimal) {
    throw NumericalFailure(std::string("dmax_dual_witness: solver status ") + sdp::to_string(sol.status), sdp::dump_problem(p));
  }
  return std::log2(std::max(0.0, sol.primal_value));
}

}  // namespace oneshot
