#pragma once

// Small dense semidefinite-program solver with duality-gap certificates.
//
// Primal (standard form, block diagonal variable X):
//
//     minimize    sum_b Re tr(C_b X_b)
//     subject to  sum_b Re tr(A_ib X_b)  =  b_i   (or <= b_i)
//                 X_b >= 0
//
// Dual:  maximize b^T y  s.t.  Z_b = C_b - sum_i y_i A_ib >= 0  (y_i <= 0 on
// "<=" rows).
//
// Complex Hermitian blocks are embedded as 2d x 2d real symmetric blocks
// [[Re X, -Im X], [Im X, Re X]]; every coefficient is embedded the same way
// (scaled by 1/2), so the real relaxation has the same optimal value and its
// solution projects back onto the structured subspace. The algorithm is an
// infeasible-start primal-dual path-following method with Nesterov-Todd
// scaling and Mehrotra predictor-corrector steps.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oneshot/errors.hpp"
#include "oneshot/linalg.hpp"
#include "oneshot/matrix_json.hpp"

namespace oneshot::sdp {

enum class BlockKind { hermitian, real_symmetric };

struct Block {
  int dim = 1;
  BlockKind kind = BlockKind::hermitian;
};

enum class Sense { equal, less_equal };

struct Term {
  int block = 0;
  HermitianOperator coeff;
};

struct Constraint {
  std::vector<Term> terms;
  double rhs = 0.0;
  Sense sense = Sense::equal;
};

struct SdpProblem {
  std::vector<Block> blocks;
  std::vector<HermitianOperator> objective;  // one per block
  std::vector<Constraint> constraints;

  int add_block(int dim, BlockKind kind = BlockKind::hermitian) {
    if (dim < 1) throw DomainError("SdpProblem: block dimension must be >= 1");
    blocks.push_back({dim, kind});
    objective.push_back(HermitianOperator::zero(dim));
    return static_cast<int>(blocks.size()) - 1;
  }

  void set_objective(int block, const HermitianOperator& c) { objective.at(static_cast<std::size_t>(block)) = c; }

  void add_constraint(std::vector<Term> terms, double rhs, Sense sense = Sense::equal) {
    constraints.push_back({std::move(terms), rhs, sense});
  }

  void validate() const {
    if (blocks.empty()) throw DomainError("SdpProblem: no blocks");
    if (objective.size() != blocks.size()) throw DomainError("SdpProblem: one objective coefficient per block required");
    auto check = [this](int b, const HermitianOperator& c) {
      if (b < 0 || b >= static_cast<int>(blocks.size())) throw DomainError("SdpProblem: block index out of range");
      const Block& blk = blocks[static_cast<std::size_t>(b)];
      if (c.dim() != blk.dim) throw DomainError("SdpProblem: coefficient dimension does not match its block");
      if (blk.kind == BlockKind::real_symmetric && c.matrix().imag().cwiseAbs().maxCoeff() > 0.0) {
        throw DomainError("SdpProblem: complex coefficient on a real block");
      }
      if (!std::isfinite(c.matrix().cwiseAbs().maxCoeff())) throw DomainError("SdpProblem: non-finite coefficient");
    };
    for (std::size_t b = 0; b < blocks.size(); ++b) check(static_cast<int>(b), objective[b]);
    for (const auto& con : constraints) {
      if (!std::isfinite(con.rhs)) throw DomainError("SdpProblem: non-finite right-hand side");
      for (const auto& t : con.terms) check(t.block, t.coeff);
    }
    if (constraints.empty()) {
      // Without constraints the problem is bounded only if every C_b >= 0.
      for (const auto& c : objective)
        if (detail::eigvalsh(c.matrix()).minCoeff() < 0.0) throw DomainError("SdpProblem: unbounded objective with no constraints");
    }
  }
};

struct SdpOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-7;
  int max_iterations = 200;
};

enum class Status { optimal, infeasible, unbounded, max_iterations };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::max_iterations: return "maxIterations";
  }
  return "unknown";
}

struct SdpSolution {
  Status status = Status::max_iterations;
  std::vector<CMatrix> primal_blocks;  // X_b per user block
  std::vector<CMatrix> dual_blocks;    // Z_b per user block
  RVector multipliers;                 // y per constraint
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;                    // |primal - dual|
  double primal_infeasibility = 0.0;   // relative, scaled rows
  double dual_infeasibility = 0.0;     // relative
  int iterations = 0;
};

inline const char* to_string(BlockKind k) { return k == BlockKind::hermitian ? "hermitian" : "real_symmetric"; }

/// JSON dump of a problem for offline cross-checking with another solver.
/// Fields mirror SdpProblem: blocks, objective, constraints (terms, rhs, sense).
inline io::Json problem_to_json(const SdpProblem& p) {
  io::Json blocks = io::Json::array();
  for (const auto& b : p.blocks) blocks.push_back({{"dim", b.dim}, {"kind", to_string(b.kind)}});
  io::Json objective = io::Json::array();
  for (const auto& c : p.objective) objective.push_back(io::matrix_to_json(c));
  io::Json constraints = io::Json::array();
  for (const auto& con : p.constraints) {
    io::Json terms = io::Json::array();
    for (const auto& t : con.terms) terms.push_back({{"block", t.block}, {"coeff", io::matrix_to_json(t.coeff)}});
    constraints.push_back({{"terms", std::move(terms)}, {"rhs", con.rhs}, {"sense", con.sense == Sense::equal ? "=" : "<="}});
  }
  return {{"sense", "minimize"}, {"blocks", std::move(blocks)}, {"objective", std::move(objective)},
          {"constraints", std::move(constraints)}};
}

inline std::string dump_problem(const SdpProblem& p) { return problem_to_json(p).dump(); }

namespace detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Entry {
  int row;
  int col;
  double val;
};

struct SparseTerm {
  int block;
  std::vector<Entry> entries;  // both triangles
};

struct RealProblem {
  std::vector<int> n;                         // real block sizes (user blocks, then slacks)
  std::vector<MatrixXd> c;
  std::vector<std::vector<SparseTerm>> a;     // per constraint
  VectorXd b;
  VectorXd row_scale;                         // original row = scaled row * row_scale
  std::vector<std::vector<std::pair<int, int>>> on_block;  // block -> (constraint, term index)
  std::size_t user_blocks = 0;
};

inline MatrixXd embed(const CMatrix& h, BlockKind kind) {
  if (kind == BlockKind::real_symmetric) return h.real();
  const Eigen::Index d = h.rows();
  MatrixXd out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = h.real();
  out.topRightCorner(d, d) = -h.imag();
  out.bottomLeftCorner(d, d) = h.imag();
  out.bottomRightCorner(d, d) = h.real();
  return 0.5 * out;
}

inline CMatrix extract(const MatrixXd& y, BlockKind kind) {
  if (kind == BlockKind::real_symmetric) return ((y + y.transpose()) / 2.0).cast<Complex>();
  const Eigen::Index d = y.rows() / 2;
  const MatrixXd re = (y.topLeftCorner(d, d) + y.bottomRightCorner(d, d)) / 2.0;
  const MatrixXd im = (y.bottomLeftCorner(d, d) - y.topRightCorner(d, d)) / 2.0;
  CMatrix out(d, d);
  out.real() = re;
  out.imag() = im;
  return oneshot::detail::hermitian_part(out);
}

inline std::vector<Entry> sparsify(const MatrixXd& m) {
  std::vector<Entry> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) out.push_back({static_cast<int>(i), static_cast<int>(j), m(i, j)});
  return out;
}

inline RealProblem lower(const SdpProblem& p) {
  RealProblem rp;
  rp.user_blocks = p.blocks.size();
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const Block& blk = p.blocks[b];
    rp.n.push_back(blk.kind == BlockKind::hermitian ? 2 * blk.dim : blk.dim);
    rp.c.push_back(embed(p.objective[b].matrix(), blk.kind));
  }
  const std::size_t m = p.constraints.size();
  rp.a.resize(m);
  rp.b.resize(static_cast<Eigen::Index>(m));
  rp.row_scale.resize(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& con = p.constraints[i];
    // Merge terms on the same block.
    std::vector<MatrixXd> dense(p.blocks.size());
    std::vector<bool> used(p.blocks.size(), false);
    for (const auto& t : con.terms) {
      const auto b = static_cast<std::size_t>(t.block);
      MatrixXd e = embed(t.coeff.matrix(), p.blocks[b].kind);
      if (!used[b]) {
        dense[b] = e;
        used[b] = true;
      } else {
        dense[b] += e;
      }
    }
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      if (!used[b]) continue;
      auto entries = sparsify(dense[b]);
      if (!entries.empty()) rp.a[i].push_back({static_cast<int>(b), std::move(entries)});
    }
    if (con.sense == Sense::less_equal) {
      rp.n.push_back(1);
      rp.c.push_back(MatrixXd::Zero(1, 1));
      rp.a[i].push_back({static_cast<int>(rp.n.size()) - 1, {{0, 0, 1.0}}});
    }
    double norm2 = 0.0;
    for (const auto& t : rp.a[i])
      for (const auto& e : t.entries) norm2 += e.val * e.val;
    if (norm2 == 0.0) {
      if (std::abs(con.rhs) > 0.0) throw DomainError("SdpProblem: constraint with zero coefficients and nonzero rhs");
      norm2 = 1.0;
    }
    const double s = std::sqrt(norm2);
    for (auto& t : rp.a[i])
      for (auto& e : t.entries) e.val /= s;
    rp.b(static_cast<Eigen::Index>(i)) = con.rhs / s;
    rp.row_scale(static_cast<Eigen::Index>(i)) = s;
  }
  rp.on_block.resize(rp.n.size());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < rp.a[i].size(); ++k)
      rp.on_block[static_cast<std::size_t>(rp.a[i][k].block)].push_back({static_cast<int>(i), static_cast<int>(k)});
  return rp;
}

using Blocks = std::vector<MatrixXd>;

inline double inner(const Blocks& x, const Blocks& y) {
  double s = 0.0;
  for (std::size_t b = 0; b < x.size(); ++b) s += (x[b].array() * y[b].array()).sum();
  return s;
}

inline double frob(const Blocks& x) { return std::sqrt(inner(x, x)); }

inline VectorXd apply_a(const RealProblem& rp, const Blocks& x) {
  VectorXd out = VectorXd::Zero(static_cast<Eigen::Index>(rp.a.size()));
  for (std::size_t i = 0; i < rp.a.size(); ++i) {
    double s = 0.0;
    for (const auto& t : rp.a[i]) {
      const MatrixXd& xb = x[static_cast<std::size_t>(t.block)];
      for (const auto& e : t.entries) s += e.val * xb(e.row, e.col);
    }
    out(static_cast<Eigen::Index>(i)) = s;
  }
  return out;
}

inline Blocks apply_at(const RealProblem& rp, const VectorXd& y) {
  Blocks out(rp.n.size());
  for (std::size_t b = 0; b < rp.n.size(); ++b) out[b] = MatrixXd::Zero(rp.n[b], rp.n[b]);
  for (std::size_t i = 0; i < rp.a.size(); ++i) {
    const double yi = y(static_cast<Eigen::Index>(i));
    if (yi == 0.0) continue;
    for (const auto& t : rp.a[i]) {
      MatrixXd& ob = out[static_cast<std::size_t>(t.block)];
      for (const auto& e : t.entries) ob(e.row, e.col) += yi * e.val;
    }
  }
  return out;
}

struct Scaling {
  MatrixXd r;      // R
  MatrixXd r_inv;  // R^{-1}
  MatrixXd w;      // R R^T
  VectorXd lambda; // R^{-1} X R^{-T} = R^T Z R = diag(lambda)
};

inline bool nt_scaling(const MatrixXd& x, const MatrixXd& z, Scaling& out) {
  Eigen::LLT<MatrixXd> lx(x), lz(z);
  if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
  const MatrixXd l1 = lx.matrixL();
  const MatrixXd l2 = lz.matrixL();
  Eigen::JacobiSVD<MatrixXd> svd(l2.transpose() * l1, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const VectorXd s = svd.singularValues();
  if (s.minCoeff() <= 0.0 || !s.allFinite()) return false;
  const VectorXd s_mhalf = s.cwiseSqrt().cwiseInverse();
  out.r = l1 * svd.matrixV() * s_mhalf.asDiagonal();
  out.r_inv = s_mhalf.asDiagonal() * svd.matrixU().transpose() * l2.transpose();
  out.w = out.r * out.r.transpose();
  out.lambda = s;
  return true;
}

/// Largest step in [0, inf) keeping lambda + alpha * D >= 0 (D symmetric, scaled).
inline double max_step(const VectorXd& lambda, const MatrixXd& d) {
  const VectorXd is = lambda.cwiseSqrt().cwiseInverse();
  MatrixXd s = is.asDiagonal() * d * is.asDiagonal();
  s = (s + s.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(s, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  return lo < 0.0 ? -1.0 / lo : std::numeric_limits<double>::infinity();
}

/// Solves lambda o U = V for the Jordan product with diagonal lambda.
inline MatrixXd jordan_solve(const VectorXd& lambda, const MatrixXd& v) {
  MatrixXd u(v.rows(), v.cols());
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j) u(i, j) = 2.0 * v(i, j) / (lambda(i) + lambda(j));
  return u;
}

}  // namespace detail

/// Solves the problem. Deterministic: fixed initialization, no randomization.
inline SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {}) {
  using namespace detail;
  problem.validate();
  const RealProblem rp = lower(problem);
  const std::size_t nb = rp.n.size();
  const auto m = static_cast<Eigen::Index>(rp.a.size());

  // Starting point: X0 = zeta I, Z0 = eta I per block.
  Blocks x(nb), z(nb);
  double total_dim = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    const double nbd = rp.n[b];
    total_dim += nbd;
    double zeta = std::max(10.0, std::sqrt(nbd));
    double eta = std::max({10.0, std::sqrt(nbd), rp.c[b].norm()});
    for (const auto& [i, k] : rp.on_block[b]) {
      double an = 0.0;
      for (const auto& e : rp.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].entries) an += e.val * e.val;
      an = std::sqrt(an);
      zeta = std::max(zeta, nbd * (1.0 + std::abs(rp.b(i))) / (1.0 + an));
      eta = std::max(eta, an);
    }
    x[b] = zeta * MatrixXd::Identity(rp.n[b], rp.n[b]);
    z[b] = eta * MatrixXd::Identity(rp.n[b], rp.n[b]);
  }
  VectorXd y = VectorXd::Zero(m);

  double c_norm = 0.0;
  for (const auto& cb : rp.c) c_norm += cb.squaredNorm();
  c_norm = std::sqrt(c_norm);
  const double b_norm = rp.b.norm();

  SdpSolution sol;
  struct Snapshot {
    Blocks x, z;
    VectorXd y;
    double merit = std::numeric_limits<double>::infinity();
    double pobj = 0, dobj = 0, pinf = 0, dinf = 0;
  } best;

  auto finish = [&](const Blocks& xf, const Blocks& zf, const VectorXd& yf, Status st, double pobj, double dobj,
                    double pinf, double dinf, int iters) {
    sol.status = st;
    sol.primal_value = pobj;
    sol.dual_value = dobj;
    sol.gap = std::abs(pobj - dobj);
    sol.primal_infeasibility = pinf;
    sol.dual_infeasibility = dinf;
    sol.iterations = iters;
    sol.primal_blocks.clear();
    sol.dual_blocks.clear();
    for (std::size_t b = 0; b < rp.user_blocks; ++b) {
      const BlockKind kind = problem.blocks[b].kind;
      sol.primal_blocks.push_back(extract(xf[b], kind));
      const double zscale = kind == BlockKind::hermitian ? 2.0 : 1.0;
      sol.dual_blocks.push_back(zscale * extract(zf[b], kind));
    }
    sol.multipliers = yf.cwiseQuotient(rp.row_scale);
    return sol;
  };

  int it = 0;
  for (;; ++it) {
    const VectorXd rprim = rp.b - apply_a(rp, x);
    const Blocks aty = apply_at(rp, y);
    Blocks rdual(nb);
    for (std::size_t b = 0; b < nb; ++b) rdual[b] = rp.c[b] - aty[b] - z[b];

    const double pobj = inner(rp.c, x);
    const double dobj = rp.b.dot(y);
    const double mu = inner(x, z) / total_dim;
    const double pinf = rprim.norm() / (1.0 + b_norm);
    const double dinf = frob(rdual) / (1.0 + c_norm);
    const double gap = std::abs(pobj - dobj);

    const double merit = std::max({pinf / options.feas_tol, dinf / options.feas_tol,
                                   gap / (options.gap_tol * (1.0 + std::abs(pobj)))});
    if (merit < best.merit) best = {x, z, y, merit, pobj, dobj, pinf, dinf};
    if (merit <= 1.0) return finish(x, z, y, Status::optimal, pobj, dobj, pinf, dinf, it);

    if (dobj > 1e8 * (1.0 + c_norm + frob(rdual))) {
      return finish(x, z, y, Status::infeasible, pobj, dobj, pinf, dinf, it);
    }
    if (-pobj > 1e8 * (1.0 + b_norm + rprim.norm())) {
      return finish(x, z, y, Status::unbounded, pobj, dobj, pinf, dinf, it);
    }
    if (it >= options.max_iterations) break;

    // Nesterov-Todd scaling per block.
    std::vector<Scaling> sc(nb);
    bool ok = true;
    for (std::size_t b = 0; b < nb && ok; ++b) ok = nt_scaling(x[b], z[b], sc[b]);
    if (!ok) break;

    // Schur complement M_ij = <A_i, W A_j W>.
    MatrixXd schur = MatrixXd::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (const auto& tj : rp.a[static_cast<std::size_t>(j)]) {
        const auto b = static_cast<std::size_t>(tj.block);
        const MatrixXd& w = sc[b].w;
        MatrixXd g = MatrixXd::Zero(w.rows(), w.cols());
        for (const auto& e : tj.entries) g.noalias() += e.val * w.col(e.row) * w.row(e.col);
        for (const auto& [i, k] : rp.on_block[b]) {
          double s = 0.0;
          for (const auto& e : rp.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].entries)
            s += e.val * g(e.row, e.col);
          schur(i, j) += s;
        }
      }
    }
    schur = (schur + schur.transpose()) / 2.0;
    Eigen::LLT<MatrixXd> llt(schur);
    Eigen::LDLT<MatrixXd> ldlt;
    const bool use_llt = llt.info() == Eigen::Success;
    if (!use_llt) {
      ldlt.compute(schur);
      // Linearly dependent rows make the Schur matrix singular; a small ridge keeps y bounded.
      const double diag_max = std::max(schur.diagonal().cwiseAbs().maxCoeff(), 1e-300);
      for (double ridge = 1e-14; ridge <= 1e-6; ridge *= 100.0) {
        if (ldlt.info() == Eigen::Success && ldlt.solve(VectorXd::Ones(m)).allFinite()) break;
        ldlt.compute(schur + ridge * diag_max * MatrixXd::Identity(m, m));
      }
      if (ldlt.info() != Eigen::Success) break;
    }
    auto schur_solve = [&](const VectorXd& rhs) -> VectorXd {
      if (use_llt) return llt.solve(rhs);
      return ldlt.solve(rhs);
    };

    Blocks wrw(nb);
    for (std::size_t b = 0; b < nb; ++b) wrw[b] = sc[b].w * rdual[b] * sc[b].w;
    const VectorXd a_wrw = apply_a(rp, wrw);

    struct Direction {
      Blocks dx, dz;
      VectorXd dy;
    };
    auto direction = [&](const Blocks& v) {
      Direction d;
      Blocks rur(nb);
      for (std::size_t b = 0; b < nb; ++b) {
        rur[b] = sc[b].r * jordan_solve(sc[b].lambda, v[b]) * sc[b].r.transpose();
      }
      d.dy = schur_solve(rprim - apply_a(rp, rur) + a_wrw);
      const Blocks atdy = apply_at(rp, d.dy);
      d.dx.resize(nb);
      d.dz.resize(nb);
      for (std::size_t b = 0; b < nb; ++b) {
        d.dz[b] = rdual[b] - atdy[b];
        MatrixXd dx = rur[b] - sc[b].w * d.dz[b] * sc[b].w;
        d.dx[b] = (dx + dx.transpose()) / 2.0;
      }
      return d;
    };
    auto steps = [&](const Direction& d, Blocks& dxs, Blocks& dzs) {
      double ap = std::numeric_limits<double>::infinity(), ad = ap;
      dxs.resize(nb);
      dzs.resize(nb);
      for (std::size_t b = 0; b < nb; ++b) {
        dxs[b] = sc[b].r_inv * d.dx[b] * sc[b].r_inv.transpose();
        dzs[b] = sc[b].r.transpose() * d.dz[b] * sc[b].r;
        ap = std::min(ap, max_step(sc[b].lambda, dxs[b]));
        ad = std::min(ad, max_step(sc[b].lambda, dzs[b]));
      }
      return std::pair{ap, ad};
    };

    // Predictor.
    Blocks v(nb);
    for (std::size_t b = 0; b < nb; ++b) v[b] = -MatrixXd(sc[b].lambda.cwiseAbs2().asDiagonal());
    const Direction aff = direction(v);
    Blocks dxa, dza;
    auto [ap_aff, ad_aff] = steps(aff, dxa, dza);
    ap_aff = std::min(1.0, ap_aff);
    ad_aff = std::min(1.0, ad_aff);
    double mu_aff = 0.0;
    for (std::size_t b = 0; b < nb; ++b)
      mu_aff += ((x[b] + ap_aff * aff.dx[b]).array() * (z[b] + ad_aff * aff.dz[b]).array()).sum();
    mu_aff /= total_dim;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (std::size_t b = 0; b < nb; ++b) {
      const MatrixXd corr = (dxa[b] * dza[b] + dza[b] * dxa[b]) / 2.0;
      v[b] = sigma * mu * MatrixXd::Identity(rp.n[b], rp.n[b]) -
             MatrixXd(sc[b].lambda.cwiseAbs2().asDiagonal()) - corr;
    }
    const Direction dir = direction(v);
    Blocks dxs, dzs;
    auto [ap, ad] = steps(dir, dxs, dzs);
    ap = std::min(1.0, 0.98 * ap);
    ad = std::min(1.0, 0.98 * ad);
    if (!std::isfinite(ap) || !std::isfinite(ad) || (ap < 1e-14 && ad < 1e-14)) break;

    for (std::size_t b = 0; b < nb; ++b) {
      x[b] += ap * dir.dx[b];
      z[b] += ad * dir.dz[b];
      x[b] = (x[b] + x[b].transpose()) / 2.0;
      z[b] = (z[b] + z[b].transpose()) / 2.0;
    }
    y += ad * dir.dy;
  }
  return finish(best.x, best.z, best.y, Status::max_iterations, best.pobj, best.dobj, best.pinf, best.dinf, it);
}

}  // namespace oneshot::sdp
