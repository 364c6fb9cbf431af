#include <gtest/gtest.h>

#include <cmath>

#include "oneshot/oneshot.hpp"
#include "oracles.hpp"

using namespace oneshot;
using namespace oneshot::sdp;

namespace {

CMatrix diag(std::initializer_list<double> v) {
  RVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<Complex>().asDiagonal();
}

HermitianOperator scalar(double x) { return HermitianOperator(CMatrix::Constant(1, 1, x)); }

QuantumState random_state(int d, std::uint64_t seed, int rank) {
  return harness::gen_state({harness::InstanceKind::ginibre, d, 0, 0, rank, seed});
}

}  // namespace

TEST(Solve, LargestEigenvalue) {
  // min t  s.t.  t 1 - S = diag(1, 3), S >= 0.
  SdpProblem p;
  const int t = p.add_block(1, BlockKind::real_symmetric);
  const int s = p.add_block(2);
  p.set_objective(t, scalar(1.0));
  add_matrix_equality(p, 2, {scalar_term(t, CMatrix::Identity(2, 2)), block_term(s, -1.0)}, diag({1, 3}));
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.primal_value, 3.0, 1e-6);
  EXPECT_LE(sol.dual_value, sol.primal_value + 1e-7);
}

TEST(Solve, TraceAboveIdentity) {
  // min tr X  s.t.  X - S = 1.
  SdpProblem p;
  const int x = p.add_block(4);
  const int s = p.add_block(4);
  p.set_objective(x, HermitianOperator::identity(4));
  add_matrix_equality(p, 4, {block_term(x), block_term(s, -1.0)}, CMatrix::Identity(4, 4));
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.primal_value, 4.0, 1e-6);
  EXPECT_LE(oneshot::detail::max_abs(sol.primal_blocks[0] - CMatrix::Identity(4, 4)), 1e-6);
}

TEST(Solve, DmaxProgramMatchesClosedForm) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const QuantumState rho = random_state(2, 10 + seed, 1 + static_cast<int>(seed % 2));
    const PositiveOperator sigma = harness::gen_sigma(2, 40 + seed);
    SdpProblem p;
    const int t = p.add_block(1, BlockKind::real_symmetric);
    const int s = p.add_block(2);
    p.set_objective(t, scalar(1.0));
    add_matrix_equality(p, 2, {scalar_term(t, sigma.matrix()), block_term(s, -1.0)}, rho.matrix());
    const auto sol = solve(p);
    ASSERT_EQ(sol.status, Status::optimal);
    EXPECT_NEAR(std::log2(sol.primal_value), dmax(rho, sigma).value(), 1e-6);
  }
}

TEST(Solve, DetectsInfeasibleAndUnbounded) {
  {
    // x >= 0 and x = -1.
    SdpProblem p;
    const int x = p.add_block(1, BlockKind::real_symmetric);
    p.add_constraint({{x, scalar(1.0)}}, -1.0);
    EXPECT_EQ(solve(p).status, Status::infeasible);
  }
  {
    // min -x  s.t.  x - y = 0.
    SdpProblem p;
    const int x = p.add_block(1, BlockKind::real_symmetric);
    const int y = p.add_block(1, BlockKind::real_symmetric);
    p.set_objective(x, scalar(-1.0));
    p.add_constraint({{x, scalar(1.0)}, {y, scalar(-1.0)}}, 0.0);
    EXPECT_EQ(solve(p).status, Status::unbounded);
  }
}

TEST(Solve, IterationCapIsAStatusNotACrash) {
  SdpProblem p;
  const int x = p.add_block(3);
  const int s = p.add_block(3);
  p.set_objective(x, HermitianOperator::identity(3));
  add_matrix_equality(p, 3, {block_term(x), block_term(s, -1.0)}, diag({1, 2, 3}));
  SdpOptions o;
  o.max_iterations = 1;
  const auto sol = solve(p, o);
  EXPECT_EQ(sol.status, Status::max_iterations);
  EXPECT_EQ(std::string(to_string(sol.status)), "maxIterations");
}

TEST(Solve, ValidationErrors) {
  SdpProblem empty;
  EXPECT_THROW(solve(empty), DomainError);
  SdpProblem p;
  const int x = p.add_block(2);
  p.add_constraint({{x, HermitianOperator::identity(3)}}, 1.0);
  EXPECT_THROW(solve(p), DomainError);
  SdpProblem q;
  const int r = q.add_block(2, BlockKind::real_symmetric);
  CMatrix c(2, 2);
  c << 0.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 0.0;
  q.add_constraint({{r, HermitianOperator(c)}}, 1.0);
  EXPECT_THROW(solve(q), DomainError);
  EXPECT_THROW(SdpProblem().add_block(0), DomainError);
}

TEST(Solve, RandomStrictlyFeasibleCorpus) {
  // Primal X0 > 0 and dual (y0, Z0 > 0) strictly feasible by construction.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    random::SplitMix64 rng(random::derive_seed(77, seed));
    const int d1 = 1 + static_cast<int>(rng.next() % 4);
    const int d2 = 1 + static_cast<int>(rng.next() % 4);
    const int m = 1 + static_cast<int>(rng.next() % 12);
    SdpProblem p;
    const int b1 = p.add_block(d1);
    const int b2 = p.add_block(d2, BlockKind::real_symmetric);
    auto herm = [&](int d, bool real) {
      CMatrix g = random::ginibre(d, d, rng);
      if (real) g = CMatrix(g.real().cast<Complex>());
      return CMatrix((g + g.adjoint()) / 2.0);
    };
    auto posdef = [&](int d, bool real) {
      CMatrix g = random::ginibre(d, d, rng);
      if (real) g = CMatrix(g.real().cast<Complex>());
      return CMatrix(g * g.adjoint() + 0.5 * CMatrix::Identity(d, d));
    };
    const CMatrix x1 = posdef(d1, false), x2 = posdef(d2, true);
    CMatrix c1 = posdef(d1, false), c2 = posdef(d2, true);
    for (int i = 0; i < m; ++i) {
      const CMatrix a1 = herm(d1, false), a2 = herm(d2, true);
      const double rhs = (a1 * x1).trace().real() + (a2 * x2).trace().real();
      const double y = rng.normal();
      c1 += y * a1;
      c2 += y * a2;
      p.add_constraint({{b1, HermitianOperator(a1)}, {b2, HermitianOperator(a2)}}, rhs);
    }
    p.set_objective(b1, HermitianOperator(c1));
    p.set_objective(b2, HermitianOperator(c2));
    const auto sol = solve(p);
    ASSERT_EQ(sol.status, Status::optimal) << "seed " << seed;
    EXPECT_LE(sol.gap, 1e-7 * (1.0 + std::abs(sol.primal_value))) << "seed " << seed;
    EXPECT_LE(sol.dual_value, sol.primal_value + 1e-7);
    EXPECT_LE(sol.iterations, 200);
    EXPECT_GE(oneshot::detail::eigvalsh(sol.primal_blocks[0]).minCoeff(), -1e-12);
  }
}

TEST(Solve, Deterministic) {
  const QuantumState rho = random_state(3, 5, 2);
  const PositiveOperator sigma = harness::gen_sigma(3, 6);
  const auto a = dmax_smooth(rho, sigma, SmoothingBall::purified(0.2));
  const auto b = dmax_smooth(rho, sigma, SmoothingBall::purified(0.2));
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.smoothed, b.smoothed);
  EXPECT_EQ(a.witness, b.witness);
}

TEST(Balls, ZeroRadiusPinsTheCenter) {
  const QuantumState rho = random_state(3, 9, 2);
  SdpProblem p;
  const auto rt = add_operator_variable(p, 3);
  fidelity_ball_constraints(p, rho, 0.0, rt);
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_LE(2.0 * oracle::trace_distance(rt.value(sol), rho.matrix()), 1e-6);
}

TEST(Balls, FidelityBallMembership) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const QuantumState rho = random_state(2, 60 + seed, 1);
    random::SplitMix64 rng(seed);
    const CMatrix g = random::ginibre(2, 2, rng);
    SdpProblem p;
    const auto rt = add_operator_variable(p, 2);
    fidelity_ball_constraints(p, rho, 0.3, rt);
    p.set_objective(rt.block, rt.pullback((g + g.adjoint()) / 2.0));
    const auto sol = solve(p);
    ASSERT_EQ(sol.status, Status::optimal);
    const CMatrix x = oneshot::detail::hermitian_part(rt.value(sol));
    EXPECT_LE(oracle::purified_distance(rho.matrix(), x), 0.3 + 1e-6);
  }
}

TEST(Balls, SubnormalizedCenter) {
  const QuantumState rho(CMatrix(random_state(3, 71, 2).matrix() * 0.8), Normalization::subnormalized);
  SdpProblem p;
  const auto rt = add_operator_variable(p, 3);
  fidelity_ball_constraints(p, rho, 0.25, rt);
  p.set_objective(rt.block, rt.pullback(CMatrix::Identity(3, 3)));  // smallest trace in the ball
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, Status::optimal);
  const CMatrix x = oneshot::detail::hermitian_part(rt.value(sol));
  EXPECT_LE(oracle::purified_distance(rho.matrix(), x), 0.25 + 1e-6);
  EXPECT_LT(x.trace().real(), rho.trace());
}

TEST(Balls, TraceBallMembership) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const QuantumState rho = random_state(3, 80 + seed, 2);
    random::SplitMix64 rng(seed + 100);
    const CMatrix g = random::ginibre(3, 3, rng);
    SdpProblem p;
    const auto rt = add_operator_variable(p, 3);
    trace_ball_constraints(p, rho, 0.3, rt);
    p.set_objective(rt.block, rt.pullback((g + g.adjoint()) / 2.0));
    const auto sol = solve(p);
    ASSERT_EQ(sol.status, Status::optimal);
    EXPECT_LE(oracle::trace_distance(rt.value(sol), rho.matrix()), 0.3 + 1e-6);
  }
  SdpProblem p;
  const auto rt = add_operator_variable(p, 2);
  EXPECT_THROW(trace_ball_constraints(p, QuantumState(diag({0.3, 0.3}), Normalization::subnormalized), 0.1, rt),
               DomainError);
  EXPECT_THROW(fidelity_ball_constraints(p, QuantumState(diag({0.5, 0.5}), Normalization::normalized), 1.0, rt),
               DomainError);
}

TEST(Dump, MirrorsProblemFields) {
  SdpProblem p;
  const int t = p.add_block(1, BlockKind::real_symmetric);
  p.set_objective(t, scalar(1.0));
  p.add_constraint({{t, scalar(2.0)}}, 1.0, Sense::less_equal);
  const io::Json j = problem_to_json(p);
  EXPECT_EQ(j["sense"], "minimize");
  EXPECT_EQ(j["blocks"][0]["kind"], "real_symmetric");
  EXPECT_EQ(j["constraints"][0]["sense"], "<=");
  EXPECT_EQ(j["constraints"][0]["terms"][0]["coeff"]["entries"][0][0][0], 2.0);
  EXPECT_EQ(io::Json::parse(dump_problem(p)), j);
}
