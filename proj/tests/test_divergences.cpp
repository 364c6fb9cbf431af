#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oneshot/oneshot.hpp"
#include "oracles.hpp"

using namespace oneshot;
using harness::InstanceKind;

namespace {

CMatrix diag(const std::vector<double>& v) {
  RVector d(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) d(static_cast<Eigen::Index>(i)) = v[i];
  return d.cast<Complex>().asDiagonal();
}

const std::vector<double> P{0.5, 0.5};
const std::vector<double> Q{0.25, 0.75};

QuantumState classical_rho() { return QuantumState(diag(P), Normalization::normalized); }
PositiveOperator classical_sigma() { return PositiveOperator(diag(Q)); }

QuantumState random_state(int d, std::uint64_t seed, int rank = 0) {
  return harness::gen_state({InstanceKind::ginibre, d, 0, 0, rank ? rank : d, seed});
}

}  // namespace

TEST(DivergenceValue, ExtendedRealArithmetic) {
  const auto inf = DivergenceValue::infinity();
  const auto one = DivergenceValue::finite(1.0);
  EXPECT_TRUE(one < inf);
  EXPECT_FALSE(inf < inf);
  EXPECT_TRUE(inf <= inf);
  EXPECT_EQ(inf + 5.0, inf);
  EXPECT_EQ((one - 0.5).value(), 0.5);
  EXPECT_EQ(inf.str(), "inf");
  EXPECT_THROW(DivergenceValue::finite(std::nan("")), DomainError);
}

TEST(ClosedForms, ClassicalPair) {
  EXPECT_NEAR(dmax(classical_rho(), classical_sigma()).value(), 1.0, 1e-12);
  EXPECT_NEAR(renyi(classical_rho(), classical_sigma(), 2.0).value(), std::log2(4.0 / 3.0), 1e-12);
  EXPECT_NEAR(rel_entropy(classical_rho(), classical_sigma()).value(), 0.5 + 0.5 * std::log2(2.0 / 3.0), 1e-12);
}

TEST(ClosedForms, IdentityAndSupportFailure) {
  const QuantumState r = random_state(3, 1);
  EXPECT_NEAR(dmax(r, r).value(), 0.0, 1e-9);
  EXPECT_NEAR(rel_entropy(r, r).value(), 0.0, 1e-9);
  for (double a : {0.5, 0.75, 1.5, 2.0, 5.0}) EXPECT_NEAR(renyi(r, r, a).value(), 0.0, 1e-9) << a;
  const QuantumState up(diag({1, 0}), Normalization::normalized);
  const PositiveOperator down(diag({0, 1}));
  EXPECT_TRUE(dmax(up, down).is_infinite());
  EXPECT_TRUE(rel_entropy(up, down).is_infinite());
  EXPECT_TRUE(renyi(up, down, 2.0).is_infinite());
  EXPECT_THROW(renyi(r, r, 1.0), DomainError);
  EXPECT_THROW(renyi(r, r, 0.25), DomainError);
  EXPECT_THROW(dmax(r, PositiveOperator(diag({1, 1}))), DomainError);
}

TEST(ClosedForms, OrderingInAlpha) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int d = 2 + static_cast<int>(s % 4);
    const QuantumState rho = random_state(d, 100 + s, 1 + static_cast<int>(s % d));
    const PositiveOperator sigma = harness::gen_sigma(d, 300 + s);
    const double r15 = renyi(rho, sigma, 1.5).value();
    const double r3 = renyi(rho, sigma, 3.0).value();
    const double dm = dmax(rho, sigma).value();
    EXPECT_LE(r15, r3 + 1e-9);
    EXPECT_LE(r3, dm + 1e-9);
    EXPECT_LE(rel_entropy(rho, sigma).value(), dm + 1e-9);
  }
}

TEST(ClosedForms, RelativeEntropyIsTheAlphaLimit) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const QuantumState rho = random_state(3, 500 + s);
    const PositiveOperator sigma = harness::gen_sigma(3, 600 + s);
    const double d = rel_entropy(rho, sigma).value();
    EXPECT_NEAR(renyi(rho, sigma, 1.0 - 1e-4).value(), d, 1e-3);
    EXPECT_NEAR(renyi(rho, sigma, 1.0 + 1e-4).value(), d, 1e-3);
  }
}

TEST(HypothesisTesting, ClassicalExamples) {
  EXPECT_NEAR(dh(classical_rho(), classical_sigma(), 0.5).value(), 2.0, 1e-9);
  EXPECT_NEAR(dh(classical_rho(), classical_sigma(), 0.4).value(), std::log2(2.5), 1e-9);
  EXPECT_NEAR(oracle::dh(P, Q, 0.5), 2.0, 1e-12);
  EXPECT_NEAR(oracle::dh(P, Q, 0.4), std::log2(2.5), 1e-12);
}

TEST(HypothesisTesting, SelfTest) {
  for (double eps : {0.0, 0.1, 0.5, 0.9}) {
    const QuantumState r = random_state(4, 7, 3);
    EXPECT_NEAR(dh(r, r, eps).value(), -std::log2(1.0 - eps), 1e-8) << eps;
  }
}

TEST(HypothesisTesting, OptimalTestStructure) {
  const QuantumState rho = random_state(4, 31, 2);
  const PositiveOperator sigma = harness::gen_sigma(4, 32);
  const HypothesisTest t = dh_test(rho, sigma, 0.2);
  EXPECT_NEAR((t.test * rho.matrix()).trace().real(), 0.8, 1e-9);
  EXPECT_NEAR((t.test * sigma.matrix()).trace().real(), t.beta, 1e-12);
  const RVector ev = detail::eigvalsh(t.test);
  EXPECT_GE(ev.minCoeff(), -1e-12);
  EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-12);
  EXPECT_THROW(dh(QuantumState(diag({0.3, 0.3}), Normalization::subnormalized), classical_sigma(), 0.1), DomainError);
  EXPECT_THROW(dh(rho, sigma, 1.0), DomainError);
}

TEST(HypothesisTesting, InfiniteWhenTestAvoidsSigma) {
  const QuantumState up(diag({1, 0}), Normalization::normalized);
  EXPECT_TRUE(dh(up, PositiveOperator(diag({0, 1})), 0.0).is_infinite());
}

TEST(HypothesisTesting, BisectionMatchesSdp) {
  sdp::SdpOptions tight;
  tight.feas_tol = 1e-10;
  tight.gap_tol = 1e-10;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const int d = 2 + static_cast<int>(s % 3);
    const QuantumState rho = random_state(d, 700 + s, 1 + static_cast<int>(s % d));
    const PositiveOperator sigma = harness::gen_sigma(d, 800 + s);
    EXPECT_NEAR(dh(rho, sigma, 0.2).value(), dh_sdp(rho, sigma, 0.2, tight).value.value(), 1e-6);
  }
}

TEST(InformationSpectrum, Examples) {
  // sup{l : P[log P/Q < l] <= 0.4} over atoms {1, log 2/3} of mass 1/2 each.
  EXPECT_NEAR(ds(classical_rho(), classical_sigma(), 0.4).value(), std::log2(2.0 / 3.0), 1e-9);
  EXPECT_NEAR(oracle::ds(P, Q, 0.4), std::log2(2.0 / 3.0), 1e-12);
  EXPECT_NEAR(ds(classical_rho(), classical_sigma(), 0.6).value(), 1.0, 1e-9);
  const QuantumState r = random_state(3, 3);
  for (double eps : {0.1, 0.5, 0.9}) EXPECT_NEAR(ds(r, r, eps).value(), 0.0, 1e-8);
  const auto sv = ds_detail(QuantumState(diag({1, 0}), Normalization::normalized), PositiveOperator(diag({0, 1})), 0.5);
  EXPECT_TRUE(sv.capped);
  EXPECT_EQ(sv.value, spectrum_cap);
}

TEST(InformationSpectrum, TailIsEvaluatedAsDefined) {
  const QuantumState rho = random_state(3, 41, 2);
  const PositiveOperator sigma = harness::gen_sigma(3, 42);
  const double v = ds(rho, sigma, 0.3).value();
  // Feasible at (just below) the value, infeasible just above it.
  EXPECT_LE(spectrum_tail(rho, sigma, v - 1e-7), 0.3 + 1e-9);
  EXPECT_GT(spectrum_tail(rho, sigma, v + 1e-6), 0.3);
}

TEST(ClassicalOracles, CommutingInstancesMatch) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const int d = 2 + static_cast<int>(s % 5);
    random::SplitMix64 rng(random::derive_seed(9, s));
    std::vector<double> p(d), q(d);
    double sp = 0.0, sq = 0.0;
    for (int i = 0; i < d; ++i) {
      p[i] = (s % 3 == 0 && i == 0) ? 0.0 : -std::log(1.0 - rng.uniform());
      q[i] = 0.05 - std::log(1.0 - rng.uniform());
      sp += p[i];
      sq += q[i];
    }
    for (int i = 0; i < d; ++i) p[i] /= sp, q[i] /= sq;
    const QuantumState rho(diag(p), Normalization::normalized);
    const PositiveOperator sigma(diag(q));
    EXPECT_NEAR(dmax(rho, sigma).value(), oracle::dmax(p, q), 1e-8);
    EXPECT_NEAR(renyi(rho, sigma, 2.0).value(), oracle::renyi(p, q, 2.0), 1e-8);
    EXPECT_NEAR(renyi(rho, sigma, 0.5).value(), oracle::renyi(p, q, 0.5), 1e-8);
    EXPECT_NEAR(rel_entropy(rho, sigma).value(), oracle::rel_entropy(p, q), 1e-8);
    for (double eps : {0.1, 0.25, 0.4}) {
      EXPECT_NEAR(dh(rho, sigma, eps).value(), oracle::dh(p, q, eps), 1e-8);
      EXPECT_NEAR(ds(rho, sigma, eps).value(), oracle::ds(p, q, eps), 1e-8);
      const RVector pv = Eigen::Map<const RVector>(p.data(), d), qv = Eigen::Map<const RVector>(q.data(), d);
      EXPECT_NEAR(classical::dh(pv, qv, eps).value(), oracle::dh(p, q, eps), 1e-10);
      EXPECT_NEAR(classical::ds(pv, qv, eps).value, oracle::ds(p, q, eps), 1e-12);
    }
  }
}

TEST(SmoothMax, ZeroRadiusIsDmax) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const QuantumState rho = random_state(3, 900 + s, 2);
    const PositiveOperator sigma = harness::gen_sigma(3, 950 + s);
    EXPECT_NEAR(dmax_smooth(rho, sigma, SmoothingBall::purified(0.0)).value.value(), dmax(rho, sigma).value(), 1e-6);
    EXPECT_NEAR(dmax_smooth(rho, sigma, SmoothingBall::trace(0.0)).value.value(), dmax(rho, sigma).value(), 1e-6);
  }
}

TEST(SmoothMax, PureStateAgainstMaximallyMixed) {
  const QuantumState rho = random_state(2, 5, 1);
  const PositiveOperator sigma(diag({0.5, 0.5}));
  double prev = dmax(rho, sigma).value();
  EXPECT_NEAR(prev, 1.0, 1e-9);
  for (double eps : {0.1, 0.2, 0.3}) {
    const auto r = dmax_smooth(rho, sigma, SmoothingBall::purified(eps));
    ASSERT_TRUE(r.value.is_finite());
    EXPECT_LE(r.value.value(), prev + 1e-7) << eps;
    prev = r.value.value();
    const QuantumState sm(r.smoothed, Normalization::subnormalized);
    EXPECT_LE(purified_distance(rho, sm), eps + 1e-6);
    EXPECT_TRUE(operator_leq(HermitianOperator(r.smoothed), HermitianOperator(CMatrix(std::exp2(r.value.value()) * sigma.matrix())), 1e-6));
  }
}

TEST(SmoothMax, MonotoneAndBelowDmax) {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const int d = 2 + static_cast<int>(s % 3);
    const QuantumState rho = random_state(d, 1000 + s, 1 + static_cast<int>(s % d));
    const PositiveOperator sigma = harness::gen_sigma(d, 1100 + s);
    const double dm = dmax(rho, sigma).value();
    for (auto kind : {BallKind::purified, BallKind::trace}) {
      double prev = dm;
      for (double eps : {0.1, 0.2, 0.3}) {
        const double v = dmax_smooth(rho, sigma, SmoothingBall(kind, eps)).value.value();
        EXPECT_LE(v, prev + 1e-6) << to_string(kind) << " " << eps;
        prev = v;
      }
    }
  }
}

TEST(SmoothMax, UnsupportedMassGivesInfinity) {
  const QuantumState up(diag({1, 0}), Normalization::normalized);
  const PositiveOperator down(diag({0, 1}));
  EXPECT_TRUE(dmax_smooth(up, down, SmoothingBall::purified(0.3)).value.is_infinite());
  EXPECT_TRUE(dmax_smooth(up, down, SmoothingBall::trace(0.3)).value.is_infinite());
  EXPECT_THROW(dmax_smooth(QuantumState(diag({0.3, 0.3}), Normalization::subnormalized), down, SmoothingBall::trace(0.1)),
               DomainError);
  EXPECT_THROW(SmoothingBall::purified(1.0), DomainError);
}

TEST(DualWitness, LemmaEqualityAndWeakDuality) {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const int d = 2 + static_cast<int>(s % 3);
    const QuantumState rho = random_state(d, 1200 + s, 1 + static_cast<int>(s % d));
    const PositiveOperator sigma = harness::gen_sigma(d, 1300 + s);
    for (double eps : {0.1, 0.3}) {
      const auto ball = SmoothingBall::purified(eps);
      const auto r = dmax_smooth(rho, sigma, ball);
      ASSERT_GT(r.witness.size(), 0);
      const HermitianOperator m(r.witness);
      EXPECT_LE((r.witness * sigma.matrix()).trace().real(), 1.0 + 1e-9);
      EXPECT_NEAR(dmax_dual_witness(rho, sigma, ball, m), r.value.value(), 2e-7 + 1e-6);
      // Constant witness 1/tr(sigma).
      const double c = dmax_dual_witness(rho, sigma, ball, HermitianOperator(CMatrix(CMatrix::Identity(d, d) / sigma.trace())));
      EXPECT_LE(c, r.value.value() + 1e-6);
      // Random admissible witnesses never beat the primal.
      random::SplitMix64 rng(random::derive_seed(s, 1));
      const CMatrix g = random::ginibre(d, d, rng);
      CMatrix w = g * g.adjoint();
      w /= (w * sigma.matrix()).trace().real();
      EXPECT_LE(dmax_dual_witness(rho, sigma, ball, HermitianOperator(w)), r.value.value() + 1e-6);
    }
  }
  const QuantumState r = random_state(2, 1);
  EXPECT_THROW(dmax_dual_witness(r, PositiveOperator(diag({1, 1})), SmoothingBall::purified(0.1),
                                 HermitianOperator(diag({2, 2}))),
               DomainError);
}
