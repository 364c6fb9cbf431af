#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oneshot/oneshot.hpp"
#include "oracles.hpp"

using namespace oneshot;
using namespace oneshot::harness;

namespace {

CMatrix diag(const std::vector<double>& v) {
  RVector d(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) d(static_cast<Eigen::Index>(i)) = v[i];
  return d.cast<Complex>().asDiagonal();
}

QuantumState random_state(int d, std::uint64_t seed, int rank = 0) {
  return gen_state({InstanceKind::ginibre, d, 0, 0, rank ? rank : d, seed});
}

BatteryConfig small_config(std::vector<std::string> suites, int trials = 2) {
  BatteryConfig c;
  c.suites = std::move(suites);
  c.trials = trials;
  c.seed = 5;
  c.dims = {2, 3};
  c.bipartite = {{2, 2}};
  c.eps_grid = {0.25};
  return c;
}

}  // namespace

TEST(Channels, IdentityAndPinching) {
  const QuantumState rho = random_state(3, 1);
  const Channel id = identity_channel(3);
  EXPECT_LE(oneshot::detail::max_abs(id.apply(rho).matrix() - rho.matrix()), 1e-14);
  const Channel pin = pinching_channel(CMatrix::Identity(2, 2));
  const CMatrix out = pin.apply(random_state(2, 2).matrix());
  EXPECT_LE(std::abs(out(0, 1)), 1e-15);
  EXPECT_THROW(Channel(CMatrix::Ones(2, 2), 2, 1), DomainError);
}

TEST(Channels, RandomChannelsMapStatesToStates) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const int d = 2 + static_cast<int>(s % 3);
    const Channel ch = s % 2 ? gen_pinching(d, s) : gen_channel(d, 2, s);
    const QuantumState rho = random_state(d, 100 + s, 1);
    const CMatrix out = ch.apply(rho.matrix());
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
    EXPECT_GE(oneshot::detail::eigvalsh(out).minCoeff(), -1e-12);
  }
  const Channel narrow = gen_channel(4, 2, 3, 2);
  EXPECT_EQ(narrow.dim_out(), 2);
  EXPECT_NEAR(narrow.apply(random_state(4, 4)).trace(), 1.0, 1e-12);
  EXPECT_THROW(gen_channel(4, 1, 1, 2), DomainError);
}

TEST(Verify, Eq9Examples) {
  const QuantumState r = random_state(3, 8);
  const auto sl = verify_eq9(r, r, 0.1, 0.1);
  EXPECT_GE(sl[0], -1e-8);
  EXPECT_NEAR(sl[0], -std::log2(0.9), 1e-8);  // D_s = 0, D_h = -log(1 - eps)
  EXPECT_GE(sl[1], 0.0);
  const QuantumState rho(diag({0.5, 0.5}), Normalization::normalized);
  const PositiveOperator sigma(diag({0.25, 0.75}));
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  const auto c = verify_eq9(rho, sigma, 0.3, 0.2);
  EXPECT_NEAR(c[0], oracle::dh(p, q, 0.3) - oracle::ds(p, q, 0.3), 1e-9);
  EXPECT_NEAR(c[1], oracle::ds(p, q, 0.5) + std::log2(5.0) - oracle::dh(p, q, 0.3), 1e-9);
  EXPECT_THROW(verify_eq9(r, r, 0.5, 0.5), DomainError);
}

TEST(Verify, DataProcessingIdentityAndCommutingPinching) {
  const QuantumState rho = random_state(3, 9);
  const PositiveOperator sigma = gen_sigma(3, 10);
  for (double s : verify_data_processing(rho, sigma, identity_channel(3), 0.2, 2.0)) EXPECT_NEAR(s, 0.0, 1e-6);
  const QuantumState dr(diag({0.5, 0.3, 0.2}), Normalization::normalized);
  const PositiveOperator ds_(diag({0.2, 0.2, 0.6}));
  for (double s : verify_data_processing(dr, ds_, pinching_channel(CMatrix::Identity(3, 3)), 0.2, 2.0)) EXPECT_NEAR(s, 0.0, 1e-6);
}

TEST(Verify, TheoremsOnIdenticalStates) {
  const QuantumState r = random_state(2, 12);
  const auto t1 = verify_theorem1(r, r, 0.1, 2.0);
  EXPECT_GE(t1.slack_purified, 0.0);
  EXPECT_GE(t1.slack_trace, 0.0);
  const auto t2 = verify_theorem2(r, r, 0.25, 0.25);
  EXPECT_GE(t2.slack_upper, -1e-6);
  EXPECT_TRUE(t2.lower.holds);
}

TEST(Verify, Theorem1CommutingPairMatchesClassicalArithmetic) {
  const std::vector<double> p{0.7, 0.2, 0.1}, q{0.3, 0.3, 0.4};
  const QuantumState rho(diag(p), Normalization::normalized);
  const PositiveOperator sigma(diag(q));
  const auto t = verify_theorem1(rho, sigma, 0.1, 2.0);
  const double rhs = oracle::renyi(p, q, 2.0) + std::log2(100.0) + std::log2(1.0 / 0.99);
  const double v = dmax_smooth(rho, sigma, SmoothingBall::purified(0.1)).value.value();
  EXPECT_NEAR(t.slack_purified, rhs - v, 1e-9);
  EXPECT_LE(v, oracle::dmax(p, q) + 1e-9);
  for (const auto& c : t.certificate.checks) EXPECT_TRUE(c.holds()) << c.name;
}

TEST(Verify, Theorem3ProductAndRecheck) {
  const QuantumState sa(diag({0.6, 0.4}), Normalization::normalized);
  const QuantumState sb(diag({0.3, 0.7}), Normalization::normalized);
  const QuantumState rho(kron(sa.matrix(), sb.matrix()), Normalization::normalized);
  const auto t = verify_theorem3(rho, sa, sb, 0.2, 0.2);
  for (const auto& c : t.recheck) EXPECT_TRUE(c.holds()) << c.name;
  const auto cor = verify_corollary(rho, sa, sb, 0.1, 0.3, 0.1);
  for (const auto& c : cor.recheck) EXPECT_TRUE(c.holds()) << c.name;
}

TEST(Battery, ConfigValidation) {
  EXPECT_THROW(battery(BatteryConfig{}), DomainError);
  EXPECT_THROW(config_from_json(io::Json::parse(R"({"suites": []})")), DomainError);
  EXPECT_THROW(config_from_json(io::Json::parse(R"({"suites": ["nope"]})")), DomainError);
  EXPECT_THROW(config_from_json(io::Json::parse(R"({"suites": ["eq9"], "trials": "x"})")), DomainError);
  EXPECT_THROW(config_from_json(io::Json::parse("[1]")), DomainError);
  const auto c = config_from_json(io::Json::parse(R"({"suites": ["all"], "trials": 3, "seed": 9, "bipartite": [[2, 3]]})"));
  EXPECT_EQ(c.suites.size(), known_suites().size());
  EXPECT_EQ(c.trials, 3);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.bipartite[0], std::make_pair(2, 3));
}

TEST(Battery, CountsAddUpAndReportsAreDeterministic) {
  const auto cfg = small_config({"eq9", "thm3"}, 3);
  const auto a = battery(cfg);
  const auto b = battery(cfg);
  EXPECT_TRUE(a.passed());
  for (const auto& cell : a.cells)
    for (const auto& k : cell.checks) EXPECT_EQ(k.pass + k.warn + k.fail, cell.trials) << cell.cell << " " << k.name;
  EXPECT_EQ(report_to_json(a, false).dump(), report_to_json(b, false).dump());
  EXPECT_EQ(report_to_csv(a), report_to_csv(b));
  EXPECT_TRUE(report_to_json(a).contains("runtimeSeconds"));
  EXPECT_FALSE(report_to_json(a, false).contains("runtimeSeconds"));
  EXPECT_EQ(report_to_csv(a).rfind("suite,cell,check,trials,pass,warn,fail,worst_slack,worst_trial_seed\n", 0), 0u);
}

TEST(Battery, CorruptedToleranceReportsReplayableFailures) {
  auto cfg = small_config({"thm2"}, 3);
  cfg.dims = {2, 3, 4, 6};
  cfg.tolerance = 1e-15;
  const auto r = battery(cfg);
  ASSERT_FALSE(r.passed());
  int seen = 0;
  for (const auto& cell : r.cells)
    for (const auto& k : cell.checks)
      for (const auto& f : k.failures) {
        const io::Json& rep = f["replay"];
        ASSERT_TRUE(rep.contains("rho") && rep.contains("sigmaSeed") && rep.contains("trialSeed"));
        const auto& js = rep["rho"];
        const InstanceSpec spec{instance_kind_from_string(js["kind"]), js["dim"], 0, 0, js["rank"], js["seed"]};
        // The recorded spec regenerates exactly the trial's state.
        const InstanceSpec trial = harness::detail::trial_spec(spec.dim, rep["trialSeed"], rep["trial"]);
        EXPECT_EQ(gen_state_matrix(spec), gen_state_matrix(trial));
        EXPECT_EQ(rep["sigmaSeed"].get<std::uint64_t>(), random::derive_seed(rep["trialSeed"].get<std::uint64_t>(), 1));
        ++seen;
      }
  EXPECT_GT(seen, 0);
}

TEST(Battery, EverySuiteRuns) {
  for (const auto& s : known_suites()) {
    const auto r = battery(small_config({s}, 1));
    EXPECT_TRUE(r.passed()) << s << "\n" << report_to_json(r, false).dump(1);
    EXPECT_FALSE(r.cells.empty());
  }
}
