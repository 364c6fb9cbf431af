// Command-line front end: compute divergences, run the verification battery,
// and build smoothing certificates.
//
// Exit codes: 0 pass, 1 check failure, 2 usage or input error, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oneshot/oneshot.hpp"

using namespace oneshot;

namespace {

enum Exit { pass = 0, check_failure = 1, usage = 2, numerical = 3 };

std::string value_text(const DivergenceValue& v) {
  if (v.is_infinite()) return "inf";
  std::ostringstream o;
  o << std::setprecision(12) << v.value();
  return o.str();
}

void emit(const io::Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(out, text);
  }
}

io::Json check_list(const std::vector<CertificateCheck>& checks) {
  io::Json a = io::Json::array();
  for (const auto& c : checks) {
    a.push_back({{"name", c.name},
                 {"lhs", std::isfinite(c.lhs) ? io::Json(c.lhs) : io::Json(nullptr)},
                 {"rhs", std::isfinite(c.rhs) ? io::Json(c.rhs) : io::Json(nullptr)},
                 {"tolerance", c.tolerance},
                 {"holds", c.holds()}});
  }
  return a;
}

io::Json joint_to_json(const JointSmoothingResult& r) {
  auto lam = [](const DivergenceValue& v) { return v.is_finite() ? io::Json(v.value()) : io::Json("inf"); };
  return {{"method", "joint"},
          {"smoothedState", io::state_to_json(r.smoothed_joint_state)},
          {"marginalA", io::state_to_json(r.marginal_a)},
          {"marginalB", io::state_to_json(r.marginal_b)},
          {"lambdaA", lam(r.lambda_a)},
          {"lambdaB", lam(r.lambda_b)},
          {"delta", r.delta},
          {"radius", r.radius},
          {"fidelity", r.fidelity},
          {"distance", r.distance},
          {"iterations", r.iterations},
          {"checks", check_list(r.checks)},
          {"allHold", r.all_hold()}};
}

struct ComputeArgs {
  std::string divergence, rho, sigma, ball = "purified";
  double eps = 0.1, alpha = 2.0;
};

int run_compute(const ComputeArgs& a, const CLI::App& cmd) {
  const QuantumState rho = io::state_from_json(io::read_json_file(a.rho));
  const PositiveOperator sigma(io::matrix_from_json(io::read_json_file(a.sigma)));
  const auto& d = a.divergence;
  auto need = [&](const char* opt) {
    if (cmd.count(opt) == 0) throw CLI::ValidationError(std::string(opt) + " is required for " + d);
  };
  DivergenceValue v;
  if (d == "dmax") {
    v = dmax(rho, sigma);
  } else if (d == "renyi") {
    need("--alpha");
    v = renyi(rho, sigma, a.alpha);
  } else if (d == "relative-entropy") {
    v = rel_entropy(rho, sigma);
  } else if (d == "dh") {
    need("--eps");
    v = dh(rho, sigma, a.eps);
  } else if (d == "ds") {
    need("--eps");
    v = ds(rho, sigma, a.eps);
  } else {  // dmax-smooth
    need("--eps");
    const SmoothingBall ball = a.ball == "trace" ? SmoothingBall::trace(a.eps) : SmoothingBall::purified(a.eps);
    v = dmax_smooth(rho, sigma, ball).value;
  }
  std::cout << value_text(v) << "\n";
  return pass;
}

struct VerifyArgs {
  std::vector<std::string> suites;
  int trials = 50;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  std::string out, csv, config;
  bool no_runtime = false;
};

int run_verify(const VerifyArgs& a, const CLI::App& cmd) {
  harness::BatteryConfig cfg;
  if (!a.config.empty()) cfg = harness::config_from_json(io::read_json_file(a.config));
  if (cmd.count("--suite")) cfg.suites = harness::expand_suites(a.suites);
  if (cmd.count("--trials")) cfg.trials = a.trials;
  if (cmd.count("--seed")) cfg.seed = a.seed;
  if (cmd.count("--tol")) cfg.tolerance = a.tol;
  cfg.validate();
  const harness::BatteryReport report = harness::battery(cfg);
  emit(harness::report_to_json(report, !a.no_runtime), a.out);
  if (!a.csv.empty()) io::write_text_file(a.csv, harness::report_to_csv(report));
  std::cerr << (report.passed() ? "PASS" : "FAIL") << ": " << report.failures() << " failed check(s) in "
            << report.cells.size() << " cell(s)\n";
  return report.passed() ? pass : check_failure;
}

struct SmoothArgs {
  std::string method, rho, sigma, sigma_a, sigma_b, projector, witness, witness_a, witness_b, out;
  std::string mode = "theorem";
  double eps = 0.1, eps2 = 0.1, alpha = 2.0, eta = default_eta, delta = 0.1;
  std::vector<int> dims;
};

/// The dual-optimal witness of the purified smoothing program, as a fallback M.
HermitianOperator default_witness(const QuantumState& rho, const PositiveOperator& sigma, double radius) {
  const SmoothMaxResult r = dmax_smooth(rho, sigma, SmoothingBall::purified(radius));
  if (r.witness.size() == 0) throw DomainError("smooth: no finite witness exists for this pair; pass --witness");
  return HermitianOperator(r.witness);
}

int run_smooth(const SmoothArgs& a, const CLI::App& cmd) {
  auto need = [&](const char* opt) {
    if (cmd.count(opt) == 0) throw CLI::ValidationError(std::string(opt) + " is required for --method " + a.method);
  };
  need("--rho");
  const QuantumState rho = io::state_from_json(io::read_json_file(a.rho));
  if (a.method == "gentle") {
    need("--projector");
    const HermitianOperator p = io::hermitian_from_json(io::read_json_file(a.projector));
    const GentleProjection g = gentle_projection(rho, p);
    SmoothingCertificate c;
    c.method = "gentle";
    c.smoothed_state = g.state;
    c.projector = p;
    c.distance = g.distance;
    c.claimed_bound = DivergenceValue::infinity();
    c.checks.push_back({"|P(rho, rho~) - sqrt(tr P rho)|", std::abs(purified_distance(rho, g.state) - g.distance), 0.0, 1e-9});
    emit(certificate_to_json(c), a.out);
    return c.all_hold() ? pass : check_failure;
  }
  if (a.method == "joint") {
    need("--sigma-a");
    need("--sigma-b");
    const PositiveOperator sa(io::matrix_from_json(io::read_json_file(a.sigma_a)));
    const PositiveOperator sb(io::matrix_from_json(io::read_json_file(a.sigma_b)));
    if (cmd.count("--witness-a") || cmd.count("--witness-b")) {
      need("--witness-a");
      need("--witness-b");
      const auto resp = joint_smoother_response(rho, sa, sb, a.eps, a.eps2,
                                                io::hermitian_from_json(io::read_json_file(a.witness_a)),
                                                io::hermitian_from_json(io::read_json_file(a.witness_b)), a.eta);
      emit(certificate_to_json(resp.certificate), a.out);
      return resp.certificate.all_hold() ? pass : check_failure;
    }
    const auto mode = a.mode == "corollary" ? JointMode::corollary : JointMode::theorem;
    const auto r = joint_smoother_feasibility(rho, sa, sb, a.eps, a.eps2, a.eta, mode, a.delta);
    emit(joint_to_json(r), a.out);
    return r.all_hold() ? pass : check_failure;
  }
  need("--sigma");
  const PositiveOperator sigma(io::matrix_from_json(io::read_json_file(a.sigma)));
  SmoothingCertificate c;
  if (a.method == "renyi") {
    const HermitianOperator m = a.witness.empty() ? default_witness(rho, sigma, a.eps)
                                                  : io::hermitian_from_json(io::read_json_file(a.witness));
    c = renyi_smoother(rho, sigma, a.eps, a.alpha, m);
  } else {  // hypothesis
    const HermitianOperator m = a.witness.empty() ? default_witness(rho, sigma, std::sqrt(a.eps))
                                                  : io::hermitian_from_json(io::read_json_file(a.witness));
    c = hypothesis_smoother(rho, sigma, a.eps, m, a.eta);
  }
  emit(certificate_to_json(c), a.out);
  return c.all_hold() ? pass : check_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-shot quantum divergences: evaluation, smoothing and verification"};
  app.require_subcommand(1);

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Evaluate a divergence in bits");
  compute->add_option("divergence", ca.divergence, "dmax | dmax-smooth | renyi | relative-entropy | dh | ds")
      ->required()
      ->check(CLI::IsMember({"dmax", "dmax-smooth", "renyi", "relative-entropy", "dh", "ds"}));
  compute->add_option("--rho", ca.rho, "State JSON file")->required();
  compute->add_option("--sigma", ca.sigma, "Positive operator JSON file")->required();
  compute->add_option("--eps", ca.eps, "Smoothing or error parameter");
  compute->add_option("--alpha", ca.alpha, "Renyi order");
  compute->add_option("--ball", ca.ball, "Smoothing ball")->check(CLI::IsMember({"purified", "trace"}));

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run the randomized inequality battery");
  verify->add_option("--suite", va.suites, "eq9 | dataproc | thm1 | thm2 | thm3 | corollary | all (repeatable)")
      ->check(CLI::IsMember({"eq9", "dataproc", "thm1", "thm2", "thm3", "corollary", "all"}));
  verify->add_option("--trials", va.trials, "Trials per cell");
  verify->add_option("--seed", va.seed, "Base seed");
  verify->add_option("--tol", va.tol, "Slack tolerance in bits");
  verify->add_option("--out", va.out, "JSON report path (stdout if omitted)");
  verify->add_option("--csv", va.csv, "CSV report path");
  verify->add_option("--config", va.config, "Battery config JSON (flags override it)");
  verify->add_flag("--no-runtime", va.no_runtime, "Omit the runtime field from the JSON report");

  SmoothArgs sa;
  auto* smooth = app.add_subcommand("smooth", "Build a smoothing certificate (JSON)");
  smooth->add_option("--method", sa.method, "gentle | renyi | hypothesis | joint")
      ->required()
      ->check(CLI::IsMember({"gentle", "renyi", "hypothesis", "joint"}));
  smooth->add_option("--rho", sa.rho, "State JSON file (bipartite for joint)");
  smooth->add_option("--sigma", sa.sigma, "Positive operator JSON file");
  smooth->add_option("--sigma-a", sa.sigma_a, "sigma_A for joint");
  smooth->add_option("--sigma-b", sa.sigma_b, "sigma_B for joint");
  smooth->add_option("--projector", sa.projector, "Projector JSON file for gentle");
  smooth->add_option("--witness", sa.witness, "Witness M JSON file (default: dual-optimal M)");
  smooth->add_option("--witness-a", sa.witness_a, "Effect M_A for the joint response certificate");
  smooth->add_option("--witness-b", sa.witness_b, "Effect M_B for the joint response certificate");
  smooth->add_option("--eps", sa.eps, "Smoothing parameter");
  smooth->add_option("--eps2", sa.eps2, "Second smoothing parameter (joint)");
  smooth->add_option("--alpha", sa.alpha, "Renyi order");
  smooth->add_option("--eta", sa.eta, "Threshold slack in bits");
  smooth->add_option("--mode", sa.mode, "theorem | corollary (joint)")->check(CLI::IsMember({"theorem", "corollary"}));
  smooth->add_option("--delta", sa.delta, "Corollary correction parameter");
  smooth->add_option("--out", sa.out, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? pass : usage;
  }

  try {
    if (*compute) return run_compute(ca, *compute);
    if (*verify) return run_verify(va, *verify);
    return run_smooth(sa, *smooth);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const DegenerateProjection& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const CertificateViolation& e) {
    std::cerr << "certificate violation: " << e.what() << "\n";
    return check_failure;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    if (!e.dump().empty()) {
      io::write_text_file("oneshot_failure_dump.json", e.dump());
      std::cerr << "problem written to oneshot_failure_dump.json\n";
    }
    return numerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return numerical;
  }
}
