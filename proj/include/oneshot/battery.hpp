#pragma once

// The randomized inequality battery: suites of cells, each cell a fixed
// parameter setting run over seeded random trials. Reports are JSON and CSV
// and are byte-identical for identical configs apart from the runtime field.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oneshot/channels.hpp"
#include "oneshot/instances.hpp"
#include "oneshot/log.hpp"
#include "oneshot/matrix_json.hpp"
#include "oneshot/random.hpp"
#include "oneshot/verify.hpp"

namespace oneshot::harness {

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s{"eq9", "dataproc", "thm1", "thm2", "thm3", "corollary"};
  return s;
}

struct BatteryConfig {
  std::vector<std::string> suites;
  int trials = 50;  // per cell
  std::uint64_t seed = 1;
  double tolerance = 1e-6;
  std::vector<int> dims{2, 3, 4, 6};
  std::vector<std::pair<int, int>> bipartite{{2, 2}, {2, 3}};
  std::vector<double> eps_grid{0.1, 0.25, 0.4};

  void validate() const {
    if (suites.empty()) throw DomainError("battery: the suite list is empty");
    for (const auto& s : suites) {
      bool ok = false;
      for (const auto& k : known_suites()) ok = ok || s == k;
      if (!ok) throw DomainError("battery: unknown suite " + s);
    }
    if (trials < 1) throw DomainError("battery: trials must be >= 1");
    if (!(tolerance >= 0.0)) throw DomainError("battery: tolerance must be >= 0");
    if (dims.empty() || bipartite.empty() || eps_grid.empty()) throw DomainError("battery: empty grid");
    for (int d : dims)
      if (d < 1 || d > 64) throw DomainError("battery: dims must lie in [1, 64]");
    for (auto [a, b] : bipartite)
      if (a < 1 || b < 1 || a * b > 64) throw DomainError("battery: bad bipartite cell");
    for (double e : eps_grid)
      if (!(e > 0.0 && e < 0.75)) throw DomainError("battery: eps grid values must lie in (0, 0.75)");
  }
};

/// Expands "all" into every suite.
inline std::vector<std::string> expand_suites(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& s : in) {
    if (s == "all") {
      for (const auto& k : known_suites()) out.push_back(k);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

/// Reads {"suites": [...], "trials", "seed", "tolerance", "dims", "bipartite": [[a,b],...], "eps"}.
inline BatteryConfig config_from_json(const io::Json& j) {
  if (!j.is_object()) throw DomainError("battery config: expected a JSON object");
  BatteryConfig c;
  try {
    if (j.contains("suites")) c.suites = expand_suites(j.at("suites").get<std::vector<std::string>>());
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
    if (j.contains("dims")) c.dims = j.at("dims").get<std::vector<int>>();
    if (j.contains("bipartite")) c.bipartite = j.at("bipartite").get<std::vector<std::pair<int, int>>>();
    if (j.contains("eps")) c.eps_grid = j.at("eps").get<std::vector<double>>();
  } catch (const io::Json::exception& e) {
    throw DomainError(std::string("battery config: ") + e.what());
  }
  c.validate();
  return c;
}

struct CheckStats {
  std::string name;
  int pass = 0;
  int warn = 0;  // slack in [-tolerance, 0)
  int fail = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  io::Json worst_replay;
  std::vector<io::Json> failures;  // first few, with replay data
};

struct CellReport {
  std::string suite;
  std::string cell;
  int trials = 0;
  std::vector<CheckStats> checks;
};

struct BatteryReport {
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  int trials = 0;
  std::vector<CellReport> cells;
  double runtime_seconds = 0.0;

  int failures() const {
    int n = 0;
    for (const auto& c : cells)
      for (const auto& k : c.checks) n += k.fail;
    return n;
  }
  bool passed() const { return failures() == 0; }
};

namespace detail {

inline io::Json slack_json(double s) {
  if (std::isnan(s)) return "nan";
  if (std::isinf(s)) return s > 0 ? "inf" : "-inf";
  return s;
}

inline std::string slack_text(double s) {
  if (std::isnan(s)) return "nan";
  if (std::isinf(s)) return s > 0 ? "inf" : "-inf";
  std::ostringstream o;
  o.precision(17);
  o << s;
  return o.str();
}

inline std::string fmt(double x) {
  std::ostringstream o;
  o << x;
  return o.str();
}

using Slacks = std::vector<std::pair<std::string, double>>;

struct Cell {
  std::string name;
  std::vector<std::string> checks;
  // Runs trial t with seed s; fills slacks and the replay record.
  std::function<void(std::uint64_t, int, Slacks&, io::Json&)> run;
};

inline void add_certificate(Slacks& out, const std::string& prefix, const std::vector<CertificateCheck>& checks) {
  for (const auto& c : checks) out.push_back({prefix + c.name, c.slack()});
}

inline std::vector<std::string> certificate_names(const std::string& prefix, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& n : names) out.push_back(prefix + n);
  return out;
}

inline const std::vector<std::string>& recheck_names() {
  static const std::vector<std::string> n{"projector idempotent", "smoothed state matches (1-P) rho (1-P)/(1 - tr P rho)",
                                          "|distance - P(rho, rho~)|", "P(rho, rho~) <= radius",
                                          "log tr(M rho~) <= claimed bound"};
  return n;
}

/// The state for trial t: the kind rotates, the rank is drawn from the seed.
inline InstanceSpec trial_spec(int d, std::uint64_t seed, int t) {
  static const InstanceKind kinds[] = {InstanceKind::haar_mixed, InstanceKind::ginibre, InstanceKind::classical_diagonal,
                                       InstanceKind::near_degenerate};
  random::SplitMix64 rng(seed ^ 0x5bd1e995ULL);
  const int rank = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(d));
  return {kinds[t % 4], d, 0, 0, rank, seed};
}

inline InstanceSpec bipartite_spec(int da, int db, std::uint64_t seed, int t) {
  const int d = da * db;
  if (t % 3 == 2) return {InstanceKind::pure_bipartite, d, da, db, 1, seed};
  random::SplitMix64 rng(seed ^ 0x5bd1e995ULL);
  const int rank = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(d));
  return {t % 3 == 0 ? InstanceKind::haar_mixed : InstanceKind::ginibre, d, da, db, rank, seed};
}

inline io::Json replay(const InstanceSpec& rho, std::uint64_t sigma_seed, std::uint64_t aux_seed = 0) {
  io::Json j{{"rho", spec_to_json(rho)}, {"sigmaSeed", sigma_seed}};
  if (aux_seed != 0) j["auxSeed"] = aux_seed;
  return j;
}

/// Random effect 0 <= M <= 1 in a Haar basis.
inline HermitianOperator random_effect(int d, std::uint64_t seed) {
  random::SplitMix64 rng(seed);
  const CMatrix u = random::haar_unitary(d, rng);
  RVector ev(d);
  for (int i = 0; i < d; ++i) ev(i) = rng.uniform();
  return HermitianOperator(u * ev.cast<Complex>().asDiagonal() * u.adjoint());
}

inline std::vector<Cell> suite_cells(const std::string& suite, const BatteryConfig& cfg) {
  std::vector<Cell> cells;
  if (suite == "eq9") {
    for (int d : cfg.dims)
      for (auto [eps, delta] : {std::pair{0.1, 0.1}, std::pair{0.3, 0.2}}) {
        cells.push_back({"d=" + std::to_string(d) + " eps=" + fmt(eps) + " delta=" + fmt(delta),
                         {"D_s <= D_h", "D_h <= D_s(eps+delta) + log(1/delta)"},
                         [d, eps, delta](std::uint64_t s, int t, Slacks& out, io::Json& rep) {
                           const InstanceSpec spec = trial_spec(d, s, t);
                           const std::uint64_t ss = random::derive_seed(s, 1);
                           rep = replay(spec, ss);
                           const auto sl = verify_eq9(gen_state(spec), gen_sigma(d, ss), eps, delta);
                           out = {{"D_s <= D_h", sl[0]}, {"D_h <= D_s(eps+delta) + log(1/delta)", sl[1]}};
                         }});
      }
  } else if (suite == "dataproc") {
    for (int d : cfg.dims)
      for (double eps : cfg.eps_grid) {
        const std::vector<std::string> names{"D_h", "renyi(1.5)", "renyi(2)", "renyi(5)", "D_max smooth (purified)"};
        cells.push_back({"d=" + std::to_string(d) + " eps=" + fmt(eps), names,
                         [d, eps, names](std::uint64_t s, int t, Slacks& out, io::Json& rep) {
                           const InstanceSpec spec = trial_spec(d, s, t);
                           const std::uint64_t ss = random::derive_seed(s, 1);
                           const std::uint64_t cs = random::derive_seed(s, 2);
                           rep = replay(spec, ss, cs);
                           rep["channel"] = t % 2 ? "pinching" : "stinespring";
                           const Channel ch = t % 2 ? gen_pinching(d, cs) : gen_channel(d, 2, cs);
                           const QuantumState rho = gen_state(spec);
                           const PositiveOperator sigma = gen_sigma(d, ss);
                           const auto sl = verify_data_processing(rho, sigma, ch, eps, 2.0);
                           const QuantumState er = ch.apply(rho);
                           const PositiveOperator es = ch.apply(sigma);
                           out = {{names[0], sl[0]},
                                  {names[1], harness::detail::diff(renyi(rho, sigma, 1.5), renyi(er, es, 1.5))},
                                  {names[2], sl[1]},
                                  {names[3], harness::detail::diff(renyi(rho, sigma, 5.0), renyi(er, es, 5.0))},
                                  {names[4], sl[2]}};
                         }});
      }
  } else if (suite == "thm1") {
    std::vector<std::string> names{"purified ball", "trace ball"};
    for (const auto& n : certificate_names("certificate: ", {"removed weight tr(Pi rho) <= eps^2",
                                                              "tr(M rho~)(1 - tr Pi rho) <= threshold",
                                                              "purified distance <= eps", "log tr(M rho~) <= claimed bound"}))
      names.push_back(n);
    for (const auto& n : certificate_names("recheck: ", recheck_names())) names.push_back(n);
    for (int d : cfg.dims)
      for (double alpha : {1.5, 2.0, 5.0})
        for (double eps : {0.1, 0.3}) {
          cells.push_back({"d=" + std::to_string(d) + " alpha=" + fmt(alpha) + " eps=" + fmt(eps), names,
                           [d, alpha, eps](std::uint64_t s, int t, Slacks& out, io::Json& rep) {
                             const InstanceSpec spec = trial_spec(d, s, t);
                             const std::uint64_t ss = random::derive_seed(s, 1);
                             rep = replay(spec, ss);
                             CMatrix r = gen_state_matrix(spec);
                             // Odd trials use a subnormalized center (trace in [0.7, 1)).
                             if (t % 2) {
                               random::SplitMix64 rng(random::derive_seed(s, 3));
                               const double f = 0.7 + 0.3 * rng.uniform();
                               r *= f;
                               rep["traceFactor"] = f;
                             }
                             const QuantumState rho = QuantumState::from_matrix(r);
                             const auto res = verify_theorem1(rho, gen_sigma(d, ss), eps, alpha);
                             out = {{"purified ball", res.slack_purified}};
                             if (!std::isnan(res.slack_trace)) out.push_back({"trace ball", res.slack_trace});
                             add_certificate(out, "certificate: ", res.certificate.checks);
                             add_certificate(out, "recheck: ", res.recheck);
                           }});
        }
  } else if (suite == "thm2") {
    std::vector<std::string> names{"D_h^{1-eps} >= D_max^{sqrt(eps)} - log 1/(1-eps)",
                                   "D_max^{sqrt(eps)} - log 1/(1-eps) >= D_h^{1-eps-delta} - log 4/delta^2",
                                   "fidelity chain"};
    for (const auto& n : certificate_names("certificate: ", {"removed weight tr(Pi rho) <= eps",
                                                              "tr(M rho~) <= 2^(K+eta)/(1-eps)",
                                                              "purified distance <= sqrt(eps)"}))
      names.push_back(n);
    for (const auto& n : certificate_names("recheck: ", recheck_names())) names.push_back(n);
    const double delta = 0.25;
    for (int d : cfg.dims)
      for (double eps : cfg.eps_grid) {
        cells.push_back({"d=" + std::to_string(d) + " eps=" + fmt(eps) + " delta=" + fmt(delta), names,
                         [d, eps, delta, names](std::uint64_t s, int t, Slacks& out, io::Json& rep) {
                           const InstanceSpec spec = trial_spec(d, s, t);
                           const std::uint64_t ss = random::derive_seed(s, 1);
                           rep = replay(spec, ss);
                           const auto res = verify_theorem2(gen_state(spec), gen_sigma(d, ss), eps, delta);
                           double chain = std::numeric_limits<double>::infinity();
                           for (std::size_t i = 0; i + 1 < res.lower.chain.size(); ++i)
                             chain = std::min(chain, res.lower.chain[i + 1] - res.lower.chain[i]);
                           out = {{names[0], res.slack_upper}, {names[1], res.lower.slack}, {names[2], chain}};
                           add_certificate(out, "certificate: ", res.certificate.checks);
                           add_certificate(out, "recheck: ", res.recheck);
                         }});
      }
  } else if (suite == "thm3" || suite == "corollary") {
    const bool cor = suite == "corollary";
    std::vector<std::string> names{"fidelity >= 1 - radius^2"};
    for (const auto& n : {"purified distance <= radius", "|tr rho~ - 1|", "-lambda_min(rho~)",
                          "rho~_A <= 2^lambda_A sigma_A (-lambda_min)", "rho~_B <= 2^lambda_B sigma_B (-lambda_min)"})
      names.push_back(std::string("result: ") + n);
    for (const auto& n : {"|tr_B rho~ - marginal_A|", "|tr_A rho~ - marginal_B|", "P(rho_AB, rho~) <= radius", "rho~ >= 0",
                          "operator_leq(rho~_A, 2^lambda_A sigma_A)", "operator_leq(rho~_B, 2^lambda_B sigma_B)"})
      names.push_back(std::string("recheck: ") + n);
    if (!cor) {
      for (const auto& n : {"1 - eps <= tr(Pi_A rho_A)", "1 - eps' <= tr(Pi_B rho_B)",
                            "tr((1 - Pi_A (x) Pi_B) rho_AB) <= eps + eps'", "purified distance <= sqrt(eps + eps')",
                            "tr(M_A rho~_A) <= 2^lambda_A tr(M_A sigma_A)", "tr(M_B rho~_B) <= 2^lambda_B tr(M_B sigma_B)"})
        names.push_back(std::string("response: ") + n);
    }
    const double delta = 0.1;
    for (auto [da, db] : cfg.bipartite)
      for (auto [e1, e2] : {std::pair{0.2, 0.2}, std::pair{0.1, 0.3}}) {
        std::string cname = std::to_string(da) + "x" + std::to_string(db) + " eps=" + fmt(e1) + " eps'=" + fmt(e2);
        if (cor) cname += " delta=" + fmt(delta);
        cells.push_back({cname, names, [da, db, e1, e2, cor, delta](std::uint64_t s, int t, Slacks& out, io::Json& rep) {
                           const InstanceSpec spec = bipartite_spec(da, db, s, t);
                           const std::uint64_t sa = random::derive_seed(s, 1), sb = random::derive_seed(s, 2);
                           rep = replay(spec, sa, sb);
                           const QuantumState rho = gen_state(spec);
                           const PositiveOperator sig_a = gen_sigma(da, sa), sig_b = gen_sigma(db, sb);
                           const auto res = verify_theorem3(rho, sig_a, sig_b, e1, e2,
                                                            cor ? JointMode::corollary : JointMode::theorem, delta);
                           out = {{"fidelity >= 1 - radius^2",
                                   res.result.fidelity - (1.0 - res.result.radius * res.result.radius)}};
                           add_certificate(out, "result: ", res.result.checks);
                           add_certificate(out, "recheck: ", res.recheck);
                           if (!cor) {
                             const std::uint64_t ms = random::derive_seed(s, 3);
                             const auto resp = joint_smoother_response(rho, sig_a, sig_b, e1, e2, random_effect(da, ms),
                                                                       random_effect(db, ms + 1));
                             add_certificate(out, "response: ", resp.certificate.checks);
                           }
                         }});
      }
  }
  return cells;
}

}  // namespace detail

/// Runs every configured suite. Failures carry the replay record of the instance.
inline BatteryReport battery(const BatteryConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  BatteryReport report;
  report.seed = config.seed;
  report.tolerance = config.tolerance;
  report.trials = config.trials;
  for (std::size_t si = 0; si < config.suites.size(); ++si) {
    const std::string& suite = config.suites[si];
    std::uint64_t suite_id = 0;
    for (std::size_t k = 0; k < known_suites().size(); ++k)
      if (known_suites()[k] == suite) suite_id = k + 1;
    const auto cells = detail::suite_cells(suite, config);
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      const auto& cell = cells[ci];
      CellReport cr;
      cr.suite = suite;
      cr.cell = cell.name;
      cr.trials = config.trials;
      std::map<std::string, std::size_t> index;
      int errors = 0;
      for (const auto& n : cell.checks) {
        index[n] = cr.checks.size();
        cr.checks.push_back({n});
      }
      for (int t = 0; t < config.trials; ++t) {
        const std::uint64_t seed = random::derive_seed(config.seed, suite_id, ci, static_cast<std::uint64_t>(t));
        detail::Slacks slacks;
        io::Json rep;
        std::string error;
        try {
          cell.run(seed, t, slacks, rep);
        } catch (const std::exception& e) {
          error = e.what();
          log::error(suite + " / " + cell.name + " trial " + std::to_string(t) + ": " + error);
        }
        rep["suite"] = suite;
        rep["cell"] = cell.name;
        rep["trial"] = t;
        rep["trialSeed"] = seed;
        if (error.empty()) {
          // A check first seen now was not applicable earlier, except on trials that threw.
          for (const auto& sl : slacks) {
            if (index.count(sl.first)) continue;
            index[sl.first] = cr.checks.size();
            CheckStats st{sl.first};
            st.fail = errors;
            st.pass = t - errors;
            cr.checks.push_back(std::move(st));
          }
        } else {
          ++errors;
        }
        std::vector<double> value(cr.checks.size(), std::numeric_limits<double>::infinity());
        if (!error.empty()) {
          std::fill(value.begin(), value.end(), -std::numeric_limits<double>::infinity());
        } else {
          for (const auto& [name, s] : slacks) {
            const std::size_t k = index.at(name);
            value[k] = std::min(value[k], std::isnan(s) ? -std::numeric_limits<double>::infinity() : s);
          }
        }
        for (std::size_t k = 0; k < cr.checks.size(); ++k) {
          CheckStats& st = cr.checks[k];
          const double s = value[k];
          if (s >= 0.0) {
            ++st.pass;
          } else if (s >= -config.tolerance) {
            ++st.warn;
            log::info("warning: " + suite + " / " + cell.name + " / " + st.name + " slack " + detail::slack_text(s));
          } else {
            ++st.fail;
            if (st.failures.size() < 5) {
              io::Json f{{"slack", detail::slack_json(s)}, {"replay", rep}};
              if (!error.empty()) f["error"] = error;
              st.failures.push_back(std::move(f));
            }
          }
          if (s < st.worst_slack || st.worst_replay.is_null()) {
            if (s < st.worst_slack) st.worst_slack = s;
            st.worst_replay = rep;
          }
        }
      }
      log::info("cell " + suite + " / " + cell.name + " done");
      report.cells.push_back(std::move(cr));
    }
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline io::Json report_to_json(const BatteryReport& r, bool include_runtime = true) {
  io::Json cells = io::Json::array();
  for (const auto& c : r.cells) {
    io::Json checks = io::Json::array();
    for (const auto& k : c.checks) {
      checks.push_back({{"name", k.name},
                        {"pass", k.pass},
                        {"warn", k.warn},
                        {"fail", k.fail},
                        {"worstSlack", detail::slack_json(k.worst_slack)},
                        {"worstReplay", k.worst_replay},
                        {"failures", k.failures}});
    }
    cells.push_back({{"suite", c.suite}, {"cell", c.cell}, {"trials", c.trials}, {"checks", std::move(checks)}});
  }
  io::Json j{{"seed", r.seed},
             {"tolerance", r.tolerance},
             {"trialsPerCell", r.trials},
             {"failures", r.failures()},
             {"passed", r.passed()},
             {"cells", std::move(cells)}};
  if (include_runtime) j["runtimeSeconds"] = r.runtime_seconds;
  return j;
}

inline std::string report_to_csv(const BatteryReport& r) {
  std::ostringstream o;
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  o << "suite,cell,check,trials,pass,warn,fail,worst_slack,worst_trial_seed\n";
  for (const auto& c : r.cells)
    for (const auto& k : c.checks) {
      o << c.suite << ',' << quote(c.cell) << ',' << quote(k.name) << ',' << c.trials << ',' << k.pass << ',' << k.warn
        << ',' << k.fail << ',' << detail::slack_text(k.worst_slack) << ','
        << (k.worst_replay.contains("trialSeed") ? k.worst_replay["trialSeed"].dump() : std::string()) << '\n';
    }
  return o.str();
}

}  // namespace oneshot::harness
