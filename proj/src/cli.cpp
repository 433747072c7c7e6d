/*  Copyright 2026 the modcs authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.  */

#include "modcs/cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "modcs/dynamic.hpp"
#include "modcs/errors.hpp"
#include "modcs/experiments.hpp"
#include "modcs/io.hpp"
#include "modcs/operators.hpp"
#include "modcs/rip.hpp"
#include "modcs/solvers.hpp"

namespace modcs {

namespace {

using nlohmann::json;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    save_text(out_path, text);
  }
}

json solver_result_json(const SolverResult& r, bool include_x = true) {
  json j = {{"status", to_string(r.status)},
            {"objective", r.objective},
            {"iterations", r.iterations},
            {"primal_residual", r.primal_residual},
            {"duality_gap", r.duality_gap},
            {"polished", r.polished},
            {"nonunique", r.nonunique}};
  if (include_x) j["x"] = r.x;
  return j;
}

SolverConfig solver_from_json(const json& j) {
  SolverConfig s;
  if (!j.is_object()) return s;
  s.feas_tol = j.value("feas_tol", s.feas_tol);
  s.gap_tol = j.value("gap_tol", s.gap_tol);
  s.max_iters = j.value("max_iters", s.max_iters);
  s.polish = j.value("polish", s.polish);
  return s;
}

std::string condition_lines(const std::vector<ConditionReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    out << r.id << ": " << (r.verdict ? "PASS" : "FAIL");
    if (r.verdict && !r.exact) out << " (lower-bound constants; pass not certified)";
    for (const auto& t : r.terms)
      out << "  [" << t.name << " = " << t.lhs << " vs " << t.threshold << "]";
    out << '\n';
  }
  return out.str();
}

int cmd_solve(const std::string& matrix_path, const std::string& rhs_path,
              const std::string& known_list, const std::string& prior_path,
              double gamma, const std::string& out, const json& solver_cfg) {
  Mat A = read_matrix_csv(matrix_path);
  Vec y = read_vector_csv(rhs_path);
  IndexSet known = parse_index_list(known_list);
  SolverConfig cfg = solver_from_json(solver_cfg);
  SolverResult r;
  if (!prior_path.empty()) {
    Vec prior = read_vector_csv(prior_path);
    r = solve_regmodcs(A, y, known, prior, gamma, cfg);
  } else {
    r = solve_modcs(A, y, known, cfg);
  }
  emit(solver_result_json(r).dump(2), out);
  return r.status == SolveStatus::infeasible ? 3 : 0;
}

int cmd_rip(const std::string& matrix_path, std::optional<std::size_t> delta_S,
            std::vector<std::size_t> theta_pair, std::size_t sampled_trials,
            std::size_t budget, std::uint64_t seed, const std::string& out) {
  Mat A = read_matrix_csv(matrix_path);
  json j;
  Rng rng = Rng::stream(seed, {0x726970ULL});
  if (delta_S) {
    if (sampled_trials > 0) {
      auto [v, exact] = delta_sampled(A, *delta_S, sampled_trials, rng);
      j["delta"] = {{"order", *delta_S}, {"value", v}, {"exact", exact}};
    } else {
      j["delta"] = {{"order", *delta_S},
                    {"value", delta_exact(A, *delta_S, budget)},
                    {"exact", true}};
    }
  }
  if (theta_pair.size() == 2) {
    if (sampled_trials > 0) {
      auto [v, exact] =
          theta_sampled(A, theta_pair[0], theta_pair[1], sampled_trials, rng);
      j["theta"] = {{"orders", theta_pair}, {"value", v}, {"exact", exact}};
    } else {
      j["theta"] = {{"orders", theta_pair},
                    {"value", theta_exact(A, theta_pair[0], theta_pair[1], budget)},
                    {"exact", true}};
    }
  }
  emit(j.dump(2), out);
  return 0;
}

int cmd_conditions(const std::string& matrix_path, bool all_zero, std::size_t n,
                   std::size_t k, std::size_t u, std::optional<std::size_t> s,
                   std::optional<std::size_t> e, std::optional<std::size_t> cs_s,
                   std::size_t budget, const std::string& fmt,
                   const std::string& out) {
  RipTable rip;
  if (all_zero) {
    rip = RipTable::all_zero(n);
  } else {
    if (matrix_path.empty())
      throw parameter_error("conditions: need --matrix or --all-zero");
    rip = RipTable(read_matrix_csv(matrix_path), budget);
  }
  std::vector<ConditionReport> reports;
  if (s && e) {
    reports.push_back(check_exact_recovery_sue(*s, u, *e, rip));
    auto cor = check_exact_recovery_simplified_sue(*s, u, *e, rip);
    reports.insert(reports.end(), cor.begin(), cor.end());
    reports.push_back(check_l0_uniqueness_sue(*s, u, *e, rip));
  } else {
    reports.push_back(check_exact_recovery(k, u, rip));
    auto cor = check_exact_recovery_simplified(k, u, rip);
    reports.insert(reports.end(), cor.begin(), cor.end());
    reports.push_back(check_l0_uniqueness(k, u, rip));
  }
  if (cs_s) {
    auto cs = check_cs_conditions(*cs_s, rip);
    reports.insert(reports.end(), cs.begin(), cs.end());
  }
  if (fmt == "json") {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    emit(arr.dump(2), out);
  } else {
    emit(condition_lines(reports), out);
  }
  return 0;
}

int cmd_bounds(const std::string& curve, double m_over_n, std::size_t n,
               bool just_max, const std::string& out) {
  BoundRule rule;
  if (curve == "modcs") rule = BoundRule::modcs;
  else if (curve == "cs") rule = BoundRule::cs;
  else if (curve == "cs2") rule = BoundRule::cs2;
  else throw parameter_error("bounds: curve must be modcs|cs|cs2");
  std::ostringstream text;
  text.precision(12);
  if (just_max) {
    text << max_sparsity_fraction(m_over_n, rule) << '\n';
  } else {
    text << "s_over_n,rho\n";
    for (auto [x, rho] : bound_curve(rule, m_over_n, n))
      text << x << ',' << rho << '\n';
  }
  emit(text.str(), out);
  return 0;
}

int run_experiment_cmd(const std::string& kind, const std::string& config_path,
                       std::optional<std::uint64_t> seed_override,
                       const std::string& fmt, const std::string& out) {
  json j = load_json(config_path);
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  if (seed_override) cfg.seed = *seed_override;
  ExperimentReport rep;
  if (kind == "mc-prob") rep = exact_recon_probability(cfg);
  else if (kind == "noisy") rep = noisy_nrmse(cfg);
  else rep = regmodcs_sweep(cfg);
  if (fmt == "json")
    emit(rep.to_json().dump(2), out);
  else
    emit(rep.to_csv(), out);
  return 0;
}

LinearOperator dynamic_operator(const std::string& kind, std::size_t rows,
                                std::size_t n, std::uint64_t seed) {
  if (kind == "gaussian") return gaussian_operator(rows, n, seed);
  if (kind == "fourier") {
    std::size_t side = std::size_t(std::llround(std::sqrt(double(n))));
    if (side * side != n)
      throw parameter_error("dynamic: fourier operator needs square n");
    std::size_t mask = std::max<std::size_t>(rows / 2, 1);
    return compose_measurement(partial_fourier_operator(side, mask, seed),
                               idwt2_operator(side));
  }
  throw parameter_error("dynamic: operator must be gaussian|fourier");
}

int cmd_dynamic(const std::string& config_path,
                std::optional<std::uint64_t> seed_override,
                const std::string& fmt, const std::string& out) {
  json j = load_json(config_path);
  SequenceModel model;
  model.n = j.value("n", model.n);
  model.s = j.value("s", model.s);
  model.additions = j.value("additions", model.additions);
  model.removals = j.value("removals", model.removals);
  model.walk_var = j.value("walk_var", model.walk_var);
  model.laplace_scale = j.value("laplace_scale", model.laplace_scale);
  model.t_max = j.value("t_max", model.t_max);
  model.seed = j.value("seed", model.seed);
  model.init_stddev = j.value("init_stddev", model.init_stddev);
  model.compressible = j.value("compressible", model.compressible);
  if (seed_override) model.seed = *seed_override;

  const double m0_frac = j.value("m0_frac", 0.5);
  const double m_frac = j.value("m_frac", 0.16);
  const std::size_t m0 = std::size_t(std::floor(m0_frac * double(model.n) + 0.5));
  const std::size_t m = std::size_t(std::floor(m_frac * double(model.n) + 0.5));
  const std::string op_kind = j.value("operator", std::string("gaussian"));
  const std::string method = j.value("method", std::string("modcs"));
  const double gamma = j.value("gamma", 0.0);
  const double noise_var = j.value("noise_var", 0.0);
  SolverConfig cfg = solver_from_json(j.value("solver", json::object()));

  AlphaPolicy alpha = AlphaPolicy::fixed(0.0);
  if (j.contains("alpha")) {
    if (j["alpha"].is_object())
      alpha = AlphaPolicy::energy(j["alpha"].value("energy", 99.0));
    else
      alpha = AlphaPolicy::fixed(j["alpha"].get<double>());
  }
  IndexSet t0_known;
  if (j.contains("t0_known") && j["t0_known"].is_array())
    t0_known = index_set_from_json(j["t0_known"]);

  LinearOperator A0 = dynamic_operator(op_kind, m0, model.n, model.seed + 1);
  LinearOperator A = dynamic_operator(op_kind, m, model.n, model.seed + 2);

  std::vector<Frame> frames = generate_sequence(model);
  Rng noise_rng = Rng::stream(model.seed, {0x6e6fULL});
  std::vector<Vec> ys = measure_sequence(A0, A, frames, noise_var, &noise_rng);

  DynamicTrace trace;
  if (method == "modcs")
    trace = dynamic_modcs(A0, A, ys, alpha, t0_known, cfg, &frames);
  else if (method == "regmodcs")
    trace = dynamic_regmodcs(A0, A, ys, alpha, gamma, t0_known, cfg, &frames);
  else if (method == "cs")
    trace = simple_cs(A0, A, ys, cfg, &frames);
  else if (method == "cs-diff")
    trace = cs_diff(A0, A, ys, cfg, &frames);
  else
    throw parameter_error("dynamic: method must be modcs|regmodcs|cs|cs-diff");

  if (fmt == "json") {
    json arr = json::array();
    for (const auto& st : trace.stats)
      arr.push_back({{"t", st.t},
                     {"status", to_string(st.status)},
                     {"nrmse", st.nrmse_value},
                     {"support_size", st.support_size},
                     {"additions", st.additions},
                     {"removals", st.removals},
                     {"iterations", st.iterations}});
    emit(arr.dump(2), out);
  } else {
    std::ostringstream text;
    text.precision(17);
    text << "t,nrmse,support_size,additions,removals,status\n";
    for (const auto& st : trace.stats)
      text << st.t << ',' << st.nrmse_value << ',' << st.support_size << ','
           << st.additions << ',' << st.removals << ','
           << to_string(st.status) << '\n';
    emit(text.str(), out);
  }
  return 0;
}

int cmd_gen(const std::string& what, std::size_t rows, std::size_t cols,
            std::size_t s, double stddev, const json& seq_json,
            std::uint64_t seed, const std::string& out_prefix) {
  if (out_prefix.empty()) throw parameter_error("gen: --out prefix is required");
  if (what == "matrix") {
    LinearOperator A = gaussian_operator(rows, cols, seed);
    write_matrix_csv(out_prefix + "_matrix.csv", A.dense());
  } else if (what == "signal") {
    Rng rng = Rng::stream(seed, {0x7369ULL});
    IndexSet support = rng.random_subset(cols, s);
    Vec x(cols, 0.0);
    for (std::size_t i : support) x[i] = stddev * rng.normal();
    write_vector_csv(out_prefix + "_signal.csv", x);
    save_text(out_prefix + "_support.json", index_set_to_json(support).dump());
  } else if (what == "sequence") {
    SequenceModel model;
    model.n = cols;
    model.s = s;
    model.seed = seed;
    if (seq_json.is_object()) {
      model.additions = seq_json.value("additions", model.additions);
      model.removals = seq_json.value("removals", model.removals);
      model.walk_var = seq_json.value("walk_var", model.walk_var);
      model.laplace_scale = seq_json.value("laplace_scale", model.laplace_scale);
      model.t_max = seq_json.value("t_max", model.t_max);
      model.compressible = seq_json.value("compressible", model.compressible);
      model.init_stddev = seq_json.value("init_stddev", model.init_stddev);
    }
    std::vector<Frame> frames = generate_sequence(model);
    Mat X(frames.size(), model.n);
    for (std::size_t t = 0; t < frames.size(); ++t)
      for (std::size_t i = 0; i < model.n; ++i) X(t, i) = frames[t].x[i];
    write_matrix_csv(out_prefix + "_frames.csv", X);
    // Per-frame support-change diagnostic.
    std::ostringstream stats;
    stats << "t,support_size,additions,removals\n";
    for (std::size_t t = 0; t < frames.size(); ++t) {
      auto [adds, rems] =
          t == 0 ? std::pair<std::size_t, std::size_t>{frames[0].support.size(), 0}
                 : support_change(frames[t].support, frames[t - 1].support);
      stats << t << ',' << frames[t].support.size() << ',' << adds << ','
            << rems << '\n';
    }
    save_text(out_prefix + "_support_stats.csv", stats.str());
  } else {
    throw parameter_error("gen: --what must be matrix|signal|sequence");
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Sparse recovery with partially known support"};
  app.require_subcommand(1);

  std::string out_path, fmt = "csv";
  std::optional<std::uint64_t> seed_override;
  app.add_option("--out", out_path, "Write output to this file (default stdout)");
  app.add_option("--format", fmt, "Output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  std::uint64_t seed_opt = 0;
  auto* seed_flag = app.add_option("--seed", seed_opt, "Override config seed");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one instance from CSV files");
  std::string matrix_path, rhs_path, known_list, prior_path, solver_json_path;
  double gamma = 0.0;
  solve->add_option("--matrix", matrix_path, "Matrix CSV")->required();
  solve->add_option("--rhs", rhs_path, "Measurement CSV")->required();
  solve->add_option("--known", known_list, "Known support, e.g. \"0,5,7\"");
  solve->add_option("--prior", prior_path,
                    "Prior values on the known set (enables the quadratic pull)");
  solve->add_option("--gamma", gamma, "Quadratic pull weight");
  solve->add_option("--solver-config", solver_json_path, "Solver config JSON");

  // rip
  auto* rip = app.add_subcommand("rip", "Restricted isometry constants");
  std::string rip_matrix;
  std::size_t rip_delta = 0, rip_budget = 1000000, rip_sampled = 0;
  bool rip_has_delta = false;
  std::vector<std::size_t> rip_theta;
  rip->add_option("--matrix", rip_matrix, "Matrix CSV")->required();
  auto* dopt = rip->add_option("--delta", rip_delta, "Order S");
  rip->add_option("--theta", rip_theta, "Pair S1 S2")->expected(2);
  rip->add_option("--sampled", rip_sampled, "Sampled lower bound, this many draws");
  rip->add_option("--budget", rip_budget, "Enumeration budget");

  // conditions
  auto* cond = app.add_subcommand("conditions", "Sufficient-condition checkers");
  std::string cond_matrix;
  bool cond_zero = false;
  std::size_t cond_n = 32, cond_k = 0, cond_u = 0, cond_budget = 1000000;
  std::optional<std::size_t> cond_s, cond_e, cond_cs_s;
  cond->add_option("--matrix", cond_matrix, "Matrix CSV");
  cond->add_flag("--all-zero", cond_zero, "Use an all-zero constants table");
  cond->add_option("--n", cond_n, "Dimension for --all-zero");
  cond->add_option("--k", cond_k, "Known-set size");
  cond->add_option("--u", cond_u, "Unknown-part size");
  cond->add_option("--s", cond_s, "Support size (s,u,e parameterization)");
  cond->add_option("--e", cond_e, "Known-set error size");
  cond->add_option("--cs-s", cond_cs_s, "Also check plain recovery at this s");
  cond->add_option("--budget", cond_budget, "Enumeration budget");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "High-probability bound curves");
  std::string bounds_curve = "modcs";
  double bounds_mn = 0.3;
  std::size_t bounds_n = 1000;
  bool bounds_max = false;
  bounds->add_option("--curve", bounds_curve, "modcs|cs|cs2")->required();
  bounds->add_option("--m-over-n", bounds_mn, "Measurement fraction")->required();
  bounds->add_option("--n", bounds_n, "Grid size");
  bounds->add_flag("--max", bounds_max, "Print the largest admissible s/n only");

  // experiments
  std::string config_path;
  auto* mcprob = app.add_subcommand("mc-prob", "Recovery-probability table");
  mcprob->add_option("--config", config_path, "Config JSON")->required();
  auto* noisy = app.add_subcommand("noisy", "Noise-robustness table");
  noisy->add_option("--config", config_path, "Config JSON")->required();
  auto* regsweep = app.add_subcommand("regsweep", "Regularized-solver sweep");
  regsweep->add_option("--config", config_path, "Config JSON")->required();
  auto* dynamic = app.add_subcommand("dynamic", "Sequence reconstruction run");
  dynamic->add_option("--config", config_path, "Config JSON")->required();

  // gen
  auto* gen = app.add_subcommand("gen", "Emit synthetic data");
  std::string gen_what = "matrix", gen_seq_json_path;
  std::size_t gen_rows = 32, gen_cols = 64, gen_s = 8;
  double gen_stddev = 10.0;
  gen->add_option("--what", gen_what, "matrix|signal|sequence")->required();
  gen->add_option("--rows", gen_rows, "Matrix rows");
  gen->add_option("--cols", gen_cols, "Columns / signal length");
  gen->add_option("--s", gen_s, "Support size");
  gen->add_option("--stddev", gen_stddev, "On-support standard deviation");
  gen->add_option("--model", gen_seq_json_path, "Sequence model JSON");

  // Global flags (--out, --format, --seed) may appear after the subcommand.
  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->fallthrough();

  std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 wants reversed
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*seed_flag) seed_override = seed_opt;

  try {
    if (*solve) {
      json scfg = solver_json_path.empty() ? json::object()
                                           : load_json(solver_json_path);
      return cmd_solve(matrix_path, rhs_path, known_list, prior_path, gamma,
                       out_path, scfg);
    }
    if (*rip) {
      rip_has_delta = dopt->count() > 0;
      return cmd_rip(rip_matrix,
                     rip_has_delta ? std::optional<std::size_t>(rip_delta)
                                   : std::nullopt,
                     rip_theta, rip_sampled, rip_budget,
                     seed_override.value_or(0), out_path);
    }
    if (*cond)
      return cmd_conditions(cond_matrix, cond_zero, cond_n, cond_k, cond_u,
                            cond_s, cond_e, cond_cs_s, cond_budget, fmt,
                            out_path);
    if (*bounds)
      return cmd_bounds(bounds_curve, bounds_mn, bounds_n, bounds_max, out_path);
    if (*mcprob)
      return run_experiment_cmd("mc-prob", config_path, seed_override, fmt,
                                out_path);
    if (*noisy)
      return run_experiment_cmd("noisy", config_path, seed_override, fmt,
                                out_path);
    if (*regsweep)
      return run_experiment_cmd("regsweep", config_path, seed_override, fmt,
                                out_path);
    if (*dynamic) return cmd_dynamic(config_path, seed_override, fmt, out_path);
    if (*gen) {
      json seq = gen_seq_json_path.empty() ? json() : load_json(gen_seq_json_path);
      return cmd_gen(gen_what, gen_rows, gen_cols, gen_s, gen_stddev, seq,
                     seed_override.value_or(0), out_path);
    }
  } catch (const parameter_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const budget_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace modcs
