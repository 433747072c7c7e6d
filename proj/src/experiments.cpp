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

#include "modcs/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "modcs/errors.hpp"
#include "modcs/operators.hpp"
#include "modcs/rng.hpp"

namespace modcs {

namespace {

std::size_t round_half_up(double v) {
  return static_cast<std::size_t>(std::floor(v + 0.5));
}

unsigned thread_count(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs fn(trial) for trial = 0..trials-1 across a small pool. Each trial
/// seeds its own counter-based stream, so scheduling cannot change results.
void parallel_trials(std::size_t trials, unsigned threads,
                     const std::function<void(std::size_t)>& fn) {
  threads = std::min<unsigned>(thread_count(threads),
                               std::max<std::size_t>(trials, 1));
  if (threads <= 1) {
    for (std::size_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t t = next.fetch_add(1);
        if (t >= trials) return;
        fn(t);
      }
    });
  }
  for (auto& th : pool) th.join();
}

struct TrialDraw {
  IndexSet support;
  SupportModel model;
  Vec x;
  Vec y;
};

// One Monte Carlo draw: support, values, measurements, prior-set model.
TrialDraw draw_trial(const Mat& A, std::size_t n, std::size_t s, std::size_t u,
                     std::size_t e, double signal_stddev, double noise_var,
                     Rng& rng) {
  TrialDraw d;
  d.support = rng.random_subset(n, s);
  d.x.assign(n, 0.0);
  for (std::size_t i : d.support) d.x[i] = signal_stddev * rng.normal();
  d.y = gemv(A, d.x);
  if (noise_var > 0.0) {
    double sd = std::sqrt(noise_var);
    for (double& v : d.y) v += sd * rng.normal();
  }
  d.model = make_support_model(n, d.support, u, e, rng);
  return d;
}

bool usable(const SolverResult& r) {
  return r.status != SolveStatus::infeasible && r.primal_residual <= 1e-6;
}

struct Accumulator {
  std::vector<char> exact_mod, exact_cs;
  std::vector<double> err_mod, err_cs, en;   // squared norms per trial
  std::vector<char> ok_mod, ok_cs;
  explicit Accumulator(std::size_t trials)
      : exact_mod(trials, 0), exact_cs(trials, 0), err_mod(trials, 0.0),
        err_cs(trials, 0.0), en(trials, 0.0), ok_mod(trials, 0),
        ok_cs(trials, 0) {}
};

double sq_err(const Vec& truth, const Vec& est) {
  double s = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    double d = truth[i] - est[i];
    s += d * d;
  }
  return s;
}

void finalize_cell(const Accumulator& acc, CellResult& cell) {
  const std::size_t T = acc.en.size();
  std::size_t nm = 0, ncs = 0, hit_m = 0, hit_c = 0;
  double se_m = 0.0, sx_m = 0.0, se_c = 0.0, sx_c = 0.0;
  std::vector<double> ratios_m, ratios_c;
  for (std::size_t t = 0; t < T; ++t) {
    if (acc.ok_mod[t]) {
      ++nm;
      hit_m += acc.exact_mod[t];
      se_m += acc.err_mod[t];
      sx_m += acc.en[t];
      ratios_m.push_back(std::sqrt(acc.err_mod[t] / acc.en[t]));
    }
    if (acc.ok_cs[t]) {
      ++ncs;
      hit_c += acc.exact_cs[t];
      se_c += acc.err_cs[t];
      sx_c += acc.en[t];
      ratios_c.push_back(std::sqrt(acc.err_cs[t] / acc.en[t]));
    }
  }
  auto sd_over_sqrt = [](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= double(v.size() - 1);
    return std::sqrt(var / double(v.size()));
  };
  cell.excluded = T - nm;
  cell.excluded_cs = T - ncs;
  if (nm > 0) {
    cell.prob = double(hit_m) / double(nm);
    cell.prob_se = std::sqrt(cell.prob * (1.0 - cell.prob) / double(nm));
    cell.nrmse = std::sqrt(se_m / sx_m);
    cell.nrmse_se = sd_over_sqrt(ratios_m);
  }
  if (ncs > 0) {
    cell.prob_cs = double(hit_c) / double(ncs);
    cell.prob_cs_se = std::sqrt(cell.prob_cs * (1.0 - cell.prob_cs) / double(ncs));
    cell.nrmse_cs = std::sqrt(se_c / sx_c);
    cell.nrmse_cs_se = sd_over_sqrt(ratios_c);
  }
}

nlohmann::json cell_to_json(const CellResult& c) {
  return {{"m", c.m},
          {"u", c.u},
          {"e", c.e},
          {"m_frac", c.m_frac},
          {"u_frac", c.u_frac},
          {"e_frac", c.e_frac},
          {"noise_var", c.noise_var},
          {"gamma", c.gamma},
          {"trials", c.trials},
          {"prob", c.prob},
          {"prob_se", c.prob_se},
          {"prob_cs", c.prob_cs},
          {"prob_cs_se", c.prob_cs_se},
          {"nrmse", c.nrmse},
          {"nrmse_se", c.nrmse_se},
          {"nrmse_cs", c.nrmse_cs},
          {"nrmse_cs_se", c.nrmse_cs_se},
          {"excluded", c.excluded},
          {"excluded_cs", c.excluded_cs}};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.n = j.value("n", c.n);
  c.s = j.value("s", c.s);
  if (j.contains("m_fracs")) c.m_fracs = j["m_fracs"].get<std::vector<double>>();
  if (j.contains("u_fracs")) c.u_fracs = j["u_fracs"].get<std::vector<double>>();
  if (j.contains("e_fracs")) c.e_fracs = j["e_fracs"].get<std::vector<double>>();
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.signal_stddev = j.value("signal_stddev", c.signal_stddev);
  if (j.contains("noise_vars"))
    c.noise_vars = j["noise_vars"].get<std::vector<double>>();
  if (j.contains("gammas")) c.gammas = j["gammas"].get<std::vector<double>>();
  c.threads = j.value("threads", c.threads);
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    c.solver.feas_tol = s.value("feas_tol", c.solver.feas_tol);
    c.solver.gap_tol = s.value("gap_tol", c.solver.gap_tol);
    c.solver.max_iters = s.value("max_iters", c.solver.max_iters);
    c.solver.polish = s.value("polish", c.solver.polish);
  }
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"n", n},
          {"s", s},
          {"m_fracs", m_fracs},
          {"u_fracs", u_fracs},
          {"e_fracs", e_fracs},
          {"trials", trials},
          {"seed", seed},
          {"signal_stddev", signal_stddev},
          {"noise_vars", noise_vars},
          {"gammas", gammas},
          {"threads", threads},
          {"solver",
           {{"feas_tol", solver.feas_tol},
            {"gap_tol", solver.gap_tol},
            {"max_iters", solver.max_iters},
            {"polish", solver.polish}}}};
}

nlohmann::json ExperimentReport::to_json(bool include_wall_clock) const {
  nlohmann::json cells_j = nlohmann::json::array();
  for (const auto& c : cells) cells_j.push_back(cell_to_json(c));
  nlohmann::json j = {{"kind", kind},
                      {"config", nlohmann::json::parse(config_json)},
                      {"cells", cells_j}};
  if (include_wall_clock) j["wall_seconds"] = wall_seconds;
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "m,u,e,noise_var,gamma,trials,prob,prob_se,prob_cs,prob_cs_se,"
         "nrmse,nrmse_se,nrmse_cs,nrmse_cs_se,excluded,excluded_cs\n";
  for (const auto& c : cells) {
    out << c.m << ',' << c.u << ',' << c.e << ',' << c.noise_var << ','
        << c.gamma << ',' << c.trials << ',' << c.prob << ',' << c.prob_se
        << ',' << c.prob_cs << ',' << c.prob_cs_se << ',' << c.nrmse << ','
        << c.nrmse_se << ',' << c.nrmse_cs << ',' << c.nrmse_cs_se << ','
        << c.excluded << ',' << c.excluded_cs << '\n';
  }
  return out.str();
}

namespace {

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw parameter_error("experiment: trials must be >= 1");
  if (cfg.s == 0 || cfg.s > cfg.n)
    throw parameter_error("experiment: need 0 < s <= n");
  for (double f : cfg.m_fracs)
    if (f <= 0.0 || f > 1.0)
      throw parameter_error("experiment: m fractions must be in (0,1]");
  for (double f : cfg.u_fracs)
    if (f < 0.0 || f > 1.0)
      throw parameter_error("experiment: u fractions must be in [0,1]");
  for (double f : cfg.e_fracs)
    if (f < 0.0) throw parameter_error("experiment: e fractions must be >= 0");
}

ExperimentReport run_probability_like(const ExperimentConfig& cfg,
                                      const std::vector<double>& noise_vars,
                                      const std::string& kind) {
  validate(cfg);
  auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.kind = kind;
  rep.config_json = cfg.to_json().dump();

  for (std::size_t mi = 0; mi < cfg.m_fracs.size(); ++mi) {
    const std::size_t m = round_half_up(cfg.m_fracs[mi] * double(cfg.n));
    Rng mat_rng = Rng::stream(cfg.seed, {0xA0ULL, mi});
    LinearOperator A =
        gaussian_operator(m, cfg.n, mat_rng.next_u64(), /*normalize=*/true);
    const Mat& D = A.dense();

    for (std::size_t ui = 0; ui < cfg.u_fracs.size(); ++ui) {
      for (std::size_t ei = 0; ei < cfg.e_fracs.size(); ++ei) {
        const std::size_t u = round_half_up(cfg.u_fracs[ui] * double(cfg.s));
        const std::size_t e = round_half_up(cfg.e_fracs[ei] * double(cfg.s));
        if (u > cfg.s || e > cfg.n - cfg.s) continue;
        for (std::size_t ni = 0; ni < std::max<std::size_t>(noise_vars.size(), 1);
             ++ni) {
          const double nv = noise_vars.empty() ? 0.0 : noise_vars[ni];
          Accumulator acc(cfg.trials);
          parallel_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
            Rng rng = Rng::stream(cfg.seed, {mi, ui, ei, ni, t});
            TrialDraw d = draw_trial(D, cfg.n, cfg.s, u, e, cfg.signal_stddev,
                                     nv, rng);
            SolverResult rm = solve_modcs(D, d.y, d.model.known, cfg.solver);
            SolverResult rc = solve_bp(D, d.y, cfg.solver);
            acc.en[t] = nrm2_sq(d.x);
            if (usable(rm)) {
              acc.ok_mod[t] = 1;
              acc.exact_mod[t] = is_exact(d.x, rm.x) ? 1 : 0;
              acc.err_mod[t] = sq_err(d.x, rm.x);
            }
            if (usable(rc)) {
              acc.ok_cs[t] = 1;
              acc.exact_cs[t] = is_exact(d.x, rc.x) ? 1 : 0;
              acc.err_cs[t] = sq_err(d.x, rc.x);
            }
          });
          CellResult cell;
          cell.m = m;
          cell.u = u;
          cell.e = e;
          cell.m_frac = cfg.m_fracs[mi];
          cell.u_frac = cfg.u_fracs[ui];
          cell.e_frac = cfg.e_fracs[ei];
          cell.noise_var = nv;
          cell.trials = cfg.trials;
          finalize_cell(acc, cell);
          rep.cells.push_back(cell);
        }
      }
    }
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace

ExperimentReport exact_recon_probability(const ExperimentConfig& cfg) {
  return run_probability_like(cfg, {}, "exact_recon_probability");
}

ExperimentReport noisy_nrmse(const ExperimentConfig& cfg) {
  if (cfg.noise_vars.empty())
    throw parameter_error("noisy_nrmse: noise_vars must not be empty");
  return run_probability_like(cfg, cfg.noise_vars, "noisy_nrmse");
}

ExperimentReport regmodcs_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.gammas.empty())
    throw parameter_error("regmodcs_sweep: gammas must not be empty");
  auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.kind = "regmodcs_sweep";
  rep.config_json = cfg.to_json().dump();

  for (std::size_t mi = 0; mi < cfg.m_fracs.size(); ++mi) {
    const std::size_t m = round_half_up(cfg.m_fracs[mi] * double(cfg.n));
    Rng mat_rng = Rng::stream(cfg.seed, {0xB0ULL, mi});
    LinearOperator A = gaussian_operator(m, cfg.n, mat_rng.next_u64(), true);
    const Mat& D = A.dense();
    const std::size_t u = round_half_up(cfg.u_fracs.front() * double(cfg.s));
    const std::size_t e = round_half_up(cfg.e_fracs.front() * double(cfg.s));

    for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
      const double gamma = cfg.gammas[gi];
      Accumulator acc(cfg.trials);
      parallel_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
        // gamma does not enter the stream ids: every gamma sees the same draws.
        Rng rng = Rng::stream(cfg.seed, {0xB1ULL, mi, t});
        IndexSet support = rng.random_subset(cfg.n, cfg.s);
        SupportModel model = make_support_model(cfg.n, support, u, e, rng);
        // Signed prior: +-1 on the carried support, +-0.25 on the changed
        // entries; signal values cluster tightly around it.
        Vec prior_full(cfg.n, 0.0);
        IndexSet carried = set_difference(support, model.missed);
        for (std::size_t i : carried)
          prior_full[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
        for (std::size_t i : model.missed)
          prior_full[i] = rng.uniform() < 0.5 ? -0.25 : 0.25;
        for (std::size_t i : model.spurious)
          prior_full[i] = rng.uniform() < 0.5 ? -0.25 : 0.25;
        Vec x(cfg.n, 0.0);
        for (std::size_t i : support) x[i] = prior_full[i] + 0.1 * rng.normal();
        Vec y = gemv(D, x);

        Vec prior_known(model.known.size());
        for (std::size_t j = 0; j < model.known.size(); ++j)
          prior_known[j] = prior_full[model.known[j]];
        SolverResult r =
            gamma == 0.0
                ? solve_modcs(D, y, model.known, cfg.solver)
                : solve_regmodcs(D, y, model.known, prior_known, gamma, cfg.solver);
        acc.en[t] = nrm2_sq(x);
        if (usable(r)) {
          acc.ok_mod[t] = 1;
          acc.exact_mod[t] = is_exact(x, r.x) ? 1 : 0;
          acc.err_mod[t] = sq_err(x, r.x);
        }
        acc.ok_cs[t] = 0;
      });
      CellResult cell;
      cell.m = m;
      cell.u = u;
      cell.e = e;
      cell.m_frac = cfg.m_fracs[mi];
      cell.u_frac = cfg.u_fracs.front();
      cell.e_frac = cfg.e_fracs.front();
      cell.gamma = gamma;
      cell.trials = cfg.trials;
      finalize_cell(acc, cell);
      cell.excluded_cs = 0;
      rep.cells.push_back(cell);
    }
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace modcs
