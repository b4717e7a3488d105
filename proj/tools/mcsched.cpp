// mcsched: command-line front end for the mixed-criticality toolkit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mcs/analysis.hpp"
#include "mcs/csv.hpp"
#include "mcs/errors.hpp"
#include "mcs/experiments.hpp"
#include "mcs/generator.hpp"
#include "mcs/probability.hpp"
#include "mcs/simulator.hpp"
#include "mcs/taskset_io.hpp"
#include "mcs/verify.hpp"

namespace fs = std::filesystem;
using namespace mcs;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct Global {
  std::uint64_t seed = 1;
  std::string out;
  std::size_t trials = 0;  // 0 = experiment default
  int jobs = 0;
};

fs::path out_dir(const Global& g) {
  if (!g.out.empty()) return g.out;
  if (const char* env = std::getenv("MCS_OUT_DIR"); env && *env) return env;
  return "results";
}

RunOptions run_options(const Global& g, std::size_t default_trials) {
  RunOptions r;
  r.seed = g.seed;
  r.trials = g.trials > 0 ? g.trials : default_trials;
  r.exec = g.jobs == 1 ? Exec::Serial : Exec::Parallel;
  r.threads = g.jobs > 1 ? g.jobs : 0;
  return r;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw ParseError(0, "cannot write " + path.string());
  return f;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

Band parse_band(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.size() != 2) throw ParseError(0, "band must look like lo:hi");
  return {parse_rational(parts[0]), parse_rational(parts[1])};
}

DemandModel parse_demand(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.empty()) throw ParseError(0, "empty demand model");
  if (parts[0] == "table4" && parts.size() == 1) return DemandModel::fraction_grid(ExecDistribution::table4());
  if (parts[0] == "constant" && parts.size() == 2) return DemandModel::constant(std::stod(parts[1]));
  if (parts[0] == "uniform" && parts.size() == 3) return DemandModel::uniform(std::stod(parts[1]), std::stod(parts[2]));
  throw ParseError(0, "demand model must be table4, constant:F or uniform:LO:HI");
}

// ---- analyze ----

struct AnalyzeArgs {
  std::string taskset;
  std::string alpha, beta;
  double w = -1.0;
  bool sweep = false;
  double u_sum = 1.5;
};

int cmd_analyze(const AnalyzeArgs& a) {
  if (a.sweep) {
    std::cout << "U_L,w,beta_opt,SU\n";
    for (const auto& c : run_figure2(a.u_sum)) {
      Utilizations u;
      u.lc = Rational(static_cast<long long>(std::llround(c.u_lc * 10)), 10);
      u.hc = Rational(static_cast<long long>(std::llround(a.u_sum * 10)), 10) - u.lc;
      std::cout << fmt_double(c.u_lc, 2) << ',' << fmt_double(c.w, 2) << ',' << fmt_double(c.beta_opt, 9) << ','
                << fmt_double(total_system_utilization(u, c.w, c.beta_opt), 9) << '\n';
    }
    return 0;
  }
  if (a.taskset.empty()) throw ParseError(0, "analyze needs --taskset or --sweep");
  const TaskSet ts = read_taskset_file(a.taskset);
  const Utilizations u = utilizations(ts);
  std::cout << "tasks=" << ts.size() << " U_L=" << fmt_double(to_double(u.lc)) << " U_H=" << fmt_double(to_double(u.hc))
            << '\n';
  if (auto m = threshold_m(u)) std::cout << "M=" << to_string(*m) << " (" << fmt_double(to_double(*m)) << ")\n";

  std::optional<Rational> alpha, beta;
  if (!a.alpha.empty()) alpha = parse_rational(a.alpha);
  if (!a.beta.empty()) beta = parse_rational(a.beta);
  if (!beta && !alpha) {
    bool have_estimates = !ts.hc_indices().empty();
    for (auto i : ts.hc_indices()) have_estimates = have_estimates && ts[i].lc_estimate.has_value();
    if (have_estimates) beta = beta_from_lc_estimates(ts);
    else if (!ts.lc_indices().empty()) alpha = alpha_star_from_per_task(ts);
  }
  if (beta && !alpha) alpha = max_alpha_given_beta(u, *beta);
  if (alpha && !beta) beta = max_beta_given_alpha(u, *alpha);
  if (!alpha || !beta) throw ParseError(0, "cannot infer alpha* and beta*; pass --alpha-star/--beta-star");

  const SchedVerdict v = theorem1_test(u, *alpha, *beta);
  std::cout << "alpha*=" << to_string(*alpha) << " beta*=" << to_string(*beta) << '\n';
  std::cout << "schedulable=" << (v.schedulable ? "yes" : "no");
  if (v.schedulable) std::cout << " x_lo=" << to_string(v.x_lo) << " x_hi=" << to_string(v.x_hi);
  std::cout << '\n';
  const ServiceUtilization su = su_levels(ts, *alpha, *beta);
  std::cout << "SU_L=" << fmt_double(to_double(su.lc_mode)) << " SU_H=" << fmt_double(to_double(su.hc_mode)) << '\n';
  if (a.w >= 0.0) {
    const double b = optimal_beta_for_su(u, a.w);
    std::cout << "w=" << fmt_double(a.w, 3) << " beta_opt=" << fmt_double(b, 9)
              << " SU=" << fmt_double(total_system_utilization(u, a.w, b), 9) << '\n';
  }
  return v.schedulable ? 0 : kExitViolation;
}

// ---- simulate ----

struct SimulateArgs {
  std::string taskset, policy = "uvd", x, horizon = "1000", beta, budgets, job_file, demand = "table4", trace;
  bool verify = false;
};

int cmd_simulate(const Global& g, const SimulateArgs& a) {
  const TaskSet ts = read_taskset_file(a.taskset);
  SimConfig cfg;
  cfg.horizon = parse_rational(a.horizon);
  if (a.policy == "uvd") cfg.policy = Policy::EdfUvdMeba;
  else if (a.policy == "vd") cfg.policy = Policy::EdfVdStatic;
  else if (a.policy == "fixed") cfg.policy = Policy::FixedBudget;
  else throw ParseError(0, "policy must be uvd, vd or fixed");

  const Utilizations u = utilizations(ts);
  if (!a.beta.empty()) cfg.beta_star = parse_rational(a.beta);
  else if (cfg.policy == Policy::EdfUvdMeba && !ts.lc_indices().empty())
    cfg.beta_star = max_beta_given_alpha(u, alpha_star_from_per_task(ts));

  if (!a.x.empty()) {
    cfg.x = parse_rational(a.x);
  } else if (cfg.policy == Policy::EdfUvdMeba && !ts.lc_indices().empty()) {
    const auto v = theorem1_test(u, alpha_star_from_per_task(ts), cfg.beta_star);
    if (auto x = v.default_x()) cfg.x = *x;
  }
  for (const auto& kv : split(a.budgets, ',')) {
    auto p = split(kv, '=');
    if (p.size() != 2) throw ParseError(0, "budgets must look like id=value,...");
    cfg.fixed_budgets[std::stoi(p[0])] = parse_rational(p[1]);
  }

  JobSequence jobs;
  if (!a.job_file.empty()) {
    jobs = read_jobs_csv(a.job_file);
  } else {
    Rng rng = make_rng(g.seed, {});
    jobs = gen_job_sequence(ts, cfg.horizon, parse_demand(a.demand), rng);
  }
  const ScheduleTrace tr = simulate(ts, cfg, jobs);
  if (!a.trace.empty()) {
    auto f = open_out(a.trace);
    write_trace_csv(f, tr);
  }
  std::cout << "policy=" << to_string(cfg.policy) << " x=" << to_string(cfg.x) << " beta*=" << to_string(cfg.beta_star)
            << " jobs=" << tr.jobs.size() << " events=" << tr.events.size() << " switches=" << tr.switches.size();
  if (auto t = mode_switch_instant(tr)) std::cout << " t*=" << to_string(*t);
  std::cout << '\n';
  if (!a.verify) return 0;
  const VerifyResult v = verify_mc_schedulable(ts, cfg, tr);
  std::cout << "checked=" << v.checked_jobs << " violations=" << v.violations.size() << '\n';
  for (const auto& viol : v.violations) {
    const auto& rec = tr.jobs[viol.job];
    std::cout << "  task " << rec.job.task << " job " << rec.job.seq << ": " << viol.reason << " ("
              << to_string(viol.received) << " of " << to_string(viol.required) << ")\n";
  }
  return v.schedulable ? 0 : kExitViolation;
}

// ---- gen ----

struct GenArgs {
  std::string band = "0.54:0.55";
  int rc = 3;
  std::size_t count = 1;
  double ph = 0.5;
  bool inflate_lc = false;
};

int cmd_gen(const Global& g, const GenArgs& a) {
  GenParams p;
  p.band = parse_band(a.band);
  p.ratio = a.rc;
  p.hc_probability = a.ph;
  p.inflate_lc = a.inflate_lc;
  const fs::path dir = out_dir(g);
  fs::create_directories(dir);
  for (std::size_t k = 0; k < a.count; ++k) {
    Rng rng = make_rng(g.seed, {k});
    const TaskSet ts = gen_taskset(p, rng);
    char name[32];
    std::snprintf(name, sizeof name, "taskset_%04zu.txt", k);
    write_taskset_file(dir / name, ts);
    std::cout << (dir / name).string() << " U_A=" << fmt_double(to_double(average_utilization(ts)))
              << " max_alpha=" << fmt_double(to_double(max_service_level(ts))) << '\n';
  }
  return 0;
}

// ---- prob ----

struct ProbArgs {
  std::string dist = "table4", n = "1..8", betas = "0.45,0.55,0.65,0.75", model = "both", route = "auto";
  bool cdf_summand = false;
};

int cmd_prob(const Global& g, const ProbArgs& a) {
  const ExecDistribution dist = a.dist == "table4" ? ExecDistribution::table4() : ExecDistribution::load(a.dist);
  int n_lo = 1, n_hi = 1;
  if (auto pos = a.n.find(".."); pos != std::string::npos) {
    n_lo = std::stoi(a.n.substr(0, pos));
    n_hi = std::stoi(a.n.substr(pos + 2));
  } else {
    n_lo = n_hi = std::stoi(a.n);
  }
  if (n_lo < 1 || n_hi < n_lo) throw ParseError(0, "--n must be N or LO..HI with 1 <= LO <= HI");
  ProbOptions opt;
  opt.summand = a.cdf_summand ? Summand::Cdf : Summand::Pmf;
  if (a.route == "serial") opt.route = ProbRoute::EnumerateSerial;
  else if (a.route == "parallel") opt.route = ProbRoute::EnumerateParallel;
  else if (a.route == "convolve") opt.route = ProbRoute::Convolve;
  else if (a.route != "auto") throw ParseError(0, "route must be auto, serial, parallel or convolve");
  const bool s = a.model == "s" || a.model == "both";
  const bool d = a.model == "d" || a.model == "both";
  if (!s && !d) throw ParseError(0, "model must be s, d or both");

  std::ostringstream csv;
  write_csv_preamble(csv, "prob", g.seed, "dist=" + a.dist);
  csv << "n,beta,model,p\n";
  for (const auto& bs : split(a.betas, ',')) {
    const Rational b = parse_rational(bs);
    for (int n = n_lo; n <= n_hi; ++n) {
      if (s) csv << n << ',' << to_string(b) << ",s," << fmt_double(p_noswitch_static(dist, n, b), 12) << '\n';
      if (d) csv << n << ',' << to_string(b) << ",d," << fmt_double(p_noswitch_dynamic(dist, n, b, opt), 12) << '\n';
    }
  }
  if (g.out.empty()) {
    std::cout << csv.str();
  } else {
    auto f = open_out(g.out);
    f << csv.str();
  }
  return 0;
}

// ---- experiment ----

int cmd_experiment(const Global& g, const std::string& name, const std::string& horizon) {
  const fs::path dir = out_dir(g);
  fs::create_directories(dir);
  bool ok = true;
  auto suite = [&](const char* file, std::size_t default_trials, auto fn) {
    SuiteOptions so;
    so.run = run_options(g, default_trials);
    so.horizon = parse_rational(horizon);
    const SuiteReport r = fn(so);
    auto f = open_out(dir / file);
    write_suite_csv(f, so, {r});
    std::cout << r.name << ": trials=" << r.trials << " checks=" << r.checks << " switches=" << r.switches
              << " violations=" << r.violations;
    if (!r.passed()) std::cout << " first=" << r.first_failure;
    std::cout << '\n';
    ok = ok && r.passed();
  };
  const bool all = name == "all";
  bool matched = false;

  if (all || name == "table3_dynamic") {
    matched = true;
    const RunOptions ro = run_options(g, 1000);
    auto cells = run_table3(ro, false);
    auto inflated = run_table3(ro, true);
    cells.insert(cells.end(), inflated.begin(), inflated.end());
    auto f = open_out(dir / "table3_dynamic.csv");
    write_table3_csv(f, ro, cells);
    for (const auto& c : cells)
      std::cout << "RC=" << c.ratio << " band=" << c.band << (c.inflate_lc ? " inflated" : " plain")
                << " mean=" << fmt_double(c.mean, 3) << " sd=" << fmt_double(c.stddev, 3)
                << " reference=" << fmt_double(c.reference, 3) << '\n';
  }
  if (all || name == "figure2") {
    matched = true;
    auto f = open_out(dir / "figure2.csv");
    write_figure2_csv(f, run_figure2(1.5));
  }
  if (all || name == "figure3") {
    matched = true;
    std::vector<Rational> betas{Rational(45, 100), Rational(55, 100), Rational(65, 100), Rational(75, 100)};
    auto f = open_out(dir / "figure3.csv");
    write_figure3_csv(f, run_figure3(ExecDistribution::table4(), 8, betas));
  }
  if (all || name == "figure4") {
    matched = true;
    auto f = open_out(dir / "figure4.csv");
    write_figure4_csv(f, run_figure4(1.3));
  }
  if (all || name == "lemma1_fuzz") {
    matched = true;
    suite("lemma1_fuzz.csv", 10000, run_lemma1_suite);
  }
  if (all || name == "lemma2_fuzz") {
    matched = true;
    suite("lemma2_fuzz.csv", 1000, run_lemma2_suite);
  }
  if (all || name == "mapping_fuzz") {
    matched = true;
    suite("mapping_fuzz.csv", 100, run_mapping_suite);
  }
  if (all || name == "e2e_verify") {
    matched = true;
    suite("e2e_verify.csv", 10000, run_e2e_suite);
  }
  if (!matched) throw ParseError(0, "unknown experiment '" + name + "'");
  std::cout << "wrote " << dir.string() << '\n';
  return ok ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-criticality scheduling toolkit: analysis, simulation and experiments"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output directory (experiment, gen) or file (prob); default $MCS_OUT_DIR or ./results");
  app.add_option("--trials", g.trials, "Trials per cell or suite")->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "Worker threads; 1 runs serially, 0 uses the OpenMP default")
      ->check(CLI::NonNegativeNumber);

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Schedulability test and service levels");
  analyze->add_option("--taskset", aa.taskset, "Task-set file");
  analyze->add_option("--alpha-star", aa.alpha, "HC-mode service level for LC tasks");
  analyze->add_option("--beta-star", aa.beta, "LC-mode budget fraction for HC tasks");
  analyze->add_option("--w", aa.w, "Weight of the LC-mode utilization in SU(w)")->check(CLI::Range(0.0, 1.0));
  analyze->add_flag("--sweep", aa.sweep, "Emit U_L,w,beta_opt,SU over the standard grid");
  analyze->add_option("--u-sum", aa.u_sum, "U_L+U_H for --sweep");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Run one schedule and write its trace");
  sim->add_option("--taskset", sa.taskset, "Task-set file")->required();
  sim->add_option("--policy", sa.policy, "uvd, vd or fixed");
  sim->add_option("--x", sa.x, "Virtual-deadline factor (default: lower end of the admissible range)");
  sim->add_option("--horizon", sa.horizon, "Simulated time");
  sim->add_option("--beta-star", sa.beta, "LC-mode budget fraction (uvd)");
  sim->add_option("--budgets", sa.budgets, "Fixed budgets id=value,... (fixed)");
  sim->add_option("--job-file", sa.job_file, "Job CSV task,release,demand; generated when absent");
  sim->add_option("--demand", sa.demand, "Generated demand model: table4, constant:F, uniform:LO:HI");
  sim->add_option("--trace", sa.trace, "Trace CSV output");
  sim->add_flag("--verify", sa.verify, "Check the trace against the service guarantees");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate task sets into --out");
  gen->add_option("--band", ga.band, "U_A band lo:hi");
  gen->add_option("--rc", ga.rc, "WCET ratio bound")->check(CLI::PositiveNumber);
  gen->add_option("--count", ga.count, "Number of task sets")->check(CLI::PositiveNumber);
  gen->add_option("--ph", ga.ph, "Probability a task is HC")->check(CLI::Range(0.0, 1.0));
  gen->add_flag("--inflate-lc", ga.inflate_lc, "LC tasks also draw C from [C^L, RC*C^L]");

  ProbArgs pa;
  auto* prob = app.add_subcommand("prob", "No-switch probabilities");
  prob->add_option("--dist", pa.dist, "table4 or a file of 's cdf' lines");
  prob->add_option("--n", pa.n, "Task count N or range LO..HI");
  prob->add_option("--beta-star", pa.betas, "Comma-separated budget fractions");
  prob->add_option("--model", pa.model, "s, d or both");
  prob->add_option("--route", pa.route, "auto, serial, parallel or convolve");
  prob->add_flag("--cdf-summand", pa.cdf_summand, "Sum cdf products instead of the joint pmf");

  std::string exp_name, exp_horizon = "1000";
  auto* exp = app.add_subcommand("experiment", "Regenerate a table, figure or property suite as CSV");
  exp->add_option("name", exp_name,
                  "table3_dynamic, figure2, figure3, figure4, lemma1_fuzz, lemma2_fuzz, mapping_fuzz, e2e_verify, all")
      ->required();
  exp->add_option("--horizon", exp_horizon, "Simulated time per trial in property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*analyze) return cmd_analyze(aa);
    if (*sim) return cmd_simulate(g, sa);
    if (*gen) return cmd_gen(g, ga);
    if (*prob) return cmd_prob(g, pa);
    if (*exp) return cmd_experiment(g, exp_name, exp_horizon);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
