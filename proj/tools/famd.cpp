// Command-line front end: impute, cv, score, simulate, bench, analyze, replay.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "famd/bench.hpp"
#include "famd/csv.hpp"
#include "famd/error.hpp"
#include "famd/famd_core.hpp"
#include "famd/imputer.hpp"
#include "famd/metrics.hpp"
#include "famd/model_selection.hpp"
#include "famd/preprocess.hpp"
#include "famd/simgen.hpp"

#ifndef FAMD_VERSION
#define FAMD_VERSION "dev"
#endif

namespace {

using namespace famd;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitPartial = 3;

std::string default_na_token() {
  const char* env = std::getenv("FAMD_NA_TOKEN");
  return env != nullptr && *env != '\0' ? env : "NA";
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Line-oriented key=value record of a run. The arg.N entries hold the exact
// command line so `famd replay` can reproduce the outputs.
class Manifest {
 public:
  Manifest(std::string subcommand, const std::vector<std::string>& argv) : start_(Clock::now()) {
    add("subcommand", std::move(subcommand));
    add("version", FAMD_VERSION);
    for (std::size_t i = 0; i < argv.size(); ++i) add("arg." + std::to_string(i), argv[i]);
  }
  void add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }
  void add(const std::string& key, double value) { add(key, format_double(value)); }
  void add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

  void write(const std::string& path) const {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
    const std::chrono::duration<double> elapsed = Clock::now() - start_;
    out << "duration_seconds=" << format_double(elapsed.count()) << '\n';
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string manifest_path(const std::string& explicit_path, const std::string& primary_output) {
  if (!explicit_path.empty()) return explicit_path;
  return primary_output.empty() ? std::string() : primary_output + ".manifest";
}

void echo_impute_config(Manifest& m, const ImputeConfig& cfg) {
  m.add("ncp", cfg.ncp);
  m.add("regularized", cfg.regularized);
  m.add("epsilon", cfg.epsilon);
  m.add("max_iter", cfg.max_iter);
}

struct AlgorithmFlags {
  bool plain = false;
  double epsilon = 1e-6;
  std::size_t max_iter = 1000;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--plain", plain, "Use the non-regularized algorithm");
    cmd->add_option("--eps", epsilon, "Convergence threshold on the squared change")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  }
  ImputeConfig config(std::size_t ncp) const {
    ImputeConfig cfg;
    cfg.ncp = ncp;
    cfg.regularized = !plain;
    cfg.epsilon = epsilon;
    cfg.max_iter = max_iter;
    return cfg;
  }
};

struct CvFlags {
  std::size_t grid_max = 0;
  std::size_t folds = 5;
  double deletion = 0.05;
  std::uint64_t seed = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--grid-max", grid_max, "Largest S tried (default: min(6, admissible maximum))");
    cmd->add_option("--folds", folds, "Number of random hold-out folds")->check(CLI::PositiveNumber);
    cmd->add_option("--deletion", deletion, "Fraction of observed cells hidden per fold")->check(CLI::Range(0.0, 0.5));
    cmd->add_option("--cv-seed", seed, "Seed of the hold-out masks");
  }
  CvOptions options(const MixedDataset& ds, const ImputeConfig& base, std::size_t jobs) const {
    const std::size_t admissible = max_admissible_ncp(ds);
    const std::size_t top = grid_max == 0 ? std::min<std::size_t>(6, admissible) : grid_max;
    CvOptions o;
    for (std::size_t s = 1; s <= top; ++s) o.grid.push_back(s);
    o.folds = folds;
    o.deletion_fraction = deletion;
    o.seed = seed;
    o.base = base;
    o.jobs = jobs;
    return o;
  }
  void echo(Manifest& m) const {
    m.add("cv_folds", folds);
    m.add("cv_deletion", deletion);
    m.add("cv_seed", std::to_string(seed));
  }
};

void write_cv_csv(std::ostream& out, const CvReport& r) {
  out << "S,nrmse,pfc,combined\n";
  for (const auto& p : r.points)
    out << p.ncp << ',' << format_double(p.nrmse) << ',' << format_double(p.pfc) << ',' << format_double(p.combined)
        << '\n';
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

// Generator flags shared by `simulate` and `bench`.
struct ScenarioFlags {
  std::string scenario = "toy";
  std::uint64_t seed = 1;
  std::string toy_design = "strategy";
  std::size_t n = 100;
  double snr = 3.0;
  double fraction = 0.1;
  std::size_t rare_n = 1000;
  double rare_f = 0.01;
  double rare_shift = 2.0;
  double rare_noise = 1.0;
  std::size_t factorial_replicates = 20;
  bool interaction = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "toy, rare or factorial")
        ->check(CLI::IsMember({"toy", "rare", "factorial"}));
    cmd->add_option("--seed", seed, "Base seed");
    cmd->add_option("--toy-design", toy_design, "strategy (two 2+2 groups, 4 categories) or dimension (4+4 and 2+2 groups, 3 categories)")
        ->check(CLI::IsMember({"strategy", "dimension"}));
    cmd->add_option("--n", n, "Toy sample size")->check(CLI::PositiveNumber);
    cmd->add_option("--snr", snr, "Toy signal-to-noise ratio (signal sd / noise sd)")->check(CLI::PositiveNumber);
    cmd->add_option("--fraction", fraction, "MCAR missing fraction (toy and factorial)")->check(CLI::Range(0.0, 0.99));
    cmd->add_option("--rare-n", rare_n, "Rare-category design sample size")->check(CLI::PositiveNumber);
    cmd->add_option("--rare-f", rare_f, "Frequency of the rare category")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--rare-shift", rare_shift, "Latent shift of rare individuals");
    cmd->add_option("--rare-noise", rare_noise, "Noise sd around the latent variable")->check(CLI::NonNegativeNumber);
    cmd->add_option("--factorial-replicates", factorial_replicates, "Copies of the 9-run design")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--interaction", interaction, "Add the x1.x2 interaction before masking");
  }
  ToySpec toy(std::uint64_t s) const {
    return toy_design == "strategy" ? strategy_toy_spec(n, snr, s) : dimension_toy_spec(n, snr, s);
  }
  RareSpec rare(std::uint64_t s) const { return RareSpec{rare_n, rare_f, rare_shift, rare_noise, s}; }
  void echo(Manifest& m) const {
    m.add("scenario", scenario);
    m.add("seed", std::to_string(seed));
    if (scenario == "toy") {
      m.add("toy_design", toy_design);
      m.add("n", n);
      m.add("snr", snr);
      m.add("fraction", fraction);
    } else if (scenario == "rare") {
      m.add("rare_n", rare_n);
      m.add("rare_f", rare_f);
      m.add("rare_shift", rare_shift);
      m.add("rare_noise", rare_noise);
    } else {
      m.add("factorial_replicates", factorial_replicates);
      m.add("fraction", fraction);
      m.add("interaction", interaction);
    }
  }
};

VariableSubset parse_subset(const std::string& s) {
  if (s == "cont") return VariableSubset::Continuous;
  if (s == "cat") return VariableSubset::Categorical;
  return VariableSubset::Both;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); }

int run(const std::vector<std::string>& argv);

int run(const std::vector<std::string>& argv) {
  CLI::App app{"Iterative FAMD imputation for mixed continuous/categorical data"};
  app.set_version_flag("--version", FAMD_VERSION);
  app.require_subcommand(1);

  std::string na_token = default_na_token();
  std::size_t jobs = 1;
  std::string manifest_out;
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--na-token", na_token, "Missing-value token (default from FAMD_NA_TOKEN, else NA)");
    cmd->add_option("--manifest", manifest_out, "Manifest path (default: <output>.manifest)");
  };
  auto with_jobs = [&](CLI::App* cmd) {
    cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  };

  // impute
  auto* imp = app.add_subcommand("impute", "Impute missing values of a typed CSV");
  std::string imp_in, imp_out, imp_fuzzy, imp_ncp = "2";
  bool imp_verbose = false;
  AlgorithmFlags imp_alg;
  CvFlags imp_cv;
  imp->add_option("input", imp_in, "Typed CSV with missing values")->required();
  imp->add_option("--out", imp_out, "Completed CSV")->required();
  imp->add_option("--fuzzy-out", imp_fuzzy, "Imputed indicator matrix (category memberships)");
  imp->add_option("--ncp", imp_ncp, "Number of dimensions S, or 'auto' for cross-validation");
  imp->add_flag("--verbose", imp_verbose, "Print iteration, change and noise variance per iteration to stderr");
  imp_alg.attach(imp);
  imp_cv.attach(imp);
  common(imp);
  with_jobs(imp);

  // cv
  auto* cv = app.add_subcommand("cv", "Choose S by repeated random hold-out of observed cells");
  std::string cv_in, cv_out;
  AlgorithmFlags cv_alg;
  CvFlags cv_flags;
  cv->add_option("input", cv_in, "Typed CSV")->required();
  cv->add_option("--out", cv_out, "CSV of S,nrmse,pfc,combined (default: stdout)");
  cv_alg.attach(cv);
  cv_flags.attach(cv);
  common(cv);
  with_jobs(cv);

  // score
  auto* sc = app.add_subcommand("score", "Score an imputation against the truth");
  std::string sc_truth, sc_imputed, sc_mask, sc_incomplete, sc_out;
  sc->add_option("--truth", sc_truth, "Complete typed CSV")->required();
  sc->add_option("--imputed", sc_imputed, "Imputed typed CSV")->required();
  auto* mask_opt = sc->add_option("--mask", sc_mask, "0/1 CSV of scored cells");
  auto* inc_opt = sc->add_option("--incomplete", sc_incomplete, "Incomplete CSV whose missing cells are scored");
  mask_opt->excludes(inc_opt);
  sc->add_option("--out", sc_out, "Score CSV (default: stdout)");
  common(sc);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a simulated dataset and its MCAR mask");
  std::string sim_complete, sim_masked, sim_mask;
  ScenarioFlags sim_flags;
  sim_flags.attach(sim);
  sim->add_option("--complete-out", sim_complete, "Complete dataset CSV")->required();
  sim->add_option("--masked-out", sim_masked, "Masked dataset CSV")->required();
  sim->add_option("--mask-out", sim_mask, "Mask CSV")->required();
  common(sim);

  // bench
  auto* bench = app.add_subcommand("bench", "Run replicated generate/mask/impute/score experiments");
  ScenarioFlags bench_flags;
  AlgorithmFlags bench_alg;
  std::size_t bench_reps = 200, bench_ncp = 2;
  std::string bench_method = "famd", bench_use = "both", bench_out, bench_agg;
  bench_flags.attach(bench);
  bench_alg.attach(bench);
  bench->add_option("--replicates", bench_reps, "Number of replicates")->check(CLI::PositiveNumber);
  bench->add_option("--ncp", bench_ncp, "Number of dimensions S");
  bench->add_option("--method", bench_method, "famd or marginal")->check(CLI::IsMember({"famd", "marginal"}));
  bench->add_option("--use", bench_use, "Toy variables given to the imputer: both, cont or cat")
      ->check(CLI::IsMember({"both", "cont", "cat"}));
  bench->add_option("--out", bench_out, "Per-replicate CSV")->required();
  bench->add_option("--aggregate-out", bench_agg, "Aggregate CSV (default: stdout)");
  common(bench);
  with_jobs(bench);

  // analyze
  auto* an = app.add_subcommand("analyze", "FAMD eigenvalues and explained inertia of a complete dataset");
  std::string an_in, an_out;
  an->add_option("input", an_in, "Complete typed CSV")->required();
  an->add_option("--out", an_out, "CSV of dimension,eigenvalue,percent,cumulative (default: stdout)");
  common(an);

  // replay
  auto* rp = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  std::string rp_manifest;
  rp->add_option("manifest", rp_manifest, "Manifest file")->required();

  std::vector<std::string> args(argv.rbegin(), argv.rend() - 1);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (rp->parsed()) {
    std::ifstream in(rp_manifest);
    if (!in) throw ParseError("cannot open '" + rp_manifest + "'");
    std::map<std::size_t, std::string> recorded;
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("arg.", 0) != 0) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      recorded[std::stoul(line.substr(4, eq - 4))] = line.substr(eq + 1);
    }
    if (recorded.empty()) throw ParseError("manifest '" + rp_manifest + "' records no command line");
    std::vector<std::string> replayed;
    for (auto& [i, a] : recorded) replayed.push_back(a);
    return run(replayed);
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  Manifest manifest(sub, argv);
  manifest.add("na_token", na_token);

  if (imp->parsed()) {
    const auto ds = read_typed_csv_file(imp_in, na_token);
    manifest.add("input", imp_in);
    manifest.add("output", imp_out);
    std::size_t ncp = 0;
    if (imp_ncp == "auto") {
      const auto report = cross_validate(ds, imp_cv.options(ds, imp_alg.config(1), jobs));
      ncp = report.chosen_s;
      manifest.add("ncp_source", std::string("cv"));
      imp_cv.echo(manifest);
    } else {
      try {
        std::size_t used = 0;
        ncp = std::stoul(imp_ncp, &used);
        if (used != imp_ncp.size()) throw std::invalid_argument(imp_ncp);
      } catch (const std::exception&) {
        throw ParseError("--ncp expects a non-negative integer or 'auto', got '" + imp_ncp + "'");
      }
      manifest.add("ncp_source", std::string("fixed"));
    }
    const auto cfg = imp_alg.config(ncp);
    echo_impute_config(manifest, cfg);
    TraceSink trace;
    if (imp_verbose)
      trace = [](const IterationTrace& t) {
        std::cerr << "iteration=" << t.iteration << " change=" << format_double(t.change)
                  << " sigma2=" << format_double(t.sigma2) << '\n';
      };
    const auto result = impute(ds, cfg, trace);
    write_typed_csv_file(imp_out, result.completed, na_token);
    if (!imp_fuzzy.empty()) {
      std::ofstream f(imp_fuzzy);
      if (!f) throw ParseError("cannot write '" + imp_fuzzy + "'");
      write_fuzzy_csv(f, result.completed, result.fuzzy);
      manifest.add("fuzzy_output", imp_fuzzy);
    }
    manifest.add("iterations", result.iterations);
    manifest.add("final_change", result.final_change);
    manifest.add("converged", result.converged);
    manifest.write(manifest_path(manifest_out, imp_out));
    if (!result.converged)
      std::cerr << "warning: iteration cap reached (last change " << format_double(result.final_change) << ")\n";
    return kExitOk;
  }

  if (cv->parsed()) {
    const auto ds = read_typed_csv_file(cv_in, na_token);
    const auto report = cross_validate(ds, cv_flags.options(ds, cv_alg.config(1), jobs));
    std::ostringstream csv;
    write_cv_csv(csv, report);
    if (cv_out.empty())
      std::cout << csv.str();
    else
      write_text_file(cv_out, csv.str());
    std::cout << "chosen_S=" << report.chosen_s << '\n';
    manifest.add("input", cv_in);
    manifest.add("output", cv_out);
    echo_impute_config(manifest, cv_alg.config(report.chosen_s));
    cv_flags.echo(manifest);
    manifest.add("chosen_S", report.chosen_s);
    manifest.write(manifest_path(manifest_out, cv_out));
    return kExitOk;
  }

  if (sc->parsed()) {
    const auto truth = read_typed_csv_file(sc_truth, na_token);
    const auto imputed = read_typed_csv_file(sc_imputed, na_token);
    CellMask mask(0, 0);
    if (!sc_mask.empty()) {
      std::ifstream in(sc_mask);
      if (!in) throw ParseError("cannot open '" + sc_mask + "'");
      mask = read_mask_csv(in, truth);
    } else if (!sc_incomplete.empty()) {
      const auto incomplete = read_typed_csv_file(sc_incomplete, na_token);
      if (incomplete.n_rows() != truth.n_rows() || incomplete.n_cols() != truth.n_cols())
        throw InvalidInput("incomplete dataset shape differs from the truth");
      mask = missing_mask(incomplete);
    } else {
      throw ParseError("score needs --mask or --incomplete");
    }
    const auto r = score(truth, imputed, mask);
    std::ostringstream csv;
    csv << "nrmse,pfc,n_continuous,n_categorical\n"
        << optional_cell(r.nrmse) << ',' << optional_cell(r.pfc) << ',' << r.n_scored_cont << ',' << r.n_scored_cat
        << '\n';
    if (sc_out.empty())
      std::cout << csv.str();
    else
      write_text_file(sc_out, csv.str());
    manifest.add("truth", sc_truth);
    manifest.add("imputed", sc_imputed);
    manifest.add("mask", sc_mask.empty() ? sc_incomplete : sc_mask);
    manifest.add("output", sc_out);
    manifest.write(manifest_path(manifest_out, sc_out));
    return kExitOk;
  }

  if (sim->parsed()) {
    MixedDataset complete, masked;
    CellMask mask(0, 0);
    if (sim_flags.scenario == "rare") {
      auto s = gen_rare(sim_flags.rare(sim_flags.seed));
      complete = std::move(s.truth);
      masked = std::move(s.masked);
      mask = missing_mask(masked);
    } else {
      complete = sim_flags.scenario == "toy" ? gen_toy(sim_flags.toy(sim_flags.seed))
                                             : gen_factorial(sim_flags.factorial_replicates);
      if (sim_flags.interaction && sim_flags.scenario == "factorial") complete = add_interaction(complete, "x1", "x2");
      mask = draw_mcar_mask(complete, MaskSpec{sim_flags.fraction, sim_flags.seed});
      masked = apply_mask(complete, mask);
    }
    write_typed_csv_file(sim_complete, complete, na_token);
    write_typed_csv_file(sim_masked, masked, na_token);
    std::ofstream m(sim_mask);
    if (!m) throw ParseError("cannot write '" + sim_mask + "'");
    write_mask_csv(m, complete, mask);
    m.close();
    sim_flags.echo(manifest);
    manifest.add("complete_output", sim_complete);
    manifest.add("masked_output", sim_masked);
    manifest.add("mask_output", sim_mask);
    manifest.write(manifest_path(manifest_out, sim_masked));
    return kExitOk;
  }

  if (bench->parsed()) {
    BenchConfig cfg;
    cfg.scenario = parse_scenario(bench_flags.scenario);
    cfg.method = bench_method == "famd" ? Method::Famd : Method::Marginal;
    cfg.replicates = bench_reps;
    cfg.seed = bench_flags.seed;
    cfg.jobs = jobs;
    cfg.impute = bench_alg.config(bench_ncp);
    cfg.toy = bench_flags.toy(0);
    cfg.fraction = bench_flags.fraction;
    cfg.use = parse_subset(bench_use);
    cfg.rare_n = bench_flags.rare_n;
    cfg.rare_f = bench_flags.rare_f;
    cfg.rare_shift = bench_flags.rare_shift;
    cfg.rare_noise_sd = bench_flags.rare_noise;
    cfg.factorial_replicates = bench_flags.factorial_replicates;
    cfg.interaction = bench_flags.interaction;
    const auto report = run_bench(cfg);

    std::ostringstream per;
    per << "replicate,seed,nrmse,pfc,iterations,converged,failure\n";
    for (const auto& r : report.replicates)
      per << r.replicate << ',' << r.seed << ',' << optional_cell(r.errors.nrmse) << ',' << optional_cell(r.errors.pfc)
          << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << quote_csv_field(r.failure) << '\n';
    write_text_file(bench_out, per.str());

    const auto& a = report.aggregate;
    std::ostringstream agg;
    agg << "scenario,method,replicates,mean_nrmse,mean_pfc,n_nrmse,n_pfc,failures\n"
        << bench_flags.scenario << ',' << bench_method << ',' << bench_reps << ','
        << (a.n_nrmse > 0 ? format_double(a.mean_nrmse) : "NA") << ','
        << (a.n_pfc > 0 ? format_double(a.mean_pfc) : "NA") << ',' << a.n_nrmse << ',' << a.n_pfc << ','
        << a.failures << '\n';
    if (bench_agg.empty())
      std::cout << agg.str();
    else
      write_text_file(bench_agg, agg.str());

    bench_flags.echo(manifest);
    manifest.add("method", bench_method);
    manifest.add("use", bench_use);
    manifest.add("replicates", bench_reps);
    echo_impute_config(manifest, cfg.impute);
    manifest.add("output", bench_out);
    manifest.add("aggregate_output", bench_agg);
    manifest.add("failures", a.failures);
    manifest.write(manifest_path(manifest_out, bench_out));
    if (a.failures > 0) {
      std::cerr << a.failures << " of " << bench_reps << " replicates failed\n";
      return kExitPartial;
    }
    return kExitOk;
  }

  // analyze
  const auto ds = read_typed_csv_file(an_in, na_token);
  const auto summary = analyze(ds);
  std::ostringstream csv;
  csv << "dimension,eigenvalue,percent,cumulative\n";
  double cumulative = 0.0;
  for (Eigen::Index s = 0; s < summary.eigenvalues.size(); ++s) {
    const double pct = 100.0 * summary.eigenvalues(s) / summary.total_inertia;
    cumulative += pct;
    csv << s + 1 << ',' << format_double(summary.eigenvalues(s)) << ',' << format_double(pct) << ','
        << format_double(cumulative) << '\n';
  }
  if (an_out.empty())
    std::cout << csv.str();
  else
    write_text_file(an_out, csv.str());
  manifest.add("input", an_in);
  manifest.add("output", an_out);
  manifest.add("total_inertia", summary.total_inertia);
  manifest.write(manifest_path(manifest_out, an_out));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    return run(args);
  } catch (const famd::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const famd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
