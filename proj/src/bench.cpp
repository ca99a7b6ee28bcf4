#include "famd/bench.hpp"

#include "famd/error.hpp"
#include "famd/parallel.hpp"
#include "famd/preprocess.hpp"

namespace famd {

namespace {

// splitmix64 finalizer; derives the mask stream from the data seed.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Prepared {
  MixedDataset truth;
  MixedDataset masked;
  CellMask mask;
};

Prepared prepare(const BenchConfig& cfg, std::uint64_t seed) {
  switch (cfg.scenario) {
    case Scenario::Toy: {
      auto spec = cfg.toy;
      spec.seed = seed;
      Prepared p;
      p.truth = gen_toy(spec);
      p.mask = draw_mcar_mask(p.truth, {cfg.fraction, mix(seed)});
      p.masked = apply_mask(p.truth, p.mask);
      return p;
    }
    case Scenario::Rare: {
      auto sample = gen_rare({cfg.rare_n, cfg.rare_f, cfg.rare_shift, cfg.rare_noise_sd, seed});
      CellMask mask(sample.truth.n_rows(), sample.truth.n_cols());
      mask.set(sample.row, sample.col);
      return {std::move(sample.truth), std::move(sample.masked), std::move(mask)};
    }
    case Scenario::Factorial: {
      Prepared p;
      p.truth = gen_factorial(cfg.factorial_replicates);
      if (cfg.interaction) p.truth = add_interaction(p.truth, "x1", "x2");
      p.mask = draw_mcar_mask(p.truth, {cfg.fraction, mix(seed)});
      p.masked = apply_mask(p.truth, p.mask);
      return p;
    }
  }
  throw InvalidInput("unknown scenario");
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
  if (name == "toy") return Scenario::Toy;
  if (name == "rare") return Scenario::Rare;
  if (name == "factorial") return Scenario::Factorial;
  throw ParseError("unknown scenario '" + name + "' (expected toy, rare or factorial)");
}

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::Toy:
      return "toy";
    case Scenario::Rare:
      return "rare";
    case Scenario::Factorial:
      return "factorial";
  }
  return "?";
}

ReplicateResult run_replicate(const BenchConfig& cfg, std::size_t replicate) {
  ReplicateResult out;
  out.replicate = replicate;
  out.seed = cfg.seed + replicate;
  try {
    auto p = prepare(cfg, out.seed);
    const auto& input = p.masked;

    MixedDataset completed;
    if (cfg.method == Method::Marginal) {
      completed = impute_marginal(input);
      out.converged = true;
    } else {
      auto result = impute_subset(input, cfg.impute, cfg.scenario == Scenario::Toy ? cfg.use : VariableSubset::Both);
      out.iterations = result.iterations;
      out.converged = result.converged;
      completed = std::move(result.completed);
    }
    if (cfg.scenario == Scenario::Factorial && cfg.interaction) {
      // Only the original design variables are scored; the interaction column is last.
      const std::vector<std::string> design{"x1", "x2", "x3"};
      CellMask mask(p.truth.n_rows(), design.size());
      for (std::size_t k = 0; k < design.size(); ++k)
        for (std::size_t i = 0; i < p.truth.n_rows(); ++i)
          if (p.mask(i, k)) mask.set(i, k);
      out.errors = score(p.truth.select(design), completed, mask);
    } else {
      out.errors = score(p.truth, completed, p.mask);
    }
  } catch (const std::exception& e) {
    out.failure = e.what();
  }
  return out;
}

BenchReport run_bench(const BenchConfig& cfg) {
  BenchReport report;
  report.replicates.resize(cfg.replicates);
  parallel_for(cfg.replicates, cfg.jobs, [&](std::size_t r) { report.replicates[r] = run_replicate(cfg, r); });

  auto& agg = report.aggregate;
  for (const auto& r : report.replicates) {
    if (!r.failure.empty()) {
      ++agg.failures;
      continue;
    }
    if (r.errors.nrmse) {
      agg.mean_nrmse += *r.errors.nrmse;
      ++agg.n_nrmse;
    }
    if (r.errors.pfc) {
      agg.mean_pfc += *r.errors.pfc;
      ++agg.n_pfc;
    }
  }
  if (agg.n_nrmse) agg.mean_nrmse /= static_cast<double>(agg.n_nrmse);
  if (agg.n_pfc) agg.mean_pfc /= static_cast<double>(agg.n_pfc);
  return report;
}

}  // namespace famd
