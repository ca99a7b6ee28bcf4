#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "famd/imputer.hpp"
#include "famd/metrics.hpp"
#include "famd/simgen.hpp"

namespace famd {

enum class Scenario { Toy, Rare, Factorial };
enum class Method { Famd, Marginal };

Scenario parse_scenario(const std::string& name);
std::string_view to_string(Scenario scenario);

// One experiment grid point: generate -> mask -> impute -> score, repeated.
// Replicate r uses seed + r for data generation.
struct BenchConfig {
  Scenario scenario = Scenario::Toy;
  Method method = Method::Famd;
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  ImputeConfig impute;

  // toy
  ToySpec toy = strategy_toy_spec(100, 3.0, 0);
  double fraction = 0.1;
  VariableSubset use = VariableSubset::Both;

  // rare
  std::size_t rare_n = 1000;
  double rare_f = 0.01;
  double rare_shift = 2.0;
  double rare_noise_sd = 1.0;

  // factorial
  std::size_t factorial_replicates = 20;
  bool interaction = false;  // add x1.x2 to the complete design before masking
};

struct ReplicateResult {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  ErrorReport errors;
  std::size_t iterations = 0;
  bool converged = false;
  std::string failure;  // empty on success
};

struct BenchAggregate {
  double mean_nrmse = 0.0;
  double mean_pfc = 0.0;
  std::size_t n_nrmse = 0;
  std::size_t n_pfc = 0;
  std::size_t failures = 0;
};

struct BenchReport {
  std::vector<ReplicateResult> replicates;
  BenchAggregate aggregate;
};

ReplicateResult run_replicate(const BenchConfig& cfg, std::size_t replicate);
BenchReport run_bench(const BenchConfig& cfg);

}  // namespace famd
