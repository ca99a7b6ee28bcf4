#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "famd/dataset.hpp"
#include "famd/indicator.hpp"

namespace famd {

struct ImputeConfig {
  std::size_t ncp = 2;
  bool regularized = true;
  double epsilon = 1e-6;
  std::size_t max_iter = 1000;
  std::optional<std::uint64_t> seed;  // reserved; the algorithm is deterministic
  // Replaces the trailing-eigenvalue noise estimate when set.
  std::optional<double> fixed_sigma2;
};

struct ImputationResult {
  MixedDataset completed;
  FuzzyIndicator fuzzy;
  std::size_t iterations = 0;
  double final_change = 0.0;
  bool converged = false;
};

struct IterationTrace {
  std::size_t iteration = 0;
  double change = 0.0;
  double sigma2 = 0.0;
};

using TraceSink = std::function<void(const IterationTrace&)>;

// Missing continuous cells get the observed column mean, missing categorical
// cells the observed category proportions.
Eigen::MatrixXd initialize(const IndicatorExpansion& exp);

ImputationResult impute(const MixedDataset& ds, const ImputeConfig& cfg, const TraceSink& trace = {});

enum class VariableSubset { Continuous, Categorical, Both };

// Restricts `ds` to the requested variable kind before imputing; the result
// only holds the retained columns.
ImputationResult impute_subset(const MixedDataset& ds, const ImputeConfig& cfg, VariableSubset use);

}  // namespace famd

namespace famd {

// Baseline: observed mean for continuous cells, most frequent observed
// category for categorical cells.
MixedDataset impute_marginal(const MixedDataset& ds);

}  // namespace famd
