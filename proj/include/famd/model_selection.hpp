#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "famd/dataset.hpp"
#include "famd/imputer.hpp"

namespace famd {

struct CvOptions {
  std::vector<std::size_t> grid;
  std::size_t folds = 5;
  double deletion_fraction = 0.05;
  std::uint64_t seed = 0;
  ImputeConfig base;  // ncp is overridden per grid point
  std::size_t jobs = 1;
  std::size_t max_retries = 100;
};

struct CvPoint {
  std::size_t ncp = 0;
  double nrmse = 0.0;  // 0 when the dataset has no continuous variable
  double pfc = 0.0;    // 0 when the dataset has no categorical variable
  double combined = 0.0;
};

struct CvReport {
  std::vector<CvPoint> points;
  std::size_t chosen_s = 0;
  std::size_t folds = 0;
  double deletion_fraction = 0.0;
  std::uint64_t seed = 0;
};

// Largest admissible grid value: J - K2 - 1 (the noise variance must stay
// estimable), also bounded by I - 1.
std::size_t max_admissible_ncp(const MixedDataset& ds);

// Repeated random hold-out of observed cells. Each fold hides
// deletion_fraction of the observed cells, every grid point is imputed and
// scored on them, errors are averaged over folds and the smallest S with the
// lowest NRMSE + PFC wins.
CvReport cross_validate(const MixedDataset& ds, const CvOptions& options);

}  // namespace famd
