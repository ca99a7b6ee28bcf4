#pragma once

#include <cstddef>
#include <optional>

#include "famd/dataset.hpp"

namespace famd {

// Columns of `imputed` are matched to `truth` by name; truth columns absent
// from `imputed` are not scored. `mask` is indexed like `truth`.
//
// NRMSE standardizes each error by the population standard deviation of the
// truth column over its non-missing cells.
double nrmse(const MixedDataset& truth, const MixedDataset& imputed, const CellMask& mask);
double pfc(const MixedDataset& truth, const MixedDataset& imputed, const CellMask& mask);

struct ErrorReport {
  std::optional<double> nrmse;  // empty when no continuous cell was scored
  std::optional<double> pfc;    // empty when no categorical cell was scored
  std::size_t n_scored_cont = 0;
  std::size_t n_scored_cat = 0;
};

ErrorReport score(const MixedDataset& truth, const MixedDataset& imputed, const CellMask& mask);

}  // namespace famd
