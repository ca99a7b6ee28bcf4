#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "famd/dataset.hpp"

namespace famd {

// One original variable and the contiguous range of expanded columns it owns.
struct VariableBlock {
  std::size_t variable = 0;  // index into MixedDataset::columns()
  Kind kind = Kind::Continuous;
  std::size_t first = 0;
  std::size_t width = 1;
  std::vector<std::string> categories;  // empty for continuous

  bool operator==(const VariableBlock&) const = default;
};

// Continuous variables come first (one column each), followed by one dummy
// block per categorical variable. Within a kind, dataset column order is kept.
struct Layout {
  std::vector<VariableBlock> blocks;
  std::size_t n_continuous = 0;   // K1
  std::size_t n_categorical = 0;  // K2
  std::size_t width = 0;          // J

  bool is_dummy(std::size_t col) const { return col >= n_continuous; }
  // Block owning expanded column `col`.
  const VariableBlock& block_of(std::size_t col) const;

  bool operator==(const Layout&) const = default;
};

// X (I x J) and its observation mask W (1 observed, 0 missing).
struct IndicatorExpansion {
  Eigen::MatrixXd x;
  Eigen::MatrixXd w;
  Layout layout;
};

// Completed X after imputation; dummy entries of imputed cells are degrees of
// membership. `observed` mirrors W of the expansion it came from.
struct FuzzyIndicator {
  Eigen::MatrixXd values;
  Eigen::MatrixXd observed;
  Layout layout;
};

Layout make_layout(const MixedDataset& ds);
IndicatorExpansion encode(const MixedDataset& ds);

// Maps memberships back to labels (argmax, first category wins ties) and
// fills missing continuous cells with their fuzzy value.
MixedDataset decode(const FuzzyIndicator& fz, const MixedDataset& ds);

}  // namespace famd
