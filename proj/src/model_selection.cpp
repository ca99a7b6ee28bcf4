#include "famd/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "famd/error.hpp"
#include "famd/indicator.hpp"
#include "famd/metrics.hpp"
#include "famd/parallel.hpp"
#include "famd/simgen.hpp"

namespace famd {

namespace {

// A fold is usable when every column keeps two observed cells and no
// categorical column loses one of its observed categories.
bool fold_usable(const MixedDataset& original, const MixedDataset& masked) {
  for (std::size_t k = 0; k < original.n_cols(); ++k) {
    const auto& before = original.column(k);
    const auto& after = masked.column(k);
    if (after.size() - after.missing_count() < 2) return false;
    if (before.kind == Kind::Categorical) {
      if (after.observed_categories().size() != before.observed_categories().size()) return false;
    } else if (after.distinct_value_count() < 2) {
      return false;
    }
  }
  return true;
}

CellMask draw_fold(const MixedDataset& ds, double fraction, std::uint64_t seed, std::size_t max_retries) {
  std::vector<std::pair<std::size_t, std::size_t>> observed;
  for (std::size_t k = 0; k < ds.n_cols(); ++k)
    for (std::size_t i = 0; i < ds.n_rows(); ++i)
      if (!ds.column(k).is_missing(i)) observed.emplace_back(i, k);
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(observed.size())));
  if (count == 0) throw InvalidInput("deletion fraction hides no cell");

  Rng rng(seed);
  for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
    auto cells = observed;
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, cells.size() - 1);
      std::swap(cells[i], cells[pick(rng)]);
    }
    CellMask mask(ds.n_rows(), ds.n_cols());
    for (std::size_t i = 0; i < count; ++i) mask.set(cells[i].first, cells[i].second);
    if (fold_usable(ds, apply_mask(ds, mask))) return mask;
  }
  throw InvalidInput("cross-validation fold empties a column after " + std::to_string(max_retries) + " retries");
}

}  // namespace

std::size_t max_admissible_ncp(const MixedDataset& ds) {
  const auto layout = make_layout(ds);
  const std::size_t nontrivial = layout.width - layout.n_categorical;
  const std::size_t by_rows = ds.n_rows() > 0 ? ds.n_rows() - 1 : 0;
  return std::min(by_rows, nontrivial > 0 ? nontrivial - 1 : 0);
}

CvReport cross_validate(const MixedDataset& ds, const CvOptions& options) {
  if (options.grid.empty()) throw InvalidInput("empty ncp grid");
  if (options.folds < 1) throw InvalidInput("at least one fold is required");
  if (!(options.deletion_fraction > 0.0 && options.deletion_fraction <= 0.5))
    throw InvalidInput("deletion fraction must lie in (0, 0.5]");
  ds.validate();

  auto grid = options.grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::size_t limit = max_admissible_ncp(ds);
  if (grid.front() < 1 || grid.back() > limit)
    throw InvalidInput("ncp grid must lie in [1, " + std::to_string(limit) + "]");

  std::vector<CellMask> masks;
  masks.reserve(options.folds);
  for (std::size_t f = 0; f < options.folds; ++f)
    masks.push_back(draw_fold(ds, options.deletion_fraction, options.seed + f, options.max_retries));

  const std::size_t n_grid = grid.size();
  std::vector<ErrorReport> scores(options.folds * n_grid);
  parallel_for(scores.size(), options.jobs, [&](std::size_t task) {
    const std::size_t fold = task / n_grid;
    auto cfg = options.base;
    cfg.ncp = grid[task % n_grid];
    const auto result = impute(apply_mask(ds, masks[fold]), cfg);
    scores[task] = score(ds, result.completed, masks[fold]);
  });

  CvReport report;
  report.folds = options.folds;
  report.deletion_fraction = options.deletion_fraction;
  report.seed = options.seed;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < n_grid; ++g) {
    CvPoint point;
    point.ncp = grid[g];
    double nrmse_sum = 0.0, pfc_sum = 0.0;
    std::size_t nrmse_n = 0, pfc_n = 0;
    for (std::size_t f = 0; f < options.folds; ++f) {
      const auto& s = scores[f * n_grid + g];
      if (s.nrmse) {
        nrmse_sum += *s.nrmse;
        ++nrmse_n;
      }
      if (s.pfc) {
        pfc_sum += *s.pfc;
        ++pfc_n;
      }
    }
    point.nrmse = nrmse_n ? nrmse_sum / static_cast<double>(nrmse_n) : 0.0;
    point.pfc = pfc_n ? pfc_sum / static_cast<double>(pfc_n) : 0.0;
    point.combined = point.nrmse + point.pfc;
    if (!std::isfinite(point.combined)) throw NumericalError("non-finite cross-validation error");
    if (point.combined < best) {
      best = point.combined;
      report.chosen_s = point.ncp;
    }
    report.points.push_back(point);
  }
  return report;
}

}  // namespace famd
