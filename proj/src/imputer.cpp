#include "famd/imputer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "famd/error.hpp"
#include "famd/famd_core.hpp"

namespace famd {

Eigen::MatrixXd initialize(const IndicatorExpansion& exp) {
  Eigen::MatrixXd x = exp.x;
  const auto n = x.rows();
  for (const auto& block : exp.layout.blocks) {
    const auto first = static_cast<Eigen::Index>(block.first);
    const auto width = static_cast<Eigen::Index>(block.width);
    // w is constant across a dummy block, so its first column tells which rows are observed.
    const double observed = exp.w.col(first).sum();
    if (observed == 0.0) throw InvalidInput("column has no observed data");
    Eigen::RowVectorXd fill(width);
    for (Eigen::Index c = 0; c < width; ++c)
      fill(c) = (exp.x.col(first + c).array() * exp.w.col(first + c).array()).sum() / observed;
    for (Eigen::Index i = 0; i < n; ++i)
      if (exp.w(i, first) == 0.0) x.row(i).segment(first, width) = fill;
  }
  return x;
}

MixedDataset impute_marginal(const MixedDataset& ds) {
  const auto exp = encode(ds);
  return decode(FuzzyIndicator{initialize(exp), exp.w, exp.layout}, ds);
}

ImputationResult impute(const MixedDataset& ds, const ImputeConfig& cfg, const TraceSink& trace) {
  if (cfg.ncp < 1) throw InvalidInput("ncp must be at least 1");
  if (!(cfg.epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (cfg.max_iter < 1) throw InvalidInput("max_iter must be at least 1");

  const auto exp = encode(ds);
  const auto& layout = exp.layout;
  const std::size_t n = ds.n_rows();
  const std::size_t nontrivial = layout.width - layout.n_categorical;
  const std::size_t max_ncp = std::min(n > 0 ? n - 1 : 0, nontrivial);
  if (cfg.ncp > max_ncp)
    throw InvalidInput("ncp " + std::to_string(cfg.ncp) + " exceeds the maximum of " + std::to_string(max_ncp));
  if (cfg.regularized && !cfg.fixed_sigma2 && cfg.ncp >= nontrivial)
    throw InvalidInput("ncp " + std::to_string(cfg.ncp) + " leaves no dimension to estimate the noise variance");

  ImputationResult result;
  if (ds.is_complete()) {
    result.completed = ds;
    result.fuzzy = FuzzyIndicator{exp.x, exp.w, layout};
    result.iterations = 1;
    result.converged = true;
    return result;
  }

  const double floor = 1.0 / (100.0 * static_cast<double>(n));
  const auto observed = (exp.w.array() > 0.0);
  Eigen::MatrixXd x = initialize(exp);
  FamdModel model;
  model.weights = compute_weights(x, layout, floor);
  model.rank = cfg.ncp;
  Eigen::MatrixXd previous_fit = x;

  double change = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  while (iter < cfg.max_iter) {
    ++iter;
    auto factors = svd_truncated(weighted_center(x, model.weights), cfg.ncp);
    model.u = std::move(factors.u);
    model.v = std::move(factors.v);
    model.lambda = std::move(factors.lambda);
    model.sigma2 = 0.0;
    if (cfg.regularized)
      model.sigma2 = cfg.fixed_sigma2 ? *cfg.fixed_sigma2
                                      : estimate_sigma2(factors.all_lambda, cfg.ncp, layout.width, layout.n_categorical);

    Eigen::MatrixXd fitted = reconstruct(model, cfg.regularized);
    if (!fitted.allFinite()) throw NumericalError("non-finite fitted values at iteration " + std::to_string(iter));
    change = (previous_fit - fitted).squaredNorm();
    x = observed.select(exp.x, fitted);
    model.weights = compute_weights(x, layout, floor);
    previous_fit = std::move(fitted);

    if (trace) trace({iter, change, model.sigma2});
    if (change <= cfg.epsilon) {
      result.converged = true;
      break;
    }
  }

  result.iterations = iter;
  result.final_change = change;
  result.fuzzy = FuzzyIndicator{std::move(x), exp.w, layout};
  result.completed = decode(result.fuzzy, ds);
  return result;
}

ImputationResult impute_subset(const MixedDataset& ds, const ImputeConfig& cfg, VariableSubset use) {
  switch (use) {
    case VariableSubset::Both:
      return impute(ds, cfg);
    case VariableSubset::Continuous: {
      auto sub = ds.select(Kind::Continuous);
      if (sub.n_cols() == 0) throw InvalidInput("no continuous variables to impute");
      return impute(sub, cfg);
    }
    case VariableSubset::Categorical: {
      auto sub = ds.select(Kind::Categorical);
      if (sub.n_cols() == 0) throw InvalidInput("no categorical variables to impute");
      return impute(sub, cfg);
    }
  }
  throw InvalidInput("unknown variable subset");
}

}  // namespace famd
