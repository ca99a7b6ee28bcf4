#include "famd/indicator.hpp"

#include <algorithm>

#include "famd/error.hpp"

namespace famd {

const VariableBlock& Layout::block_of(std::size_t col) const {
  auto it = std::upper_bound(blocks.begin(), blocks.end(), col,
                             [](std::size_t c, const VariableBlock& b) { return c < b.first; });
  if (it == blocks.begin() || col >= width) throw InvalidInput("expanded column out of range");
  return *std::prev(it);
}

Layout make_layout(const MixedDataset& ds) {
  Layout layout;
  std::size_t next = 0;
  for (std::size_t k = 0; k < ds.n_cols(); ++k) {
    if (ds.column(k).kind != Kind::Continuous) continue;
    layout.blocks.push_back({k, Kind::Continuous, next, 1, {}});
    ++next;
    ++layout.n_continuous;
  }
  for (std::size_t k = 0; k < ds.n_cols(); ++k) {
    const auto& c = ds.column(k);
    if (c.kind != Kind::Categorical) continue;
    auto cats = c.observed_categories();
    layout.blocks.push_back({k, Kind::Categorical, next, cats.size(), std::move(cats)});
    next += layout.blocks.back().width;
    ++layout.n_categorical;
  }
  layout.width = next;
  return layout;
}

IndicatorExpansion encode(const MixedDataset& ds) {
  ds.validate();
  IndicatorExpansion exp;
  exp.layout = make_layout(ds);
  const auto n = static_cast<Eigen::Index>(ds.n_rows());
  const auto width = static_cast<Eigen::Index>(exp.layout.width);
  exp.x = Eigen::MatrixXd::Zero(n, width);
  exp.w = Eigen::MatrixXd::Zero(n, width);

  for (const auto& block : exp.layout.blocks) {
    const auto& col = ds.column(block.variable);
    const auto first = static_cast<Eigen::Index>(block.first);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto row = static_cast<std::size_t>(i);
      if (block.kind == Kind::Continuous) {
        if (const auto& v = col.numbers[row]) {
          exp.x(i, first) = *v;
          exp.w(i, first) = 1.0;
        }
        continue;
      }
      const auto& label = col.labels[row];
      if (!label) continue;
      auto it = std::lower_bound(block.categories.begin(), block.categories.end(), *label);
      exp.x(i, first + (it - block.categories.begin())) = 1.0;
      exp.w.row(i).segment(first, static_cast<Eigen::Index>(block.width)).setOnes();
    }
  }
  return exp;
}

MixedDataset decode(const FuzzyIndicator& fz, const MixedDataset& ds) {
  if (fz.layout != make_layout(ds)) throw InvalidInput("fuzzy indicator layout does not match dataset");
  if (fz.values.rows() != static_cast<Eigen::Index>(ds.n_rows()) ||
      fz.values.cols() != static_cast<Eigen::Index>(fz.layout.width))
    throw InvalidInput("fuzzy indicator shape does not match dataset");

  auto cols = ds.columns();
  for (const auto& block : fz.layout.blocks) {
    auto& col = cols[block.variable];
    const auto first = static_cast<Eigen::Index>(block.first);
    for (std::size_t row = 0; row < ds.n_rows(); ++row) {
      if (!col.is_missing(row)) continue;
      const auto i = static_cast<Eigen::Index>(row);
      if (block.kind == Kind::Continuous) {
        col.numbers[row] = fz.values(i, first);
        continue;
      }
      std::size_t best = 0;
      for (std::size_t c = 1; c < block.width; ++c)
        if (fz.values(i, first + static_cast<Eigen::Index>(c)) > fz.values(i, first + static_cast<Eigen::Index>(best)))
          best = c;
      col.labels[row] = block.categories[best];
    }
  }
  return MixedDataset(std::move(cols));
}

}  // namespace famd
