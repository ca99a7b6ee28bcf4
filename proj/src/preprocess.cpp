#include "famd/preprocess.hpp"

#include <algorithm>

#include "famd/error.hpp"

namespace famd {

std::vector<double> equal_count_edges(std::vector<double> observed, std::size_t q) {
  if (q < 2) throw InvalidInput("bin count must be at least 2");
  std::sort(observed.begin(), observed.end());
  const std::size_t m = observed.size();
  if (m < q) throw InvalidInput("fewer observed values than bins");
  std::vector<double> edges;
  edges.reserve(q - 1);
  // Bin b (1-based) ends at rank ceil(b m / q).
  for (std::size_t b = 1; b < q; ++b) edges.push_back(observed[(b * m + q - 1) / q - 1]);
  return edges;
}

std::size_t bin_index(const std::vector<double>& edges, double value) {
  return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), value) - edges.begin());
}

MixedDataset bin_continuous(const MixedDataset& ds, const std::string& col, std::size_t q) {
  const auto& source = ds.column(col);
  if (source.kind != Kind::Continuous) throw InvalidInput("column '" + col + "' is not continuous");
  if (q < 2) throw InvalidInput("bin count must be at least 2");
  if (source.distinct_value_count() < q)
    throw InvalidInput("column '" + col + "' has fewer distinct observed values than bins");

  std::vector<double> observed;
  for (const auto& v : source.numbers)
    if (v) observed.push_back(*v);
  const auto edges = equal_count_edges(std::move(observed), q);

  std::vector<std::optional<std::string>> labels(source.size());
  for (std::size_t i = 0; i < source.size(); ++i)
    if (const auto& v = source.numbers[i]) labels[i] = "q" + std::to_string(bin_index(edges, *v) + 1);
  return ds.with_column(Column::categorical(col + "_bin", std::move(labels)));
}

MixedDataset add_interaction(const MixedDataset& ds, const std::string& a, const std::string& b) {
  const auto& ca = ds.column(a);
  const auto& cb = ds.column(b);
  if (ca.kind != Kind::Categorical || cb.kind != Kind::Categorical)
    throw InvalidInput("interaction requires two categorical columns");
  std::vector<std::optional<std::string>> labels(ds.n_rows());
  for (std::size_t i = 0; i < ds.n_rows(); ++i)
    if (ca.labels[i] && cb.labels[i]) labels[i] = *ca.labels[i] + *cb.labels[i];
  return ds.with_column(Column::categorical(a + "." + b, std::move(labels)));
}

}  // namespace famd
