#include "famd/dataset.hpp"

#include <algorithm>
#include <set>

#include "famd/error.hpp"

namespace famd {

std::string_view to_string(Kind kind) { return kind == Kind::Continuous ? "cont" : "cat"; }

Column Column::continuous(std::string name, std::vector<std::optional<double>> values) {
  Column c;
  c.name = std::move(name);
  c.kind = Kind::Continuous;
  c.numbers = std::move(values);
  return c;
}

Column Column::categorical(std::string name, std::vector<std::optional<std::string>> values) {
  Column c;
  c.name = std::move(name);
  c.kind = Kind::Categorical;
  c.labels = std::move(values);
  return c;
}

std::size_t Column::size() const { return kind == Kind::Continuous ? numbers.size() : labels.size(); }

bool Column::is_missing(std::size_t row) const {
  return kind == Kind::Continuous ? !numbers.at(row).has_value() : !labels.at(row).has_value();
}

std::size_t Column::missing_count() const {
  if (kind == Kind::Continuous)
    return static_cast<std::size_t>(std::count(numbers.begin(), numbers.end(), std::nullopt));
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::nullopt));
}

std::vector<std::string> Column::observed_categories() const {
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (l) seen.insert(*l);
  return {seen.begin(), seen.end()};
}

std::size_t Column::distinct_value_count() const {
  std::set<double> seen;
  for (const auto& v : numbers)
    if (v) seen.insert(*v);
  return seen.size();
}

CellMask::CellMask(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

std::size_t CellMask::count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

std::size_t CellMask::count_in_column(std::size_t col) const {
  auto first = bits_.begin() + static_cast<std::ptrdiff_t>(col * rows_);
  return static_cast<std::size_t>(std::count(first, first + static_cast<std::ptrdiff_t>(rows_), 1));
}

MixedDataset::MixedDataset(std::vector<Column> columns) : columns_(std::move(columns)) {
  n_rows_ = columns_.empty() ? 0 : columns_.front().size();
  std::set<std::string> names;
  for (const auto& c : columns_) {
    if (c.size() != n_rows_)
      throw InvalidInput("column '" + c.name + "' has " + std::to_string(c.size()) + " cells, expected " +
                         std::to_string(n_rows_));
    if (!names.insert(c.name).second) throw InvalidInput("duplicate column name '" + c.name + "'");
    if (c.kind == Kind::Continuous && !c.labels.empty())
      throw InvalidInput("continuous column '" + c.name + "' carries labels");
    if (c.kind == Kind::Categorical && !c.numbers.empty())
      throw InvalidInput("categorical column '" + c.name + "' carries numbers");
  }
}

const Column& MixedDataset::column(std::string_view name) const {
  auto idx = find(name);
  if (!idx) throw InvalidInput("no column named '" + std::string(name) + "'");
  return columns_[*idx];
}

std::optional<std::size_t> MixedDataset::find(std::string_view name) const {
  for (std::size_t k = 0; k < columns_.size(); ++k)
    if (columns_[k].name == name) return k;
  return std::nullopt;
}

std::size_t MixedDataset::count(Kind kind) const {
  return static_cast<std::size_t>(
      std::count_if(columns_.begin(), columns_.end(), [kind](const Column& c) { return c.kind == kind; }));
}

std::size_t MixedDataset::missing_count() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.missing_count();
  return n;
}

void MixedDataset::validate() const {
  for (const auto& c : columns_) {
    if (c.kind == Kind::Categorical) {
      if (c.observed_categories().size() < 2)
        throw InvalidInput("degenerate categorical: column '" + c.name + "' has fewer than 2 observed categories");
    } else if (c.distinct_value_count() < 2) {
      throw InvalidInput("constant column: column '" + c.name + "' has zero observed variance");
    }
  }
}

MixedDataset MixedDataset::with_column(Column column) const {
  auto cols = columns_;
  cols.push_back(std::move(column));
  return MixedDataset(std::move(cols));
}

MixedDataset MixedDataset::select(std::span<const std::string> names) const {
  std::vector<Column> cols;
  cols.reserve(names.size());
  for (const auto& n : names) cols.push_back(column(n));
  return MixedDataset(std::move(cols));
}

MixedDataset MixedDataset::select(Kind kind) const {
  std::vector<Column> cols;
  for (const auto& c : columns_)
    if (c.kind == kind) cols.push_back(c);
  return MixedDataset(std::move(cols));
}

CellMask missing_mask(const MixedDataset& ds) {
  CellMask m(ds.n_rows(), ds.n_cols());
  for (std::size_t k = 0; k < ds.n_cols(); ++k)
    for (std::size_t i = 0; i < ds.n_rows(); ++i)
      if (ds.column(k).is_missing(i)) m.set(i, k);
  return m;
}

MixedDataset apply_mask(const MixedDataset& ds, const CellMask& mask) {
  if (mask.rows() != ds.n_rows() || mask.cols() != ds.n_cols()) throw InvalidInput("mask shape does not match dataset");
  auto cols = ds.columns();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
      if (!mask(i, k)) continue;
      if (cols[k].kind == Kind::Continuous)
        cols[k].numbers[i].reset();
      else
        cols[k].labels[i].reset();
    }
  }
  return MixedDataset(std::move(cols));
}

}  // namespace famd
