#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace famd {

enum class Kind { Continuous, Categorical };

std::string_view to_string(Kind kind);

// One typed column. Only the vector matching `kind` is populated; a disengaged
// optional is a missing cell.
struct Column {
  std::string name;
  Kind kind = Kind::Continuous;
  std::vector<std::optional<double>> numbers;
  std::vector<std::optional<std::string>> labels;

  static Column continuous(std::string name, std::vector<std::optional<double>> values);
  static Column categorical(std::string name, std::vector<std::optional<std::string>> values);

  std::size_t size() const;
  bool is_missing(std::size_t row) const;
  std::size_t missing_count() const;

  // Sorted distinct observed labels (categorical) or number of distinct
  // observed values (continuous, via distinct_value_count).
  std::vector<std::string> observed_categories() const;
  std::size_t distinct_value_count() const;

  bool operator==(const Column&) const = default;
};

// A boolean mask over the cells of a dataset, indexed (row, column).
class CellMask {
 public:
  CellMask() = default;
  CellMask(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool operator()(std::size_t row, std::size_t col) const { return bits_[col * rows_ + row] != 0; }
  void set(std::size_t row, std::size_t col, bool value = true) { bits_[col * rows_ + row] = value ? 1 : 0; }
  std::size_t count() const;
  std::size_t count_in_column(std::size_t col) const;

  bool operator==(const CellMask&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

// The user-facing table: I individuals described by K typed variables.
class MixedDataset {
 public:
  MixedDataset() = default;
  explicit MixedDataset(std::vector<Column> columns);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::size_t index) const { return columns_.at(index); }
  const Column& column(std::string_view name) const;
  std::optional<std::size_t> find(std::string_view name) const;

  std::size_t count(Kind kind) const;
  std::size_t missing_count() const;
  bool is_complete() const { return missing_count() == 0; }

  // Throws InvalidInput when a categorical column has fewer than two observed
  // categories or a continuous column fewer than two distinct observed values.
  void validate() const;

  MixedDataset with_column(Column column) const;
  MixedDataset select(std::span<const std::string> names) const;
  MixedDataset select(Kind kind) const;

  bool operator==(const MixedDataset&) const = default;

 private:
  std::size_t n_rows_ = 0;
  std::vector<Column> columns_;
};

CellMask missing_mask(const MixedDataset& ds);

// Copy of `ds` with every cell flagged in `mask` set to missing.
MixedDataset apply_mask(const MixedDataset& ds, const CellMask& mask);

}  // namespace famd
