#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "famd/dataset.hpp"
#include "famd/indicator.hpp"

namespace famd {

// Typed CSV: first row column names, second row kinds ("cont" or "cat"),
// then one row per individual. Fields may be double-quoted.
MixedDataset read_typed_csv(std::istream& in, const std::string& na_token = "NA");
MixedDataset read_typed_csv_file(const std::string& path, const std::string& na_token = "NA");

// Continuous values are written with 17 significant digits.
void write_typed_csv(std::ostream& out, const MixedDataset& ds, const std::string& na_token = "NA");
void write_typed_csv_file(const std::string& path, const MixedDataset& ds, const std::string& na_token = "NA");

// Mask CSV: header of column names, then 0/1 per cell (1 = scored/masked).
CellMask read_mask_csv(std::istream& in, const MixedDataset& like);
void write_mask_csv(std::ostream& out, const MixedDataset& like, const CellMask& mask);

// Fuzzy indicator: header "var" or "var=category" per expanded column.
void write_fuzzy_csv(std::ostream& out, const MixedDataset& ds, const FuzzyIndicator& fz);

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no);
std::string quote_csv_field(const std::string& field);

}  // namespace famd
