#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "famd/dataset.hpp"

namespace famd {

// Upper edges of `q` equal-count bins over `observed` (size q - 1). A value v
// belongs to the first bin whose edge is >= v, so ties at an edge go low.
std::vector<double> equal_count_edges(std::vector<double> observed, std::size_t q);
std::size_t bin_index(const std::vector<double>& edges, double value);

// Appends "<col>_bin" holding quantile bins "q1".."q<q>" of `col`.
MixedDataset bin_continuous(const MixedDataset& ds, const std::string& col, std::size_t q);

// Appends "<a>.<b>" whose label is label(a) followed by label(b).
MixedDataset add_interaction(const MixedDataset& ds, const std::string& a, const std::string& b);

}  // namespace famd
