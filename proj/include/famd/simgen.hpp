#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "famd/dataset.hpp"

namespace famd {

using Rng = std::mt19937_64;

// Variables built from one latent Gaussian dimension.
struct GroupSpec {
  std::size_t n_continuous = 0;
  std::size_t n_categorical = 0;
  std::size_t q = 3;  // categories per categorical member
};

struct ToySpec {
  std::vector<GroupSpec> groups;  // one per latent dimension (S')
  std::size_t n = 100;
  double snr = 3.0;  // latent sd / noise sd; infinity means noiseless
  std::uint64_t seed = 0;
};

// Column names are "g<group>.x<k>" (continuous) and "g<group>.z<k>"
// (categorical, labels "a", "b", ...), 1-based.
MixedDataset gen_toy(const ToySpec& spec);

// Two latent dimensions, each with 2 continuous and 2 four-category variables.
ToySpec strategy_toy_spec(std::size_t n, double snr, std::uint64_t seed);

// Two latent dimensions: 4 continuous + 4 categorical, then 2 + 2, all
// categorical variables with 3 categories.
ToySpec dimension_toy_spec(std::size_t n, double snr, std::uint64_t seed);

struct MaskSpec {
  double fraction = 0.1;
  std::uint64_t seed = 0;
  std::size_t max_retries = 100;
};

// Number of cells mcar_mask removes: round(fraction * I * K).
std::size_t mcar_cell_count(const MixedDataset& ds, double fraction);

// Draws round(fraction * I * K) distinct cells uniformly; redraws when a
// column would be left unusable (fewer than two observed categories or
// distinct values).
CellMask draw_mcar_mask(const MixedDataset& ds, const MaskSpec& spec);
MixedDataset mcar_mask(const MixedDataset& ds, const MaskSpec& spec);

// Rare-category design: z1 balanced over three categories; z2 and z3 take the
// rare category "r" on the same round(n f) individuals and split the rest
// evenly between "a" and "b"; x1 and x2 are Gaussian and shifted by
// `rare_shift` for the rare individuals. One rare cell of z2 or z3 is then
// deleted.
struct RareSample {
  MixedDataset truth;
  MixedDataset masked;
  std::size_t row = 0;
  std::size_t col = 0;
};

struct RareSpec {
  std::size_t n = 1000;
  double f = 0.01;
  double rare_shift = 2.0;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
};

RareSample gen_rare(const RareSpec& spec);

// The 3^{3-1} fractional factorial design (x1, x2 in {a,b,c}, x3 in {1,2,3}
// with x3 = (x1 + x2) mod 3 + 1 on 0-based levels) stacked `replicates` times.
MixedDataset gen_factorial(std::size_t replicates);

}  // namespace famd
