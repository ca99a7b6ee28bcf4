#include "famd/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "famd/error.hpp"
#include "famd/preprocess.hpp"

namespace famd {

namespace {

std::string letter_label(std::size_t index) { return std::string(1, static_cast<char>('a' + index)); }

std::vector<std::optional<std::string>> equal_count_labels(const std::vector<double>& values, std::size_t q) {
  const auto edges = equal_count_edges(values, q);
  std::vector<std::optional<std::string>> labels(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) labels[i] = letter_label(bin_index(edges, values[i]));
  return labels;
}

bool column_usable(const Column& c) {
  return c.kind == Kind::Categorical ? c.observed_categories().size() >= 2 : c.distinct_value_count() >= 2;
}

}  // namespace

MixedDataset gen_toy(const ToySpec& spec) {
  if (spec.groups.empty()) throw InvalidInput("toy design needs at least one latent dimension");
  if (!(spec.snr > 0.0)) throw InvalidInput("snr must be positive");
  for (const auto& g : spec.groups) {
    if (g.n_continuous + g.n_categorical == 0) throw InvalidInput("empty variable group");
    if (g.n_categorical > 0 && g.q < 2) throw InvalidInput("categorical members need q >= 2");
    if (g.n_categorical > 0 && spec.n < g.q) throw InvalidInput("fewer individuals than categories");
  }

  Rng rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double noise_sd = std::isinf(spec.snr) ? 0.0 : 1.0 / spec.snr;

  std::vector<std::vector<double>> latent(spec.groups.size(), std::vector<double>(spec.n));
  for (auto& l : latent)
    for (auto& v : l) v = gauss(rng);

  auto noisy_copy = [&](const std::vector<double>& base) {
    std::vector<double> out(base);
    for (auto& v : out) v += noise_sd * gauss(rng);
    return out;
  };

  std::vector<Column> cols;
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    const auto& group = spec.groups[g];
    const std::string prefix = "g" + std::to_string(g + 1) + ".";
    for (std::size_t k = 0; k < group.n_continuous; ++k) {
      auto values = noisy_copy(latent[g]);
      cols.push_back(Column::continuous(prefix + "x" + std::to_string(k + 1), {values.begin(), values.end()}));
    }
    for (std::size_t k = 0; k < group.n_categorical; ++k)
      cols.push_back(Column::categorical(prefix + "z" + std::to_string(k + 1),
                                         equal_count_labels(noisy_copy(latent[g]), group.q)));
  }
  return MixedDataset(std::move(cols));
}

ToySpec strategy_toy_spec(std::size_t n, double snr, std::uint64_t seed) {
  return ToySpec{{{2, 2, 4}, {2, 2, 4}}, n, snr, seed};
}

ToySpec dimension_toy_spec(std::size_t n, double snr, std::uint64_t seed) {
  return ToySpec{{{4, 4, 3}, {2, 2, 3}}, n, snr, seed};
}

std::size_t mcar_cell_count(const MixedDataset& ds, double fraction) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ds.n_rows() * ds.n_cols())));
}

CellMask draw_mcar_mask(const MixedDataset& ds, const MaskSpec& spec) {
  if (!(spec.fraction >= 0.0 && spec.fraction < 1.0)) throw InvalidInput("mask fraction must lie in [0, 1)");
  const std::size_t rows = ds.n_rows();
  const std::size_t total = rows * ds.n_cols();
  const std::size_t count = mcar_cell_count(ds, spec.fraction);

  Rng rng(spec.seed);
  std::vector<std::size_t> cells(total);
  for (std::size_t attempt = 0; attempt <= spec.max_retries; ++attempt) {
    std::iota(cells.begin(), cells.end(), std::size_t{0});
    // Partial Fisher-Yates: the first `count` entries are a uniform sample.
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, total - 1);
      std::swap(cells[i], cells[pick(rng)]);
    }
    CellMask mask(rows, ds.n_cols());
    for (std::size_t i = 0; i < count; ++i) mask.set(cells[i] % rows, cells[i] / rows);

    const auto masked = apply_mask(ds, mask);
    if (std::all_of(masked.columns().begin(), masked.columns().end(), column_usable)) return mask;
  }
  throw InvalidInput("infeasible mask fraction: every draw left a column without usable observed data");
}

MixedDataset mcar_mask(const MixedDataset& ds, const MaskSpec& spec) { return apply_mask(ds, draw_mcar_mask(ds, spec)); }

RareSample gen_rare(const RareSpec& spec) {
  const double expected = static_cast<double>(spec.n) * spec.f;
  if (!(spec.f > 0.0 && spec.f < 1.0) || expected < 1.0) throw InvalidInput("rare design needs n * f >= 1");
  const auto n_rare = static_cast<std::size_t>(std::llround(expected));
  if (n_rare + 2 > spec.n) throw InvalidInput("rare design leaves no room for the common categories");

  Rng rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::size_t> order(spec.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> rare(spec.n, false);
  for (std::size_t r = 0; r < n_rare; ++r) rare[order[r]] = true;

  std::vector<double> latent(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) latent[i] = gauss(rng) + (rare[i] ? spec.rare_shift : 0.0);
  auto noisy = [&] {
    std::vector<double> v(latent);
    for (auto& x : v) x += spec.noise_sd * gauss(rng);
    return v;
  };

  std::vector<std::optional<double>> x1, x2;
  for (double v : noisy()) x1.emplace_back(v);
  for (double v : noisy()) x2.emplace_back(v);
  auto z1 = equal_count_labels(noisy(), 3);

  // Common individuals of z2 and z3 are split at the median of a noisy latent copy.
  auto rare_variable = [&] {
    const auto v = noisy();
    std::vector<double> common;
    for (std::size_t i = 0; i < spec.n; ++i)
      if (!rare[i]) common.push_back(v[i]);
    const auto edges = equal_count_edges(common, 2);
    std::vector<std::optional<std::string>> z(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) z[i] = rare[i] ? "r" : letter_label(bin_index(edges, v[i]));
    return z;
  };
  auto z2 = rare_variable();
  auto z3 = rare_variable();

  RareSample out;
  out.truth = MixedDataset({Column::continuous("x1", std::move(x1)), Column::continuous("x2", std::move(x2)),
                            Column::categorical("z1", std::move(z1)), Column::categorical("z2", std::move(z2)),
                            Column::categorical("z3", std::move(z3))});
  std::uniform_int_distribution<std::size_t> pick_rare(0, n_rare - 1);
  std::uniform_int_distribution<std::size_t> pick_var(0, 1);
  out.row = order[pick_rare(rng)];
  out.col = 3 + pick_var(rng);
  CellMask mask(spec.n, out.truth.n_cols());
  mask.set(out.row, out.col);
  out.masked = apply_mask(out.truth, mask);
  return out;
}

MixedDataset gen_factorial(std::size_t replicates) {
  if (replicates < 1) throw InvalidInput("factorial design needs at least one replicate");
  std::vector<std::optional<std::string>> x1, x2;
  std::vector<std::optional<double>> x3;
  for (std::size_t r = 0; r < replicates; ++r)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t a = 0; a < 3; ++a) {
        x1.emplace_back(letter_label(a));
        x2.emplace_back(letter_label(b));
        x3.emplace_back(static_cast<double>((a + b) % 3 + 1));
      }
  return MixedDataset({Column::categorical("x1", std::move(x1)), Column::categorical("x2", std::move(x2)),
                       Column::continuous("x3", std::move(x3))});
}

}  // namespace famd
