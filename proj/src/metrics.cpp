#include "famd/metrics.hpp"

#include <cmath>

#include "famd/error.hpp"

namespace famd {

namespace {

struct Tally {
  double squared = 0.0;
  std::size_t n_cont = 0;
  std::size_t wrong = 0;
  std::size_t n_cat = 0;
};

double truth_sd(const Column& col) {
  double sum = 0.0;
  double n = 0.0;
  for (const auto& v : col.numbers)
    if (v) {
      sum += *v;
      n += 1.0;
    }
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& v : col.numbers)
    if (v) ss += (*v - mean) * (*v - mean);
  return std::sqrt(ss / n);
}

Tally tally(const MixedDataset& truth, const MixedDataset& imputed, const CellMask& mask) {
  if (mask.rows() != truth.n_rows() || mask.cols() != truth.n_cols())
    throw InvalidInput("mask shape does not match truth dataset");
  if (imputed.n_rows() != truth.n_rows()) throw InvalidInput("imputed and truth datasets differ in row count");

  Tally t;
  for (std::size_t k = 0; k < truth.n_cols(); ++k) {
    const auto& tc = truth.column(k);
    const auto idx = imputed.find(tc.name);
    if (!idx || mask.count_in_column(k) == 0) continue;
    const auto& ic = imputed.column(*idx);
    if (ic.kind != tc.kind) throw InvalidInput("column '" + tc.name + "' changes kind between truth and imputed");

    if (tc.kind == Kind::Continuous) {
      const double sd = truth_sd(tc);
      if (!(sd > 0.0)) throw InvalidInput("constant column: truth column '" + tc.name + "'");
      for (std::size_t i = 0; i < truth.n_rows(); ++i) {
        if (!mask(i, k)) continue;
        if (!tc.numbers[i] || !ic.numbers[i]) throw InvalidInput("scored cell missing in column '" + tc.name + "'");
        const double e = (*tc.numbers[i] - *ic.numbers[i]) / sd;
        t.squared += e * e;
        ++t.n_cont;
      }
    } else {
      for (std::size_t i = 0; i < truth.n_rows(); ++i) {
        if (!mask(i, k)) continue;
        if (!tc.labels[i] || !ic.labels[i]) throw InvalidInput("scored cell missing in column '" + tc.name + "'");
        if (*tc.labels[i] != *ic.labels[i]) ++t.wrong;
        ++t.n_cat;
      }
    }
  }
  return t;
}

}  // namespace

ErrorReport score(const MixedDataset& truth, const MixedDataset& imputed, const CellMask& mask) {
  const auto t = tally(truth, imputed, mask);
  ErrorReport r;
  r.n_scored_cont = t.n_cont;
  r.n_scored_cat = t.n_cat;
  if (t.n_cont > 0) r.nrmse = std::sqrt(t.squared / static_cast<double>(t.n_cont));
  if (t.n_cat > 0) r.pfc = static_cast<double>(t.wrong) / static_cast<double>(t.n_cat);
  return r;
}

double nrmse(const MixedDataset& truth, const MixedDataset& imputed, const CellMask& mask) {
  const auto r = score(truth, imputed, mask);
  if (!r.nrmse) throw InvalidInput("nothing to score: no masked continuous cell");
  return *r.nrmse;
}

double pfc(const MixedDataset& truth, const MixedDataset& imputed, const CellMask& mask) {
  const auto r = score(truth, imputed, mask);
  if (!r.pfc) throw InvalidInput("nothing to score: no masked categorical cell");
  return *r.pfc;
}

}  // namespace famd
