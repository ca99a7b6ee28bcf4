#include "famd/famd_core.hpp"

#include <algorithm>
#include <cmath>

#include "famd/error.hpp"

namespace famd {

namespace {

double population_variance(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double mean = v.mean();
  return (v.array() - mean).square().mean();
}

}  // namespace

FamdWeights compute_weights(const Eigen::MatrixXd& x, const Layout& layout, double proportion_floor) {
  if (x.cols() != static_cast<Eigen::Index>(layout.width)) throw InvalidInput("matrix width does not match layout");
  if (x.rows() == 0) throw InvalidInput("empty matrix");
  FamdWeights w;
  w.d_sigma.resize(x.cols());
  w.means.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    double d;
    if (!layout.is_dummy(static_cast<std::size_t>(j))) {
      d = population_variance(x.col(j));
    } else {
      d = proportion_floor > 0.0 ? std::max(mean, proportion_floor) : mean;
    }
    if (!(d > 0.0) || !std::isfinite(d))
      throw NumericalError("degenerate weight in expanded column " + std::to_string(j));
    w.d_sigma(j) = d;
    w.means(j) = mean / std::sqrt(d);
  }
  return w;
}

Eigen::MatrixXd weighted_center(const Eigen::MatrixXd& x, const FamdWeights& weights) {
  const Eigen::RowVectorXd inv_sd = weights.d_sigma.array().rsqrt().transpose();
  Eigen::MatrixXd z = x.array().rowwise() * inv_sd.array();
  z.rowwise() -= weights.means.transpose();
  return z;
}

SvdFactors svd_truncated(const Eigen::MatrixXd& z, std::size_t rank) {
  if (!z.allFinite()) throw NumericalError("non-finite entries in SVD input");
  const auto max_rank = static_cast<std::size_t>(std::min(z.rows() - 1, z.cols()));
  if (rank < 1 || z.rows() < 1 || rank > max_rank)
    throw InvalidInput("SVD rank " + std::to_string(rank) + " outside [1, " + std::to_string(max_rank) + "]");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto s = static_cast<Eigen::Index>(rank);
  SvdFactors out;
  out.all_lambda = svd.singularValues().array().square();
  out.lambda = out.all_lambda.head(s);
  out.u = svd.matrixU().leftCols(s);
  out.v = svd.matrixV().leftCols(s);
  for (Eigen::Index c = 0; c < s; ++c) {
    Eigen::Index arg;
    out.v.col(c).cwiseAbs().maxCoeff(&arg);
    if (out.v(arg, c) < 0.0) {
      out.v.col(c) *= -1.0;
      out.u.col(c) *= -1.0;
    }
  }
  return out;
}

Eigen::VectorXd reconstruction_scales(const FamdModel& model, bool regularized) {
  Eigen::VectorXd scales(model.lambda.size());
  for (Eigen::Index s = 0; s < model.lambda.size(); ++s) {
    const double lambda = model.lambda(s);
    if (!regularized) {
      scales(s) = std::sqrt(lambda);
    } else {
      scales(s) = lambda > model.sigma2 ? (lambda - model.sigma2) / std::sqrt(lambda) : 0.0;
    }
  }
  return scales;
}

Eigen::MatrixXd reconstruct(const FamdModel& model, bool regularized) {
  const auto n = model.u.rows();
  const auto width = model.weights.d_sigma.size();
  Eigen::MatrixXd xhat;
  if (model.rank == 0) {
    xhat = Eigen::MatrixXd::Zero(n, width);
  } else {
    xhat = model.u * reconstruction_scales(model, regularized).asDiagonal() * model.v.transpose();
  }
  xhat.rowwise() += model.weights.means.transpose();
  xhat.array().rowwise() *= model.weights.d_sigma.array().sqrt().transpose();
  return xhat;
}

double estimate_sigma2(const Eigen::VectorXd& all_lambda, std::size_t rank, std::size_t j, std::size_t k2) {
  if (k2 > j || rank >= j - k2) throw InvalidInput("no residual dimensions to estimate the noise variance");
  const std::size_t nontrivial = j - k2;
  double sum = 0.0;
  for (std::size_t s = rank; s < nontrivial && s < static_cast<std::size_t>(all_lambda.size()); ++s)
    sum += all_lambda(static_cast<Eigen::Index>(s));
  return sum / static_cast<double>(nontrivial - rank);
}

FamdModel fit(const Eigen::MatrixXd& x, const Layout& layout, std::size_t rank) {
  FamdModel model;
  model.weights = compute_weights(x, layout);
  const Eigen::MatrixXd z = weighted_center(x, model.weights);
  auto f = svd_truncated(z, rank);
  model.u = std::move(f.u);
  model.v = std::move(f.v);
  model.lambda = std::move(f.lambda);
  model.rank = rank;
  if (rank < layout.width - layout.n_categorical)
    model.sigma2 = estimate_sigma2(f.all_lambda, rank, layout.width, layout.n_categorical);
  return model;
}

double famd_distance(const MixedDataset& ds, std::size_t i, std::size_t i2) {
  if (!ds.is_complete()) throw InvalidInput("distance requires a complete dataset");
  if (i >= ds.n_rows() || i2 >= ds.n_rows()) throw InvalidInput("row index out of range");
  const auto exp = encode(ds);
  const auto w = compute_weights(exp.x, exp.layout);
  const Eigen::VectorXd diff = (exp.x.row(static_cast<Eigen::Index>(i)) - exp.x.row(static_cast<Eigen::Index>(i2))).transpose();
  return (diff.array().square() / w.d_sigma.array()).sum();
}

double link_criterion(const MixedDataset& ds, std::span<const double> f) {
  if (f.size() != ds.n_rows()) throw InvalidInput("score vector length does not match dataset");
  if (!ds.is_complete()) throw InvalidInput("link criterion requires a complete dataset");
  const Eigen::Map<const Eigen::VectorXd> fv(f.data(), static_cast<Eigen::Index>(f.size()));
  const double f_mean = fv.mean();
  const Eigen::VectorXd fc = fv.array() - f_mean;
  const double f_var = fc.squaredNorm() / static_cast<double>(f.size());
  if (!(f_var > 0.0)) throw InvalidInput("constant score vector");

  double total = 0.0;
  for (const auto& col : ds.columns()) {
    if (col.kind == Kind::Continuous) {
      Eigen::VectorXd x(fc.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = *col.numbers[static_cast<std::size_t>(i)];
      x.array() -= x.mean();
      const double sxx = x.squaredNorm();
      if (!(sxx > 0.0)) throw InvalidInput("constant column: '" + col.name + "'");
      const double sxf = x.dot(fc);
      total += sxf * sxf / (sxx * fc.squaredNorm());
    } else {
      const auto cats = col.observed_categories();
      std::vector<double> sums(cats.size(), 0.0);
      std::vector<double> counts(cats.size(), 0.0);
      for (std::size_t i = 0; i < col.labels.size(); ++i) {
        auto k = static_cast<std::size_t>(std::lower_bound(cats.begin(), cats.end(), *col.labels[i]) - cats.begin());
        sums[k] += fv(static_cast<Eigen::Index>(i));
        counts[k] += 1.0;
      }
      double between = 0.0;
      for (std::size_t k = 0; k < cats.size(); ++k) {
        const double dev = sums[k] / counts[k] - f_mean;
        between += counts[k] * dev * dev;
      }
      total += between / fc.squaredNorm();
    }
  }
  return total;
}

InertiaSummary analyze(const MixedDataset& ds) {
  if (!ds.is_complete()) throw InvalidInput("analysis requires a complete dataset");
  const auto exp = encode(ds);
  const auto w = compute_weights(exp.x, exp.layout);
  const Eigen::MatrixXd z = weighted_center(exp.x, w);
  if (!z.allFinite()) throw NumericalError("non-finite entries in weighted matrix");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(z);
  const Eigen::VectorXd sv2 = svd.singularValues().array().square() / static_cast<double>(ds.n_rows());

  InertiaSummary out;
  const auto nontrivial = static_cast<Eigen::Index>(exp.layout.width - exp.layout.n_categorical);
  out.eigenvalues = Eigen::VectorXd::Zero(nontrivial);
  const auto available = std::min(nontrivial, sv2.size());
  out.eigenvalues.head(available) = sv2.head(available);
  out.total_inertia = static_cast<double>(exp.layout.n_continuous);
  for (const auto& b : exp.layout.blocks)
    if (b.kind == Kind::Categorical) out.total_inertia += static_cast<double>(b.width) - 1.0;
  return out;
}

}  // namespace famd
