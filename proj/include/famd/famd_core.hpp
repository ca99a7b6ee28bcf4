#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "famd/dataset.hpp"
#include "famd/indicator.hpp"

namespace famd {

// Diagonal of D_Sigma (population variance per continuous column, proportion
// per dummy column) and the column means of X D_Sigma^{-1/2}.
struct FamdWeights {
  Eigen::VectorXd d_sigma;
  Eigen::VectorXd means;
};

// Truncated SVD of the weighted, centered matrix. `lambda` holds the retained
// squared singular values; `all_lambda` every squared singular value.
struct SvdFactors {
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;
  Eigen::VectorXd lambda;
  Eigen::VectorXd all_lambda;
};

struct FamdModel {
  Eigen::MatrixXd u;       // I x S
  Eigen::MatrixXd v;       // J x S
  Eigen::VectorXd lambda;  // S squared singular values, nonincreasing
  std::size_t rank = 0;
  FamdWeights weights;
  double sigma2 = 0.0;
};

// With proportion_floor == 0 a zero variance or proportion is an error. A
// positive floor clamps every proportion from below instead.
FamdWeights compute_weights(const Eigen::MatrixXd& x, const Layout& layout, double proportion_floor = 0.0);

Eigen::MatrixXd weighted_center(const Eigen::MatrixXd& x, const FamdWeights& weights);

// Requires 1 <= rank <= min(I - 1, J). Each right singular vector is signed so
// that its entry of largest magnitude is positive.
SvdFactors svd_truncated(const Eigen::MatrixXd& z, std::size_t rank);

// Singular values used by the reconstruction: sqrt(lambda) for the plain
// variant, max(lambda - sigma2, 0) / sqrt(lambda) for the regularized one.
Eigen::VectorXd reconstruction_scales(const FamdModel& model, bool regularized);

// (U diag(scales) V^T + M) D_Sigma^{1/2}.
Eigen::MatrixXd reconstruct(const FamdModel& model, bool regularized);

// Mean of eigenvalues rank+1 .. J-K2 (1-based). Missing trailing entries
// count as zero.
double estimate_sigma2(const Eigen::VectorXd& all_lambda, std::size_t rank, std::size_t j, std::size_t k2);

FamdModel fit(const Eigen::MatrixXd& x, const Layout& layout, std::size_t rank);

// Squared FAMD distance between rows i and i2 of a complete dataset.
double famd_distance(const MixedDataset& ds, std::size_t i, std::size_t i2);

// Sum of R^2(x_k, f) over continuous variables plus eta^2(z_k, f) over
// categorical ones.
double link_criterion(const MixedDataset& ds, std::span<const double> f);

// Eigenvalues of the FAMD of a complete dataset (squared singular values / I),
// truncated to the J - K2 nontrivial dimensions.
struct InertiaSummary {
  Eigen::VectorXd eigenvalues;
  double total_inertia = 0.0;  // K1 + sum(q_k - 1)
};
InertiaSummary analyze(const MixedDataset& ds);

}  // namespace famd
