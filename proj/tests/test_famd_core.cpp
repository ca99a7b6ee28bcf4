#include "doctest.h"

#include <cmath>
#include <random>

#include "famd/error.hpp"
#include "famd/famd_core.hpp"
#include "famd/indicator.hpp"
#include "test_support.hpp"

using namespace famd;

namespace {

// Cyclic Jacobi eigenvalues of a symmetric matrix; independent of Eigen's SVD.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
  const auto n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

Layout continuous_layout(std::size_t j) {
  Layout l;
  for (std::size_t c = 0; c < j; ++c) l.blocks.push_back({c, Kind::Continuous, c, 1, {}});
  l.n_continuous = j;
  l.width = j;
  return l;
}

Layout dummy_layout(std::size_t q) {
  Layout l;
  std::vector<std::string> cats;
  for (std::size_t c = 0; c < q; ++c) cats.push_back(std::string(1, static_cast<char>('a' + c)));
  l.blocks.push_back({0, Kind::Categorical, 0, q, cats});
  l.n_categorical = 1;
  l.width = q;
  return l;
}

}  // namespace

TEST_CASE("compute_weights: population variance and proportions") {
  Eigen::MatrixXd x(2, 1);
  x << 0.0, 2.0;
  auto w = compute_weights(x, continuous_layout(1));
  CHECK(w.d_sigma(0) == doctest::Approx(1.0));
  CHECK(w.means(0) == doctest::Approx(1.0));

  Eigen::MatrixXd d(4, 2);
  d << 1, 0, 0, 1, 0, 1, 0, 1;
  auto wd = compute_weights(d, dummy_layout(2));
  CHECK(wd.d_sigma(0) == doctest::Approx(0.25));
  CHECK(1.0 - wd.d_sigma(0) == doctest::Approx(0.75));
  CHECK(wd.means(0) == doctest::Approx(0.5));
  CHECK(wd.means(1) == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("compute_weights: degenerate weights and the proportion floor") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(3, 1, 2.0);
  CHECK_THROWS_AS(compute_weights(x, continuous_layout(1)), NumericalError);

  Eigen::MatrixXd d(3, 2);
  d << 1, 0, 1, 0, 1, 0;
  CHECK_THROWS_AS(compute_weights(d, dummy_layout(2)), NumericalError);
  auto w = compute_weights(d, dummy_layout(2), 0.01);
  CHECK(w.d_sigma(1) == doctest::Approx(0.01));
  CHECK(w.means(1) == doctest::Approx(0.0));
}

TEST_CASE("weighted_center: hand-computed columns and zero means") {
  Eigen::MatrixXd x(2, 1);
  x << 0.0, 2.0;
  auto z = weighted_center(x, compute_weights(x, continuous_layout(1)));
  CHECK(z(0, 0) == doctest::Approx(-1.0));
  CHECK(z(1, 0) == doctest::Approx(1.0));

  Eigen::MatrixXd d(2, 2);
  d << 1, 0, 0, 1;
  auto zd = weighted_center(d, compute_weights(d, dummy_layout(2)));
  CHECK(zd(0, 0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(zd(1, 0) == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-14));

  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 10; ++rep) {
    auto exp = encode(test::random_mixed(rng, 30, 3, 3));
    auto zr = weighted_center(exp.x, compute_weights(exp.x, exp.layout));
    CHECK(zr.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("svd_truncated: diagonal and rank-one inputs") {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 2);
  z(0, 0) = 3.0;
  z(1, 1) = 1.0;
  auto f = svd_truncated(z, 1);
  CHECK(f.lambda(0) == doctest::Approx(9.0));
  CHECK(f.all_lambda(1) == doctest::Approx(1.0));
  CHECK(f.v(0, 0) == doctest::Approx(1.0));  // sign convention

  Eigen::VectorXd u0(4), v0(3);
  u0 << 1, -2, 0.5, 3;
  v0 << -1, 2, 1;
  Eigen::MatrixXd r1 = u0 * v0.transpose();
  auto g = svd_truncated(r1, 1);
  Eigen::MatrixXd back = g.u * g.lambda.cwiseSqrt().asDiagonal() * g.v.transpose();
  CHECK((back - r1).norm() < 1e-12);
  CHECK(g.v(1, 0) > 0.0);  // the entry of largest magnitude
}

TEST_CASE("svd_truncated: full rank round trip against a Jacobi oracle") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd z(6, 5);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = gauss(rng);
  auto f = svd_truncated(z, 5);
  Eigen::MatrixXd back = f.u * f.lambda.cwiseSqrt().asDiagonal() * f.v.transpose();
  CHECK((back - z).cwiseAbs().maxCoeff() < 1e-10);

  const auto oracle = jacobi_eigenvalues(z.transpose() * z);
  for (std::size_t s = 0; s < 5; ++s) CHECK(f.lambda(static_cast<Eigen::Index>(s)) == doctest::Approx(oracle[s]).epsilon(1e-10));

  CHECK((f.u.transpose() * f.u - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-10);
  CHECK((f.v.transpose() * f.v - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-10);
  for (Eigen::Index s = 1; s < 5; ++s) CHECK(f.lambda(s) <= f.lambda(s - 1));
}

TEST_CASE("svd_truncated: invalid requests") {
  Eigen::MatrixXd z = Eigen::MatrixXd::Ones(3, 3);
  CHECK_THROWS_AS(svd_truncated(z, 0), InvalidInput);
  CHECK_THROWS_AS(svd_truncated(z, 3), InvalidInput);
  z(1, 1) = std::nan("");
  CHECK_THROWS_AS(svd_truncated(z, 1), NumericalError);
}

TEST_CASE("estimate_sigma2 averages the trailing eigenvalues") {
  Eigen::VectorXd l(4);
  l << 4, 2, 1, 1;
  CHECK(estimate_sigma2(l, 2, 4, 0) == doctest::Approx(1.0));
  CHECK(estimate_sigma2(l, 2, 6, 2) == doctest::Approx(1.0));
  Eigen::VectorXd zeros(4);
  zeros << 5, 3, 0, 0;
  CHECK(estimate_sigma2(zeros, 2, 4, 0) == 0.0);
  Eigen::VectorXd last(3);
  last << 3, 1, 0.5;
  CHECK(estimate_sigma2(last, 2, 3, 0) == doctest::Approx(0.5));
  // fewer eigenvalues than J - K2: the missing ones count as zero
  Eigen::VectorXd short_l(2);
  short_l << 3, 1;
  CHECK(estimate_sigma2(short_l, 1, 5, 0) == doctest::Approx(0.25));
  CHECK_THROWS_WITH(estimate_sigma2(l, 4, 4, 0), doctest::Contains("no residual dimensions"));
}

TEST_CASE("reconstruct: shrinkage, degeneration and round trip") {
  std::mt19937_64 rng(7);
  auto ds = test::random_mixed(rng, 25, 3, 2, 3);
  auto exp = encode(ds);
  const std::size_t full = exp.layout.width - exp.layout.n_categorical;
  auto model = fit(exp.x, exp.layout, full);

  SUBCASE("full rank plain reproduces X") {
    auto xhat = reconstruct(model, false);
    CHECK((xhat - exp.x).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("sigma2 = 0 makes the regularized variant equal to the plain one") {
    auto m = fit(exp.x, exp.layout, 3);
    m.sigma2 = 0.0;
    CHECK((reconstruct(m, true) - reconstruct(m, false)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("rank 0 gives means and proportions") {
    auto m = model;
    m.rank = 0;
    m.u.resize(exp.x.rows(), 0);
    m.v.resize(exp.x.cols(), 0);
    m.lambda.resize(0);
    auto xhat = reconstruct(m, false);
    const Eigen::RowVectorXd means = exp.x.colwise().mean();
    for (Eigen::Index i = 0; i < xhat.rows(); ++i) CHECK((xhat.row(i) - means).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("shrunk singular values are nonincreasing and bounded by the plain ones") {
    auto m = fit(exp.x, exp.layout, 3);
    REQUIRE(m.sigma2 > 0.0);
    auto shrunk = reconstruction_scales(m, true);
    auto plain = reconstruction_scales(m, false);
    for (Eigen::Index s = 0; s < shrunk.size(); ++s) {
      CHECK(shrunk(s) < plain(s));
      CHECK(shrunk(s) >= 0.0);
      if (s > 0) CHECK(shrunk(s) <= shrunk(s - 1));
    }
  }
  SUBCASE("sigma2 above every eigenvalue clamps to means") {
    auto m = fit(exp.x, exp.layout, 2);
    m.sigma2 = m.lambda(0) * 2.0;
    auto xhat = reconstruct(m, true);
    const Eigen::RowVectorXd means = exp.x.colwise().mean();
    CHECK((xhat.row(0) - means).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("eigenvalues of a complete FAMD sum to the total inertia") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    auto ds = test::random_mixed(rng, 40, 1 + rep % 3, 1 + rep % 4, 5);
    auto summary = analyze(ds);
    double expected = static_cast<double>(ds.count(Kind::Continuous));
    for (const auto& c : ds.columns())
      if (c.kind == Kind::Categorical) expected += static_cast<double>(c.observed_categories().size()) - 1.0;
    CHECK(summary.total_inertia == doctest::Approx(expected));
    CHECK(std::abs(summary.eigenvalues.sum() - expected) < 1e-8);
  }
}

TEST_CASE("famd_distance") {
  MixedDataset ds({Column::continuous("x", {1.0, 1.0, 2.0, 3.0}), Column::categorical("z", {"a", "b", "a", "c"}),
                   Column::categorical("y", {"u", "u", "v", "v"})});
  CHECK(famd_distance(ds, 2, 2) == 0.0);
  // rows 0 and 1 differ only on z: p_a = 0.5, p_b = 0.25
  CHECK(famd_distance(ds, 0, 1) == doctest::Approx(1.0 / 0.5 + 1.0 / 0.25));
  CHECK(famd_distance(ds, 0, 3) == doctest::Approx(famd_distance(ds, 3, 0)));

  MixedDataset gap({Column::continuous("x", {1.0, std::nullopt, 2.0})});
  CHECK_THROWS_AS(famd_distance(gap, 0, 2), InvalidInput);
}

TEST_CASE("famd_distance is invariant to rescaling a continuous variable") {
  std::mt19937_64 rng(21);
  auto ds = test::random_mixed(rng, 20, 2, 2);
  auto cols = ds.columns();
  for (auto& v : cols[0].numbers) *v *= 37.5;
  MixedDataset scaled(cols);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t i2 = i + 1; i2 < 8; ++i2)
      CHECK(famd_distance(ds, i, i2) == doctest::Approx(famd_distance(scaled, i, i2)).epsilon(1e-12));
}

TEST_CASE("link_criterion basic values") {
  MixedDataset cont({Column::continuous("x", {1.0, 4.0, 2.0, 8.0})});
  std::vector<double> f{1.0, 4.0, 2.0, 8.0};
  CHECK(link_criterion(cont, f) == doctest::Approx(1.0));

  MixedDataset cat({Column::categorical("z", {"a", "b", "a", "b"})});
  std::vector<double> g{-1.0, 3.0, -1.0, 3.0};
  CHECK(link_criterion(cat, g) == doctest::Approx(1.0));

  std::vector<double> constant(4, 2.0);
  CHECK_THROWS_AS(link_criterion(cont, constant), InvalidInput);
}

TEST_CASE("first principal component maximizes the link criterion") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  // Correlated mixed data so the first dimension is well separated.
  const std::size_t n = 60;
  std::vector<double> latent(n);
  for (auto& l : latent) l = gauss(rng);
  std::vector<std::optional<double>> x1(n), x2(n);
  std::vector<std::optional<std::string>> z1(n), z2(n);
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = latent[i] + 0.5 * gauss(rng);
    x2[i] = latent[i] + 0.8 * gauss(rng);
    z1[i] = latent[i] + 0.5 * gauss(rng) > 0 ? "hi" : "lo";
    const double t = latent[i] + gauss(rng);
    z2[i] = t < -0.5 ? "a" : (t < 0.5 ? "b" : "c");
  }
  MixedDataset ds({Column::continuous("x1", x1), Column::continuous("x2", x2), Column::categorical("z1", z1),
                   Column::categorical("z2", z2)});
  auto exp = encode(ds);
  auto model = fit(exp.x, exp.layout, 1);
  std::vector<double> pc(n);
  for (std::size_t i = 0; i < n; ++i) pc[i] = model.u(static_cast<Eigen::Index>(i), 0) * std::sqrt(model.lambda(0));
  const double best = link_criterion(ds, pc);
  CHECK(best == doctest::Approx(model.lambda(0) / static_cast<double>(n)).epsilon(1e-9));

  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> r(n);
    for (auto& v : r) v = gauss(rng);
    CHECK(link_criterion(ds, r) <= best + 1e-12);
  }
  // also beats each original standardized variable
  for (const auto& col : {x1, x2}) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = *col[i];
    CHECK(link_criterion(ds, v) <= best + 1e-12);
  }
}
