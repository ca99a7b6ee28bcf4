#include "doctest.h"

#include <random>

#include "famd/error.hpp"
#include "famd/famd_core.hpp"
#include "famd/imputer.hpp"
#include "famd/simgen.hpp"
#include "test_support.hpp"

using namespace famd;

namespace {

void check_blocks_sum_to_one(const FuzzyIndicator& fz, double tol = 1e-8) {
  for (const auto& b : fz.layout.blocks) {
    if (b.kind != Kind::Categorical) continue;
    const auto first = static_cast<Eigen::Index>(b.first);
    const auto width = static_cast<Eigen::Index>(b.width);
    for (Eigen::Index i = 0; i < fz.values.rows(); ++i)
      CHECK(std::abs(fz.values.row(i).segment(first, width).sum() - 1.0) < tol);
  }
}

}  // namespace

TEST_CASE("initialize fills means and observed proportions") {
  MixedDataset ds({Column::continuous("x", {1.0, std::nullopt, 3.0, 2.0, 2.0}),
                   Column::categorical("z", {"a", "a", "b", "a", std::nullopt})});
  auto exp = encode(ds);
  auto x0 = initialize(exp);
  CHECK(x0(1, 0) == doctest::Approx(2.0));
  CHECK(x0(4, 1) == doctest::Approx(0.75));
  CHECK(x0(4, 2) == doctest::Approx(0.25));
  CHECK(x0(0, 1) == 1.0);

  std::mt19937_64 rng(2);
  auto complete = encode(test::random_mixed(rng, 10, 2, 2));
  CHECK(initialize(complete) == complete.x);
}

TEST_CASE("initialize errors on a column without observed data") {
  MixedDataset ds({Column::continuous("x", {1.0, 2.0, 3.0}), Column::categorical("z", {"a", "b", "a"})});
  auto exp = encode(ds);
  exp.w.col(0).setZero();
  CHECK_THROWS_WITH(initialize(exp), doctest::Contains("no observed data"));
}

TEST_CASE("complete dataset is returned unchanged after one iteration") {
  std::mt19937_64 rng(4);
  auto ds = test::random_mixed(rng, 20, 2, 2);
  auto r = impute(ds, ImputeConfig{});
  CHECK(r.completed == ds);
  CHECK(r.iterations == 1);
  CHECK(r.converged);
}

TEST_CASE("duplicated column: the masked cell is recovered exactly") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss;
  std::vector<std::optional<double>> a(30);
  for (auto& v : a) v = gauss(rng);
  auto b = a;
  const double truth = *b[7];
  b[7].reset();
  MixedDataset ds({Column::continuous("a", a), Column::continuous("b", b)});
  ImputeConfig cfg;
  cfg.ncp = 1;
  cfg.regularized = false;
  cfg.epsilon = 1e-18;
  cfg.max_iter = 100000;
  auto r = impute(ds, cfg);
  CHECK(r.converged);
  CHECK(std::abs(*r.completed.column("b").numbers[7] - truth) <= 1e-6);
}

TEST_CASE("overwhelming noise variance reduces to mean and proportion imputation") {
  auto truth = gen_toy(strategy_toy_spec(60, 2.0, 3));
  auto ds = mcar_mask(truth, {0.2, 5});
  ImputeConfig cfg;
  cfg.fixed_sigma2 = 1e12;
  auto r = impute(ds, cfg);
  auto exp = encode(ds);
  auto x0 = initialize(exp);
  CHECK((r.fuzzy.values - x0).cwiseAbs().maxCoeff() < 1e-10);
  const auto marginal = impute_marginal(ds);
  for (std::size_t k = 0; k < ds.n_cols(); ++k) {
    const auto& got = r.completed.column(k);
    const auto& want = marginal.column(k);
    if (got.kind == Kind::Categorical) {
      CHECK(got.labels == want.labels);
      continue;
    }
    for (std::size_t i = 0; i < ds.n_rows(); ++i) CHECK(std::abs(*got.numbers[i] - *want.numbers[i]) < 1e-10);
  }
}

TEST_CASE("observed entries are preserved bitwise and blocks sum to one") {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 10; ++rep) {
    auto truth = test::random_mixed(rng, 40, 3, 3);
    auto ds = mcar_mask(truth, {0.2, static_cast<std::uint64_t>(rep)});
    auto exp = encode(ds);
    for (std::size_t iters : {1, 3, 50}) {
      ImputeConfig cfg;
      cfg.ncp = 2;
      cfg.max_iter = iters;
      auto r = impute(ds, cfg);
      CHECK(((exp.w.array() > 0).select(r.fuzzy.values, exp.x).array() == exp.x.array()).all());
      check_blocks_sum_to_one(r.fuzzy);
      CHECK(std::isfinite(r.final_change));
      for (std::size_t k = 0; k < ds.n_cols(); ++k) {
        const auto& in = ds.column(k);
        const auto& out = r.completed.column(k);
        for (std::size_t i = 0; i < ds.n_rows(); ++i) {
          if (in.is_missing(i)) continue;
          if (in.kind == Kind::Continuous)
            CHECK(out.numbers[i] == in.numbers[i]);
          else
            CHECK(out.labels[i] == in.labels[i]);
        }
      }
    }
  }
}

TEST_CASE("one plain iteration equals the core reconstruction on the initial weights") {
  std::mt19937_64 rng(12);
  auto truth = test::random_mixed(rng, 30, 3, 2);
  auto ds = mcar_mask(truth, {0.15, 3});
  auto exp = encode(ds);
  ImputeConfig cfg;
  cfg.ncp = 2;
  cfg.regularized = false;
  cfg.max_iter = 1;
  auto r = impute(ds, cfg);
  CHECK_FALSE(r.converged);

  const auto x0 = initialize(exp);
  const auto model = fit(x0, exp.layout, 2);
  const auto xhat = reconstruct(model, false);
  const Eigen::MatrixXd expected = (exp.w.array() > 0).select(exp.x, xhat);
  CHECK((r.fuzzy.values - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("imputation is deterministic and traces every iteration") {
  auto ds = mcar_mask(gen_toy(strategy_toy_spec(50, 3.0, 1)), {0.2, 2});
  std::vector<IterationTrace> trace;
  ImputeConfig cfg;
  auto a = impute(ds, cfg, [&](const IterationTrace& t) { trace.push_back(t); });
  auto b = impute(ds, cfg);
  CHECK(a.completed == b.completed);
  CHECK(a.fuzzy.values == b.fuzzy.values);
  REQUIRE(trace.size() == a.iterations);
  CHECK(trace.back().change == a.final_change);
  CHECK(a.final_change <= cfg.epsilon);
  CHECK(trace.front().sigma2 > 0.0);
}

TEST_CASE("configuration errors") {
  auto ds = mcar_mask(gen_toy(strategy_toy_spec(30, 3.0, 1)), {0.1, 2});
  // J = 4 + 4 * 4 = 20, K2 = 4: 16 nontrivial dimensions
  ImputeConfig cfg;
  cfg.ncp = 16;
  CHECK_THROWS_AS(impute(ds, cfg), InvalidInput);  // regularized needs a residual dimension
  cfg.regularized = false;
  CHECK_NOTHROW(impute(ds, cfg));
  cfg.ncp = 17;
  CHECK_THROWS_AS(impute(ds, cfg), InvalidInput);
  cfg.ncp = 0;
  CHECK_THROWS_AS(impute(ds, cfg), InvalidInput);
  cfg = ImputeConfig{};
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(impute(ds, cfg), InvalidInput);
}

TEST_CASE("iteration cap yields a non-converged result") {
  auto ds = mcar_mask(gen_toy(strategy_toy_spec(50, 3.0, 4)), {0.3, 2});
  ImputeConfig cfg;
  cfg.max_iter = 2;
  auto r = impute(ds, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
  CHECK(r.completed.missing_count() == 0);
}

TEST_CASE("impute_subset restricts the fitted variables") {
  auto truth = gen_toy(strategy_toy_spec(50, 3.0, 6));
  auto ds = mcar_mask(truth, {0.1, 1});
  ImputeConfig cfg;

  auto cont_only = ds.select(Kind::Continuous);
  CHECK(impute_subset(cont_only, cfg, VariableSubset::Both).completed ==
        impute_subset(cont_only, cfg, VariableSubset::Continuous).completed);

  auto cat = impute_subset(ds, cfg, VariableSubset::Categorical);
  CHECK(cat.completed.count(Kind::Continuous) == 0);
  CHECK(cat.completed.n_cols() == 4);
  CHECK(cat.completed == impute(ds.select(Kind::Categorical), cfg).completed);

  CHECK_THROWS_AS(impute_subset(cont_only, cfg, VariableSubset::Categorical), InvalidInput);
}

TEST_CASE("noiseless low-rank data: regularized and plain variants agree") {
  auto truth = test::low_rank_continuous(60, 8, 2, 21);
  auto ds = mcar_mask(truth, {0.1, 4});
  ImputeConfig cfg;
  cfg.ncp = 2;
  cfg.epsilon = 1e-24;
  cfg.max_iter = 20000;
  auto regularized = impute(ds, cfg);
  cfg.regularized = false;
  auto plain = impute(ds, cfg);
  CHECK((regularized.fuzzy.values - plain.fuzzy.values).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((plain.fuzzy.values - encode(truth).x).cwiseAbs().maxCoeff() < 1e-6);
}
