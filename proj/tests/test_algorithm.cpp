#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ped/algorithm.hpp"
#include "ped/rng.hpp"
#include "ped/simulation.hpp"
#include "ped/verification.hpp"

using namespace ped;

namespace {

// Independent normal quantile: bisection on the erfc-based CDF.
double quantile_oracle(double p) {
  double lo = -10.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
    (cdf < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("theoretical lambda") {
  const double expected =
      1.1 * std::pow(200.0, 0.25) / 10.0 * quantile_oracle(1.0 - 0.05 / 400.0);
  CHECK(theoretical_lambda(100, 200, 0.05, 1.1) ==
        doctest::Approx(expected).epsilon(1e-9));
  CHECK(theoretical_lambda(100, 200, 0.05, 1.1) ==
        doctest::Approx(1.51495366).epsilon(1e-6));

  // alpha -> 1 with p = 1 hits the median quantile.
  CHECK(theoretical_lambda(1, 1, 0.999999, 1.0 + 1e-9) ==
        doctest::Approx(0.0).scale(1).epsilon(1e-5));

  // Explicit 1/sqrt(n) dependence.
  CHECK(theoretical_lambda(200, 50, 0.05, 1.1) ==
        doctest::Approx(theoretical_lambda(100, 50, 0.05, 1.1) / std::sqrt(2.0))
            .epsilon(1e-14));
}

TEST_CASE("lambda_F adapts p to the retained size") {
  CHECK(lambda_f(100, 200, 0.05, 1.1) ==
        theoretical_lambda(100, 200, 0.05, 1.1));
  CHECK(lambda_f(100, 1, 0.05, 1.1) ==
        doctest::Approx(1.1 / 10.0 * quantile_oracle(1.0 - 0.025)).epsilon(1e-9));
  CHECK(lambda_f(100, 12, 0.05, 1.1) == doctest::Approx(0.58661352).epsilon(1e-6));
}

TEST_CASE("screening threshold") {
  SUBCASE("exact zeros are always irrelevant") {
    Vector beta(6, 0.0);
    beta[0] = 1.0;
    const auto irr = screen(beta, 0.5, 100);
    CHECK(irr == std::vector<std::size_t>{1, 2, 3, 4, 5});
  }
  SUBCASE("equal magnitudes can screen everything") {
    const Vector beta(4, 0.7);  // relative magnitude 1/2 each
    const auto irr = screen(beta, 6.0, 100);  // threshold 0.6 > 0.5
    CHECK(irr.size() == 4);
  }
  SUBCASE("threshold comparison is strict") {
    // ||beta|| = 5 exactly, relative magnitudes 0.6 and 0.8 exactly.
    const Vector beta{3.0, 4.0};
    // n = 25 and C = 3 give a threshold of exactly 0.6: coordinate 0 sits
    // on the boundary and must be kept.
    CHECK(screen(beta, 3.0, 25).empty());
    // Any C above 3 pushes the threshold past 0.6 and screens it.
    CHECK(screen(beta, 3.0000001, 25) == std::vector<std::size_t>{0});
  }
  SUBCASE("zero vector flags every index") {
    CHECK(screen(Vector(3, 0.0), 1.0, 25).size() == 3);
  }
}

TEST_CASE("aic score") {
  const auto ds = make_full_rank_dataset(20, 3, 77);
  FitResult small, large;
  small.beta = Vector(3, 0.0);
  small.active_set = {};
  // Null fit: n ln(||Y||^2 / n).
  const double expected_null =
      20.0 * std::log(kernels::sum_sq(ds.y) / 20.0);
  CHECK(aic_score(ds, small) == doctest::Approx(expected_null).epsilon(1e-12));

  // Equal residuals, model sizes 3 vs 5 differ by exactly 4.
  FitResult a = small, b = small;
  a.active_set = {0, 1, 2};
  b.active_set = {0, 1, 2, 0, 1};  // size 5 for the df term
  CHECK(aic_score(ds, b) - aic_score(ds, a) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("ped_fit recovers a strong single signal") {
  NormalSampler rng(321);
  RawDataset raw;
  raw.X = Matrix(50, 5);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < 50; ++i) raw.X(i, j) = rng.next();
  raw.y.resize(50);
  for (std::size_t i = 0; i < 50; ++i) raw.y[i] = 5.0 * raw.X(i, 0) + 0.1 * rng.next();
  const auto ds = standardize(raw);

  const auto fit = ped_fit(ds, {});
  CHECK(fit.active_set == std::vector<std::size_t>{0});
  for (std::size_t j = 1; j < 5; ++j) CHECK(fit.beta[j] == 0.0);

  // Exhaustive subset refits confirm column 0 is the unique driver: the
  // single-column OLS residual for column 0 is far below any other.
  Vector resid_norms(5);
  for (std::size_t j = 0; j < 5; ++j) {
    const double b = kernels::dot(ds.X.col(j), ds.y);
    Vector r = ds.y;
    kernels::axpy(-b, ds.X.col(j), r);
    resid_norms[j] = norm2(r);
  }
  for (std::size_t j = 1; j < 5; ++j) CHECK(resid_norms[0] < 0.2 * resid_norms[j]);
}

TEST_CASE("zero response is rejected") {
  auto ds = make_full_rank_dataset(10, 3, 5);
  ds.y.assign(ds.n(), 0.0);
  CHECK_THROWS_AS(ped_fit(ds, {}), DataError);
}

TEST_CASE("selection invariance under response rescaling") {
  // Large n keeps lambda_F small enough that the final fit is nonzero.
  const auto ds = make_full_rank_dataset(200, 6, 87);
  PedConfig cfg;
  cfg.lambda_grid = {0.5};
  cfg.C_grid = {1.0};
  const auto fit = ped_fit(ds, cfg);
  REQUIRE(norm2(fit.beta) > 1.0);

  StandardizedDataset scaled = ds;
  const double s = 3.7;
  for (auto& v : scaled.y) v *= s;
  const auto fit2 = ped_fit(scaled, cfg);

  REQUIRE(fit2.active_set == fit.active_set);
  Vector diff(ds.p());
  for (std::size_t j = 0; j < ds.p(); ++j) diff[j] = fit2.beta[j] - s * fit.beta[j];
  CHECK(norm2(diff) <= 1e-6 * s * norm2(fit.beta));
}

TEST_CASE("screened coordinates are exactly zero") {
  SimulationSpec spec;
  spec.n = 60;
  spec.p = 120;
  spec.rho = 0.5;
  spec.seed = 9;
  spec.replicates = 1;
  const auto ds = standardize(generate_replicate(spec, 0));
  const auto fit = ped_fit(ds, {});
  std::size_t ai = 0;
  for (std::size_t j = 0; j < ds.p(); ++j) {
    if (ai < fit.active_set.size() && fit.active_set[ai] == j) {
      ++ai;
      CHECK(fit.beta[j] != 0.0);
    } else {
      CHECK(fit.beta[j] == 0.0);
    }
  }
}

TEST_CASE("iterative rounds only shrink the retained set") {
  SimulationSpec spec;
  spec.n = 60;
  spec.p = 120;
  spec.rho = 0.9;
  spec.seed = 31;
  spec.replicates = 1;
  const auto ds = standardize(generate_replicate(spec, 0));
  PedConfig cfg;
  cfg.iterative_rounds = 3;
  const auto fit = ped_fit(ds, cfg);
  REQUIRE(fit.screening_history.size() == 4);
  for (std::size_t k = 1; k < fit.screening_history.size(); ++k)
    CHECK(fit.screening_history[k].second <= fit.screening_history[k - 1].second);
}

TEST_CASE("sign consistency on dominant coordinates") {
  SimulationSpec spec;
  spec.n = 80;
  spec.p = 150;
  spec.rho = 0.5;
  spec.seed = 13;
  spec.replicates = 1;
  const auto ds = standardize(generate_replicate(spec, 0));
  PedConfig cfg;
  const auto fit = ped_fit(ds, cfg);
  Vector active;
  for (std::size_t j : fit.active_set) active.push_back(fit.beta[j]);
  const double nb = norm2(active);
  const double threshold = 10.0 * fit.C / std::sqrt(static_cast<double>(ds.n()));
  for (std::size_t j : fit.active_set) {
    if (std::fabs(fit.beta[j]) / nb > threshold)
      CHECK(fit.beta[j] * fit.cosines[j] > 0.0);
  }
}
