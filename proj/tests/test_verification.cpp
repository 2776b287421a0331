#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ped/rng.hpp"
#include "ped/verification.hpp"

using namespace ped;

TEST_CASE("identical columns get identical coefficients") {
  const auto ds = make_duplicate_pair_dataset(40, 6, 1);
  for (double lam : {0.2, 1.0}) CHECK(check_identical_columns(ds, lam, 0, 1));
}

TEST_CASE("duplicated zero-signal columns are both screened to zero") {
  NormalSampler rng(2);
  RawDataset raw;
  raw.X = Matrix(60, 6);
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t i = 0; i < 60; ++i) raw.X(i, j) = rng.next();
  for (std::size_t i = 0; i < 60; ++i) raw.X(i, 5) = raw.X(i, 4);  // dup, no signal
  raw.y.resize(60);
  for (std::size_t i = 0; i < 60; ++i)
    raw.y[i] = 4.0 * raw.X(i, 0) + 3.0 * raw.X(i, 1) + 0.2 * rng.next();
  const auto ds = standardize(raw);
  const auto fit = ped_fit(ds, {});
  CHECK(fit.beta[4] == 0.0);
  CHECK(fit.beta[5] == 0.0);
}

TEST_CASE("grouping bound holds for a highly correlated pair") {
  const auto ds = make_correlated_pair_dataset(60, 0.99, 3);
  const auto rep = check_grouping_bound(ds, 0.5, {{0, 1}});
  REQUIRE(rep.pairs.size() == 1);
  const auto& gp = rep.pairs[0];
  CHECK(gp.pass);
  // Bound shape: (2/0.5) sqrt(2 (1-rho)) for the realized sample correlation.
  CHECK(gp.bound ==
        doctest::Approx((2.0 / 0.5) * std::sqrt(2.0 * (1.0 - gp.rho))).epsilon(1e-12));
}

TEST_CASE("grouping bound across a correlation sweep") {
  for (int inst = 0; inst < 10; ++inst) {
    const double rho = 0.9 + 0.0099 * static_cast<double>(inst * inst) / 10.0;
    const auto ds = make_correlated_pair_dataset(50, rho, 100 + inst);
    CHECK(check_grouping_bound(ds, 0.5, {{0, 1}}).all_pass());
  }
}

TEST_CASE("residual norm converges to OLS as lambda vanishes") {
  const auto ds = make_full_rank_dataset(50, 5, 4);
  CHECK(check_lambda_convergence(ds, {1.0, 0.1, 0.01, 0.001, 1e-4}));
}

TEST_CASE("single-column limit approaches the correlation coefficient") {
  const auto ds = make_full_rank_dataset(30, 1, 6);
  const double target = kernels::dot(ds.X.col(0), ds.y);  // OLS for p = 1
  const auto rep = tight_minimize(ds, 1e-4);
  CHECK(rep.beta_opt[0] == doctest::Approx(target).epsilon(1e-2));
}

TEST_CASE("brute force oracle") {
  const auto ds = make_full_rank_dataset(12, 1, 7);

  SUBCASE("argmin matches the solver on a fine grid") {
    const auto oracle = brute_force_minimize(ds, 0.5, -3.0, 3.0, 6001);
    const auto rep = tight_minimize(ds, 0.5);
    CHECK(std::fabs(oracle.beta[0] - rep.beta_opt[0]) <= 1e-3);
  }

  SUBCASE("huge lambda drives the argmin to zero") {
    const auto oracle = brute_force_minimize(ds, 1e3, -3.0, 3.0, 601);
    CHECK(std::fabs(oracle.beta[0]) <= 1e-8);
  }

  SUBCASE("symmetric design gives a symmetric minimum") {
    // Two identical columns: the oracle minimum is swap-invariant.
    const auto dup = make_duplicate_pair_dataset(12, 2, 8);
    const auto oracle = brute_force_minimize(dup, 0.5, -3.0, 3.0, 201);
    CHECK(oracle.beta[0] == doctest::Approx(oracle.beta[1]).epsilon(1e-12));
  }

  SUBCASE("p > 3 is rejected") {
    const auto big = make_full_rank_dataset(12, 4, 9);
    CHECK_THROWS_AS(brute_force_minimize(big, 0.5, -1.0, 1.0, 11),
                    std::invalid_argument);
  }
}

TEST_CASE("verification suite smoke run") {
  VerifyOptions opts;
  opts.only = {"norms", "identical-columns", "lambda-convergence", "oracle"};
  opts.include_rate_check = false;
  const auto outcomes = run_verification_suite(opts);
  REQUIRE(outcomes.size() == 4);
  for (const auto& o : outcomes) {
    INFO(o.name, ": ", o.detail);
    CHECK(o.pass);
  }
}
