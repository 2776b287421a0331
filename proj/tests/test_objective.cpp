#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ped/objective.hpp"
#include "ped/rng.hpp"
#include "ped/verification.hpp"

using namespace ped;

namespace {

Vector random_vec(std::size_t p, std::uint64_t seed) {
  NormalSampler rng(seed);
  Vector v(p);
  for (auto& x : v) x = rng.next();
  return v;
}

}  // namespace

TEST_CASE("geometric mean norm") {
  CHECK(geometric_mean_norm(Vector{0, 0, 0}) == 0.0);
  // 1-sparse: penalty collapses to the absolute value (LASSO-like).
  CHECK(geometric_mean_norm(Vector{-2.5, 0, 0, 0}) == doctest::Approx(2.5));
  CHECK(geometric_mean_norm(Vector{1, 1}) == doctest::Approx(1.6817928305074292));
}

TEST_CASE("norm axioms hold on random vectors") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t p = 1 + seed % 12;
    const Vector a = random_vec(p, seed);
    const Vector b = random_vec(p, seed + 1000);
    const double c = -3.0 + 0.02 * static_cast<double>(seed);

    Vector ca(p), apb(p);
    for (std::size_t j = 0; j < p; ++j) {
      ca[j] = c * a[j];
      apb[j] = a[j] + b[j];
    }
    const double na = geometric_mean_norm(a);
    CHECK(geometric_mean_norm(ca) ==
          doctest::Approx(std::fabs(c) * na).epsilon(1e-12));
    CHECK(geometric_mean_norm(apb) <= na + geometric_mean_norm(b) + 1e-12);
    CHECK(norm2(a) <= na + 1e-12);
    CHECK(na <= norm1(a) + 1e-12);
    if (norm1(a) > 0.0) CHECK(na > 0.0);
  }
}

TEST_CASE("k_hat") {
  CHECK(k_hat(Vector{0, 3.0, 0}) == doctest::Approx(1.0));
  const std::size_t p = 9;
  CHECK(k_hat(Vector(p, 0.7)) ==
        doctest::Approx(std::pow(static_cast<double>(p), -0.25)).epsilon(1e-12));
  const Vector v = random_vec(7, 3);
  const double k = k_hat(v);
  CHECK(k >= std::pow(7.0, -0.25) - 1e-12);
  CHECK(k <= 1.0 + 1e-12);
  CHECK_THROWS_AS(k_hat(Vector{0, 0}), std::domain_error);
}

TEST_CASE("ped objective parts") {
  const auto ds = make_full_rank_dataset(10, 4, 99);

  SUBCASE("beta = 0 gives the response norm") {
    const auto parts = ped_objective(ds, Vector(4, 0.0), 0.7);
    CHECK(parts.objective == doctest::Approx(norm2(ds.y)).epsilon(1e-12));
    CHECK(parts.penalty_norm == 0.0);
    CHECK_FALSE(parts.k_hat.has_value());
  }

  SUBCASE("lambda = 0 drops the penalty") {
    const Vector beta = random_vec(4, 5);
    const auto parts = ped_objective(ds, beta, 0.0);
    CHECK(parts.objective == doctest::Approx(parts.residual_norm).epsilon(1e-14));
  }

  SUBCASE("two-term recomputation agrees") {
    const Vector beta = random_vec(4, 6);
    const double lambda = 0.8;
    const auto parts = ped_objective(ds, beta, lambda);
    // Independent route: explicit residual loop plus norm product.
    double rss = 0.0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
      double r = ds.y[i];
      for (std::size_t j = 0; j < ds.p(); ++j) r -= ds.X(i, j) * beta[j];
      rss += r * r;
    }
    double l1 = 0.0, l2 = 0.0;
    for (double b : beta) {
      l1 += std::fabs(b);
      l2 += b * b;
    }
    const double expected = std::sqrt(rss) + lambda * std::sqrt(l1 * std::sqrt(l2));
    CHECK(parts.objective == doctest::Approx(expected).epsilon(1e-12));
    CHECK(parts.objective ==
          doctest::Approx(parts.residual_norm + lambda * parts.penalty_norm)
              .epsilon(1e-12));
  }

  SUBCASE("cosines stay in [-1, 1]") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto parts = ped_objective(ds, random_vec(4, seed), 0.5);
      for (double c : parts.cosines) {
        CHECK(c >= -1.0 - 1e-12);
        CHECK(c <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("objective is convex along random chords") {
  const auto ds = make_full_rank_dataset(12, 5, 4);
  NormalSampler rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector b1 = random_vec(5, 100 + trial);
    const Vector b2 = random_vec(5, 300 + trial);
    const double t = 0.5 * (1.0 + rng.uniform_pm1());
    Vector mid(5);
    for (std::size_t j = 0; j < 5; ++j) mid[j] = t * b1[j] + (1.0 - t) * b2[j];
    const double lambda = 0.6;
    const double f1 = ped_objective(ds, b1, lambda).objective;
    const double f2 = ped_objective(ds, b2, lambda).objective;
    const double fm = ped_objective(ds, mid, lambda).objective;
    CHECK(fm <= t * f1 + (1.0 - t) * f2 + 1e-10);
  }
}

TEST_CASE("gradient matches central differences at smooth points") {
  const auto ds = make_full_rank_dataset(14, 6, 8);
  const double lambda = 0.5;
  const double eps = 1e-8;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Vector beta = random_vec(6, 700 + seed);
    for (auto& b : beta)
      if (std::fabs(b) < 0.1) b = std::copysign(0.1, b);  // stay off the kinks
    const Vector g = ped_gradient(ds, beta, lambda, eps);

    const double h = 1e-6;
    Vector fd(6);
    for (std::size_t j = 0; j < 6; ++j) {
      Vector up = beta, dn = beta;
      up[j] += h;
      dn[j] -= h;
      fd[j] = (smoothed_objective(ds, up, lambda, eps) -
               smoothed_objective(ds, dn, lambda, eps)) /
              (2.0 * h);
    }
    double diff = 0.0;
    for (std::size_t j = 0; j < 6; ++j) diff = std::max(diff, std::fabs(g[j] - fd[j]));
    CHECK(diff / std::max(1.0, norm_inf(g)) <= 1e-5);
  }
}

TEST_CASE("gradient special cases") {
  const auto ds = make_full_rank_dataset(10, 5, 13);

  SUBCASE("lambda = 0 gives the pure Euclidean term") {
    const Vector beta = random_vec(5, 2);
    const Vector g = ped_gradient(ds, beta, 0.0, 1e-8);
    Vector r = ds.y;
    for (std::size_t j = 0; j < 5; ++j) kernels::axpy(-beta[j], ds.X.col(j), r);
    const Vector expected = tmatvec(ds.X, r);
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(g[j] == doctest::Approx(-expected[j] / norm2(r)).epsilon(1e-12));
  }

  SUBCASE("1-sparse penalty gradient equals lambda") {
    Vector beta(5, 0.0);
    beta[0] = 2.0;
    const double lambda = 0.9;
    const Vector g = ped_gradient(ds, beta, lambda, 1e-10);
    const Vector g0 = ped_gradient(ds, beta, 0.0, 1e-10);
    CHECK(g[0] - g0[0] == doctest::Approx(lambda).epsilon(1e-6));
  }
}
