#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "debias/decay.hpp"
#include "debias/theta.hpp"
#include "support.hpp"

using namespace debias;
using Catch::Approx;

namespace {

// Σ_{i>=0} 2^{-i}/sqrt(i+1), the AR(1)-style sequence ν(i) = 4^{-i}.
double quarter_power_oracle(std::size_t j) {
  return testing::direct_sum(
      [](long double i) { return std::pow(0.25L, i / 2) / std::sqrt(i + 1); }, j, 400);
}

// ζ(3/2).
constexpr double kZeta32 = 2.612375348685488343348567567924071630571;

}  // namespace

TEST_CASE("theta families") {
  const auto e = ThetaFn::exponential(0.5);
  const auto p = ThetaFn::power(2.0);
  for (double x : {0.0, 0.3, 1.0}) {
    CHECK(e(x) == 1.0);
    CHECK(p(x) == 1.0);
  }
  CHECK(e(3.0) == Approx(std::pow(2.0, 0.5 * 2.0)));
  CHECK(p(3.0) == Approx(9.0));
  double prev_e = e(0.0);
  double prev_p = p(0.0);
  for (double x = 0.25; x < 40.0; x += 0.25) {
    CHECK(e(x) >= prev_e);
    CHECK(p(x) >= prev_p);
    prev_e = e(x);
    prev_p = p(x);
  }
  CHECK_THROWS_AS(ThetaFn::power(1.0), std::invalid_argument);
  CHECK_THROWS_AS(ThetaFn::exponential(0.0), std::invalid_argument);
}

TEST_CASE("Σ 1/θ(l) matches direct summation") {
  const auto e = ThetaFn::exponential(0.5);
  const double direct_e = testing::direct_sum(
      [](long double l) { return l <= 1 ? 1.0L : std::pow(2.0L, -0.5L * (l - 1)); }, 0, 400);
  CHECK(e.inverse_sum() == Approx(direct_e).epsilon(1e-13));
  CHECK(ThetaFn::power(2.0).inverse_sum() ==
        Approx(1.0 + std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-13));
}

TEST_CASE("decay constructors evaluate their closed forms") {
  CHECK(make_nu_geometric(1.0, 1.0)(0) == 1.0);
  CHECK(make_nu_geometric(2.0, 0.5)(2) == Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(make_nu_geometric(1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(make_nu_geometric(0.0, 0.5), std::invalid_argument);

  CHECK(make_nu_contraction(1.0, 1.0, 1.0, 0.25)(0) == Approx(1.0));
  CHECK(make_nu_contraction(2.0, 4.0, 0.5, 0.25)(2) == Approx(2.0).epsilon(1e-14));
  const double eta = 0.64;
  const auto ar1 = make_nu_contraction(1.0, 1.0 / (1.0 - eta), 1.0, eta);
  for (std::uint64_t i : {0u, 1u, 5u, 30u}) {
    CHECK(ar1(i) == Approx(std::pow(eta, static_cast<double>(i)) / (1.0 - eta)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(make_nu_contraction(1.0, 1.0, 1.0, 1.0), std::invalid_argument);

  CHECK(make_nu_polynomial(1.0, 2.0)(0) == 1.0);
  CHECK(make_nu_polynomial(1.0, 2.0)(3) == Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK_THROWS_AS(make_nu_polynomial(1.0, 1.0), std::invalid_argument);

  const auto g = make_nu_gaussian(1.0, 1.0, 2.0, 1.0, 1.0);
  CHECK(g(0) == Approx(2.0));
  CHECK(g(1) == Approx(1.0));
  for (std::uint64_t i = 1; i < 12; ++i) {
    CHECK(g(i) == Approx(2.0 * std::pow(0.5, static_cast<double>(i))).epsilon(1e-13));
  }
  CHECK_THROWS_AS(make_nu_gaussian(1.0, 1.0, 2.0, 1.0, 2.5), std::invalid_argument);

  const auto g5 = make_nu_gaussian(1.3, 1.0, 5.0, 0.2, 3.1);
  for (std::uint64_t i = 0; i < 200; ++i) {
    CHECK(g5(i) <= 1.3 * 1.3 * 25.0 / static_cast<double>(i + 1) * (1 + 1e-12));
  }
}

TEST_CASE("every family is positive and non-increasing") {
  const std::vector<NuSequence> all{
      make_nu_geometric(0.5, 0.1), make_nu_contraction(1.0, 2.0, 0.7, 0.3),
      make_nu_polynomial(3.0, 1.5), make_nu_gaussian(0.9, 0.6, 10.0, 0.1, 4.0)};
  for (const auto& nu : all) {
    for (std::uint64_t i = 0; i < 500; ++i) {
      REQUIRE(nu(i) > 0.0);
      REQUIRE(nu(i + 1) <= nu(i));
    }
  }
}

TEST_CASE("tail sum of 4^{-i} against direct summation") {
  const TailSum t(make_nu_contraction(1.0, 1.0, 1.0, 0.25));
  CHECK(t(0) == Approx(quarter_power_oracle(0)).epsilon(1e-8));
  CHECK(t(0) == Approx(1.6122534461).epsilon(1e-9));
  for (std::size_t j : {1u, 7u, 40u}) {
    CHECK(t(static_cast<double>(j)) == Approx(quarter_power_oracle(j)).epsilon(1e-8));
  }
}

TEST_CASE("polynomial tail sums against ζ(3/2)") {
  const TailSum t(make_nu_polynomial(1.0, 2.0));
  CHECK(t(0) == Approx(kZeta32).epsilon(1e-9));
  for (std::size_t j : {1u, 100u, 2000u, 50000u}) {
    const double head = testing::direct_sum(
        [](long double i) { return std::pow(i + 1, -1.5L); }, 0, j);
    CHECK(t(static_cast<double>(j)) == Approx(kZeta32 - head).epsilon(1e-8));
  }
}

TEST_CASE("tail sums telescope and decrease") {
  const std::vector<NuSequence> all{
      make_nu_geometric(2.0, 0.5), make_nu_contraction(1.0, 4.0, 1.0, 0.75),
      make_nu_polynomial(1.0, 2.0), make_nu_gaussian(1.0, 1.0, 5.0, 0.3, 2.0)};
  for (const auto& nu : all) {
    const TailSum t(nu);
    for (std::uint64_t j : {0u, 1u, 3u, 10u, 100u, 1023u, 1024u, 1025u}) {
      const double here = t(static_cast<double>(j));
      const double next = t(static_cast<double>(j + 1));
      const double first = std::sqrt(nu(j) / static_cast<double>(j + 1));
      CHECK(next < here);
      CHECK(here >= first);
      CHECK(here - next == Approx(first).margin(1e-8 * here));
    }
    // log scale keeps the geometric families representable far out
    double prev = t.log_value(0.0);
    for (double j = 1.0; j < 1e15; j = std::floor(j * 7.3)) {
      const double v = t.log_value(j);
      REQUIRE(v < prev);
      REQUIRE(std::isfinite(v));
      prev = v;
    }
  }
}

TEST_CASE("tail sums do not depend on the tolerance beyond its size") {
  for (const auto& nu : {make_nu_geometric(1.0, 0.2), make_nu_polynomial(2.0, 3.0)}) {
    const TailSum coarse(nu, 1e-6);
    const TailSum fine(nu, 1e-10);
    for (double j : {0.0, 10.0, 5000.0}) CHECK(coarse(j) == Approx(fine(j)).epsilon(2e-6));
  }
}

TEST_CASE("custom decay sequences are rejected by the tail sum") {
  const auto nu = make_nu_custom([](std::uint64_t i) { return 1.0 / (1.0 + i * i); });
  CHECK(nu(1) == 0.5);
  CHECK_THROWS_AS(TailSum(nu), std::invalid_argument);
}

TEST_CASE("geometric envelope bound ν̄(0) <= 9 sqrt(c/ξ)") {
  for (double c : {0.5, 1.0, 2.0}) {
    for (double xi : {0.1, 0.5, 1.0}) {
      const TailSum t(make_nu_geometric(c, xi));
      CHECK(t(0) <= 9.0 * std::sqrt(c / xi));
    }
  }
}

TEST_CASE("hybrid envelope bound ν̄(0) <= 14 sqrt(c) ln(2/ξ)") {
  // d = 1 makes the Gaussian family c·min(λ(1-λ)^i, 1/(i+1)) <= c·min(e^{-ξi}, 1/(i+1))
  // with ξ = -ln(1-λ).
  for (double c : {0.5, 1.0, 4.0}) {
    for (double lambda : {0.02, 0.1, 0.3, 0.6}) {
      const double xi = -std::log1p(-lambda);
      const TailSum t(make_nu_gaussian(std::sqrt(c), 1.0, 1.0, lambda, lambda));
      const double hybrid = testing::direct_sum(
          [&](long double i) {
            const long double nu = c * std::min(std::exp(-xi * i), 1.0L / (i + 1));
            return std::sqrt(nu / (i + 1));
          },
          0, 20000);
      CHECK(t(0) <= hybrid * (1 + 1e-9));
      CHECK(hybrid <= 14.0 * std::sqrt(c) * std::log(2.0 / xi));
    }
  }
}

TEST_CASE("θ-weighted tail sums") {
  const auto nu = make_nu_contraction(1.0, 1.0, 1.0, 0.25);
  const TailSum t(nu);
  const auto power2 = ThetaFn::power(2.0);
  const double oracle = testing::direct_sum(
      [](long double i) {
        const long double x = std::log2(4 * i + 1);
        const long double theta = x <= 1 ? 1.0L : x * x;
        return std::sqrt(std::pow(0.25L, i) * theta / (i + 1));
      },
      0, 400);
  CHECK(t.theta_weighted(power2, 0.0) == Approx(oracle).epsilon(1e-8));

  const auto exp_half = ThetaFn::exponential(0.5);
  for (double j : {0.0, 3.0, 100.0, 1e6}) {
    CHECK(t.theta_weighted(exp_half, j) >= t(j));
    CHECK(t.theta_weighted(power2, j) >= t(j));
  }
  // θ(log2(4·0+1)) = θ(0) = 1, so the leading terms coincide.
  CHECK(t.theta_weighted(power2, 0.0) - t.theta_weighted(power2, 1.0) ==
        Approx(t(0.0) - t(1.0)).epsilon(1e-8));
}

TEST_CASE("polynomial decay with exponential θ") {
  const TailSum t(make_nu_polynomial(1.0, 3.0));
  CHECK_THROWS_AS(t.theta_weighted(ThetaFn::exponential(2.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(t.theta_weighted(ThetaFn::exponential(2.5), 0.0), std::invalid_argument);

  // Direct sum to N plus the trapezoid-corrected integral of the exact summand.
  const auto theta = ThetaFn::exponential(0.5);
  auto h = [](long double i) {
    const long double x = std::log2(4 * i + 1);
    const long double th = x <= 1 ? 1.0L : std::pow(2.0L, 0.5L * (x - 1));
    return std::sqrt(std::pow(i + 1, -3.0L) * th / (i + 1));
  };
  constexpr std::size_t n = 2'000'000;
  long double s = testing::direct_sum(h, 0, n);
  // for large i the summand is (4i+1)^{1/4} 2^{-1/4} (i+1)^{-2}; integrate it numerically
  long double tail = 0.0L;
  long double a = n;
  for (int block = 0; block < 60; ++block) {
    const long double b = a * 2;
    const int m = 2000;
    const long double step = (b - a) / m;
    long double simpson = h(a) + h(b);
    for (int i = 1; i < m; ++i) simpson += h(a + i * step) * (i % 2 ? 4 : 2);
    tail += simpson * step / 3;
    a = b;
  }
  s += tail + 0.5L * h(n);
  CHECK(t.theta_weighted(theta, 0.0) == Approx(static_cast<double>(s)).epsilon(1e-8));
}
