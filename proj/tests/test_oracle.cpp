#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hartree5d/oracle.hpp"
#include "test_support.hpp"

using namespace hartree5d;
using namespace hartree5d::testing;
using Catch::Approx;

TEST_CASE("direct convolution of a narrow bump approaches the point kernel", "[oracle]") {
  const double s0 = 0.1;
  const double sigma = 0.005;
  auto shape = [=](double s) { return std::exp(-0.5 * (s - s0) * (s - s0) / (sigma * sigma)); };
  const double lo = s0 - 8.0 * sigma;
  const double hi = s0 + 8.0 * sigma;
  // Normalize to unit mass in R^5.
  const double raw = omega4() * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                                    [&](double s) { return s * s * s * s * shape(s); }, lo, hi, 15, 1e-12);
  auto bump = [&](double s) { return shape(s) / raw; };
  const auto v = oracle::convolution_direct(bump, 5.0, lo, hi);
  CHECK(rel_err(v.value, std::pow(5.0, -3.0)) < 1e-2);
  CHECK(v.disagreement <= oracle::kMaxDisagreement);
}

TEST_CASE("direct convolution of zero density is zero", "[oracle]") {
  CHECK(oracle::convolution_direct([](double) { return 0.0; }, 1.0, 0.0, 5.0).value == 0.0);
}

TEST_CASE("direct convolution of exp(-s^2) at the origin is 4 pi^2 / 3", "[oracle]") {
  const auto v = oracle::convolution_direct([](double s) { return std::exp(-s * s); }, 1e-3, 0.0, 12.0);
  CHECK(rel_err(v.value, 4.0 * kPi * kPi / 3.0) < 1e-5);
}

TEST_CASE("direct convolution rejects a bad support", "[oracle]") {
  CHECK_THROWS_AS(oracle::convolution_direct([](double) { return 1.0; }, 1.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("fd_second_derivative on polynomial and trigonometric series", "[oracle]") {
  std::vector<std::pair<double, double>> quad, lin, sine;
  const double dt = 1e-2;
  for (int k = -5; k <= 5; ++k) {
    const double t = k * dt;
    quad.emplace_back(t, t * t);
    lin.emplace_back(t, 3.0 * t - 1.0);
    sine.emplace_back(t, std::sin(t));
  }
  CHECK(oracle::fd_second_derivative(quad, 5) == Approx(2.0).epsilon(1e-9));
  CHECK(oracle::fd_second_derivative(quad, 2) == Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(oracle::fd_second_derivative(lin, 5)) < 1e-9);
  CHECK(std::abs(oracle::fd_second_derivative(sine, 5)) < 1e-4);
}

TEST_CASE("fd_second_derivative rejects bad input", "[oracle]") {
  const std::vector<std::pair<double, double>> uneven{{0.0, 0.0}, {0.1, 1.0}, {0.3, 2.0}};
  CHECK_THROWS_AS(oracle::fd_second_derivative(uneven, 1), std::invalid_argument);
  const std::vector<std::pair<double, double>> even{{0.0, 0.0}, {0.1, 1.0}, {0.2, 2.0}};
  CHECK_THROWS_AS(oracle::fd_second_derivative(even, 0), std::invalid_argument);
  CHECK_THROWS_AS(oracle::fd_second_derivative(even, 2), std::invalid_argument);
}
