#pragma once

// Brute-force reference computations. Nothing here shares code with the fast
// paths in newton_potential.hpp or evolution.hpp.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hartree5d::oracle {

struct QuadratureValue {
  double value = 0.0;
  /// Relative disagreement between the 15- and 31-point Kronrod estimates.
  double disagreement = 0.0;
};

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxDisagreement = 1e-4;

namespace detail {

template <unsigned Points, typename F>
double adaptive(F&& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, Points>::integrate(f, a, b, 15, tol);
}

/// int_a^b f split at the given interior points.
template <unsigned Points, typename F>
double piecewise(F&& f, double a, double b, std::vector<double> cuts, double tol) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = std::max(a, cuts[k]);
    const double hi = std::min(b, cuts[k + 1]);
    if (hi > lo) sum += adaptive<Points>(f, lo, hi, tol);
  }
  return sum;
}

/// Integral over the polar angle of S^4 seen from a point at distance r:
/// int_0^pi (r^2 + s^2 - 2 r s cos theta)^{-3/2} sin^3 theta dtheta.
template <unsigned Points>
double angular_kernel(double r, double s, double tol) {
  auto integrand = [r, s](double theta) {
    const double d2 = r * r + s * s - 2.0 * r * s * std::cos(theta);
    const double sn = std::sin(theta);
    if (d2 <= 0.0) return 0.0;
    return sn * sn * sn / (d2 * std::sqrt(d2));
  };
  // The integrand peaks near theta ~ |r - s| / r when s is close to r.
  std::vector<double> cuts;
  if (r > 0.0 && s > 0.0) {
    const double scale = std::abs(r - s) / std::max(r, s);
    for (double c : {scale, 4.0 * scale, 16.0 * scale}) {
      if (c > 0.0 && c < std::numbers::pi) cuts.push_back(c);
    }
  }
  return piecewise<Points>(integrand, 0.0, std::numbers::pi, cuts, tol);
}

template <unsigned Points>
double convolution(const std::function<double(double)>& rho, double r, double s_lo, double s_hi,
                   double tol) {
  // |S^3| = 2 pi^2; with the sin^3 density this reproduces |S^4| = 8 pi^2 / 3.
  constexpr double kS3Area = 2.0 * std::numbers::pi * std::numbers::pi;
  auto outer = [&](double s) {
    const double d = rho(s);
    if (d == 0.0) return 0.0;
    return s * s * s * s * d * angular_kernel<Points>(r, s, 0.1 * tol);
  };
  std::vector<double> cuts;
  if (r > s_lo && r < s_hi) cuts.push_back(r);
  return kS3Area * piecewise<Points>(outer, s_lo, s_hi, cuts, tol);
}

}  // namespace detail

/// (|.|^{-3} * rho)(r_eval) for a radial density supported in [s_lo, s_hi],
/// by direct quadrature over the radius s and the polar angle theta.
inline QuadratureValue convolution_direct(const std::function<double(double)>& rho, double r_eval,
                                          double s_lo, double s_hi) {
  if (!(s_hi > s_lo) || s_lo < 0.0) throw std::invalid_argument("convolution_direct: bad support");
  const double coarse = detail::convolution<15>(rho, r_eval, s_lo, s_hi, 1e-9);
  const double fine = detail::convolution<31>(rho, r_eval, s_lo, s_hi, 1e-9);
  QuadratureValue out;
  out.value = fine;
  const double scale = std::max(std::abs(fine), 1e-300);
  out.disagreement = fine == coarse ? 0.0 : std::abs(fine - coarse) / scale;
  if (out.disagreement > kMaxDisagreement) {
    throw QuadratureFailure("convolution_direct: quadrature estimates disagree");
  }
  return out;
}

/// P for a radial density: |S^4| int r^4 rho(r) (|.|^{-3} * rho)(r) dr, with
/// Gauss-Legendre in r (smooth integrand) and the adaptive kernel quadrature inside.
inline QuadratureValue interaction_P_direct(const std::function<double(double)>& rho, double s_hi) {
  constexpr double kS4Area = 8.0 * std::numbers::pi * std::numbers::pi / 3.0;
  auto radial = [&](double r) {
    const double d = rho(r);
    if (d == 0.0) return 0.0;
    return r * r * r * r * d * detail::convolution<15>(rho, r, 0.0, s_hi, 1e-8);
  };
  const double coarse = boost::math::quadrature::gauss<double, 20>::integrate(radial, 0.0, s_hi);
  const double fine = boost::math::quadrature::gauss<double, 30>::integrate(radial, 0.0, s_hi);
  QuadratureValue out;
  out.value = kS4Area * fine;
  out.disagreement = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
  if (out.disagreement > kMaxDisagreement) {
    throw QuadratureFailure("interaction_P_direct: quadrature estimates disagree");
  }
  return out;
}

/// (v_{k+1} - 2 v_k + v_{k-1}) / dt^2 on a uniformly spaced series.
inline double fd_second_derivative(std::span<const std::pair<double, double>> series, std::size_t k) {
  if (k == 0 || k + 1 >= series.size()) {
    throw std::invalid_argument("fd_second_derivative needs an interior index");
  }
  const double dt_minus = series[k].first - series[k - 1].first;
  const double dt_plus = series[k + 1].first - series[k].first;
  if (!(dt_minus > 0.0) || std::abs(dt_plus - dt_minus) > 1e-9 * dt_minus) {
    throw std::invalid_argument("fd_second_derivative needs uniform spacing");
  }
  const double dt = 0.5 * (dt_minus + dt_plus);
  return (series[k + 1].second - 2.0 * series[k].second + series[k - 1].second) / (dt * dt);
}

}  // namespace hartree5d::oracle
