#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hartree5d/radial_grid.hpp"

namespace hartree5d {

/// |x|^{-3} = 8 pi^2 times the fundamental solution of -Laplace in R^5.
inline constexpr double kNewtonConstant = 8.0 * std::numbers::pi * std::numbers::pi;

/// Phi = |.|^{-3} * rho for a radial density (rho = 0 beyond r_max).
///
/// Integrating the radial Newton formula by parts gives
///   Phi(r) = (8 pi^2 / 3) [ A(r) / r^3 + int_r^{r_max} s rho(s) ds ],
///   A(r)   = int_0^r s^4 rho(s) ds,
/// which already contains the exterior multipole tail A(r_max) / (3 r^3).
/// Off-diagonal cells use the midpoint rule; the self cell integrates s^4 and s
/// exactly over its two halves. The resulting discrete kernel is symmetric in
/// the weighted inner product, so <Phi(rho1), rho2>_w = <Phi(rho2), rho1>_w.
inline RealField hartree_potential(const RealField& rho) {
  const RadialGrid& g = rho.grid();
  const std::size_t n = g.size();
  const double h = g.h();
  std::vector<double> dens(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = rho[i];
    if (v < -1e-12) throw std::invalid_argument("hartree_potential: negative density");
    dens[i] = v < 0.0 ? 0.0 : v;
  }

  // Outer sum: sum_{j > i} h r_j rho_j, built from the outside in.
  std::vector<double> outer(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) outer[i] = outer[i + 1] + h * g.r(i + 1) * dens[i + 1];

  RealField phi(rho.grid_ptr());
  double inner = 0.0;  // sum_{j < i} h r_j^4 rho_j
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.r(i);
    const double lo = g.face(i);
    const double hi = g.face(i + 1);
    const double r3 = r * r * r;
    const double self_inner = (r3 * r * r - lo * lo * lo * lo * lo) / 5.0 / r3;
    const double self_outer = 0.5 * (hi * hi - r * r);
    phi[i] = kNewtonConstant / 3.0 *
             (inner / r3 + outer[i] + dens[i] * (self_inner + self_outer));
    inner += h * r * r * r * r * dens[i];
  }
  return phi;
}

/// P(u) = double integral of |u(x)|^2 |u(y)|^2 / |x - y|^3.
template <typename T>
double interaction_P(const Field<T>& u) {
  const RealField rho = density(u);
  const RealField phi = hartree_potential(rho);
  double sum = 0.0;
  const RadialGrid& g = u.grid();
  for (std::size_t i = 0; i < u.size(); ++i) sum += g.w(i) * phi[i] * rho[i];
  return sum;
}

/// Limit r -> 0 of an even radial profile, f(r) ~ f(0) + c r^2, from the two
/// innermost nodes.
inline double value_at_origin(const RealField& f) {
  const RadialGrid& g = f.grid();
  const double a = g.r(0) * g.r(0);
  const double b = g.r(1) * g.r(1);
  return (b * f[0] - a * f[1]) / (b - a);
}

}  // namespace hartree5d
