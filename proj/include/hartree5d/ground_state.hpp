#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hartree5d/newton_potential.hpp"
#include "hartree5d/radial_grid.hpp"
#include "hartree5d/tridiagonal.hpp"

namespace hartree5d {

/// Profile Q of -Laplace Q + Q = (|.|^{-3} * Q^2) Q with its Pohozaev ratios.
struct GroundStateResult {
  RealField Q;
  int iterations = 0;
  double residual = 0.0;
  double relative_change = 0.0;
  double stabilizer = 0.0;
  double mass = 0.0;
  double grad_sq = 0.0;
  double P = 0.0;
  double pohozaev_grad_ratio = 0.0;
  double pohozaev_P_ratio = 0.0;
  double c_gn = 0.0;
  double init_amp = 0.0;
  bool converged = false;
};

class GroundStateCollapse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves (I - L_h) w = f with one tridiagonal elimination.
template <typename T>
Field<T> helmholtz_invert(const Field<T>& f) {
  TridiagonalBands<double> m = laplacian_bands(f.grid());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.lower[i] = -m.lower[i];
    m.diag[i] = 1.0 - m.diag[i];
    m.upper[i] = -m.upper[i];
  }
  std::vector<T> w = solve_tridiagonal(m, f.values());
  return Field<T>(f.grid_ptr(), std::move(w));
}

namespace detail {

inline double weighted_norm(const RealField& u) { return std::sqrt(l2_norm_sq(u)); }

inline RealField nonlinear_term(const RealField& q) {
  RealField phi = hartree_potential(density(q));
  for (std::size_t i = 0; i < q.size(); ++i) phi[i] *= q[i];
  return phi;
}

/// ||(I - L_h) Q - Phi_Q Q||_w / ||Q||_w
inline double equation_residual(const RealField& q) {
  const RealField lap = laplacian_apply(q);
  const RealField nl = nonlinear_term(q);
  RealField res(q.grid_ptr());
  for (std::size_t i = 0; i < q.size(); ++i) res[i] = q[i] - lap[i] - nl[i];
  return weighted_norm(res) / weighted_norm(q);
}

inline void fill_diagnostics(GroundStateResult& gs) {
  gs.mass = l2_norm_sq(gs.Q);
  gs.grad_sq = grad_norm_sq(gs.Q);
  gs.P = interaction_P(gs.Q);
  gs.pohozaev_grad_ratio = gs.grad_sq / gs.mass;
  gs.pohozaev_P_ratio = gs.P / gs.mass;
  gs.c_gn = gs.P / (std::sqrt(gs.mass) * std::pow(gs.grad_sq, 1.5));
}

inline GroundStateResult petviashvili(const GridPtr& grid, double tol, int max_iter, double amp) {
  GroundStateResult gs;
  gs.init_amp = amp;
  RealField q = RealField::sample(grid, [amp](double r) { return amp * std::exp(-0.5 * r * r); });

  // Q_{k+1} = m_k^{3/2} (I - L_h)^{-1} N(Q_k); 3/2 = p / (p - 1) for the cubic term.
  for (int k = 1; k <= max_iter; ++k) {
    const RealField nl = nonlinear_term(q);
    const RealField lap = laplacian_apply(q);
    double lin_q = 0.0;
    double nl_q = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      lin_q += grid->w(i) * (q[i] - lap[i]) * q[i];
      nl_q += grid->w(i) * nl[i] * q[i];
    }
    if (!(nl_q > 0.0) || !std::isfinite(lin_q)) {
      throw GroundStateCollapse("petviashvili: degenerate stabilizer");
    }
    const double m = lin_q / nl_q;
    RealField next = helmholtz_invert(nl);
    next *= std::pow(m, 1.5);

    const double norm_next = weighted_norm(next);
    if (!(norm_next >= 1e-8) || !std::isfinite(norm_next)) {
      throw GroundStateCollapse("petviashvili: iterate collapsed");
    }
    RealField diff(grid);
    for (std::size_t i = 0; i < q.size(); ++i) diff[i] = next[i] - q[i];
    gs.relative_change = weighted_norm(diff) / norm_next;
    gs.stabilizer = m;
    gs.iterations = k;
    q = std::move(next);
    if (gs.relative_change < tol) {
      gs.residual = equation_residual(q);
      if (gs.residual < tol) {
        gs.converged = true;
        break;
      }
    }
  }
  if (!gs.converged) gs.residual = equation_residual(q);
  gs.Q = std::move(q);
  fill_diagnostics(gs);
  return gs;
}

}  // namespace detail

inline constexpr double kDefaultInitAmp = 3.0;

/// Petviashvili iteration from A exp(-r^2/2). If the iterate collapses, the
/// amplitudes 1, 5, 10 are tried in turn before giving up.
inline GroundStateResult solve_ground_state(const GridPtr& grid, double tol, int max_iter,
                                            double init_amp = kDefaultInitAmp) {
  if (!(tol > 0.0 && tol <= 1e-2)) throw std::invalid_argument("ground state tol must lie in (0, 1e-2]");
  if (max_iter < 1) throw std::invalid_argument("ground state max_iter must be >= 1");
  std::vector<double> amps{init_amp};
  for (double a : {1.0, 5.0, 10.0}) {
    if (a != init_amp) amps.push_back(a);
  }
  for (std::size_t k = 0; k < amps.size(); ++k) {
    try {
      return detail::petviashvili(grid, tol, max_iter, amps[k]);
    } catch (const GroundStateCollapse&) {
      if (k + 1 == amps.size()) throw;
    }
  }
  throw GroundStateCollapse("petviashvili: no initial amplitude converged");
}

/// Rebuilds the result record for a stored profile (e.g. read back from CSV).
inline GroundStateResult ground_state_from_profile(RealField q, double tol) {
  GroundStateResult gs;
  gs.Q = std::move(q);
  gs.residual = detail::equation_residual(gs.Q);
  gs.converged = gs.residual <= tol;
  gs.stabilizer = 1.0;
  detail::fill_diagnostics(gs);
  return gs;
}

}  // namespace hartree5d
