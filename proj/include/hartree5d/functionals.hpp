#pragma once

#include <cmath>
#include <stdexcept>

#include "hartree5d/ground_state.hpp"
#include "hartree5d/newton_potential.hpp"
#include "hartree5d/potentials.hpp"
#include "hartree5d/radial_grid.hpp"

namespace hartree5d {

/// One diagnostic sample of a solution at time t.
struct DiagnosticsRow {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double free_energy = 0.0;
  double grad_sq = 0.0;
  double gradV_sq = 0.0;
  double P = 0.0;
  double K = 0.0;
  double f = 0.0;
  double local_mass = 0.0;
  double sup_abs = 0.0;
  // Not part of the series.csv schema; used by the virial and Morawetz checks.
  double x2_moment = 0.0;
  double P_chi = 0.0;
};

template <typename T>
double mass(const Field<T>& u) {
  return l2_norm_sq(u);
}

/// integral of V |u|^2
template <typename T>
double potential_term(const Field<T>& u, const RealField& v) {
  require_same_grid(u, v);
  const RadialGrid& g = u.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += g.w(i) * v[i] * abs_sq(u[i]);
  return sum;
}

template <typename T>
double free_energy(const Field<T>& u) {
  return 0.5 * grad_norm_sq(u) - 0.25 * interaction_P(u);
}

template <typename T>
double energy(const Field<T>& u, const PotentialField& pot) {
  return 0.5 * grad_norm_sq(u) + 0.5 * potential_term(u, pot.v) - 0.25 * interaction_P(u);
}

/// ||grad_V u||^2 = <(-Laplace + V) u, u>
template <typename T>
double gradV_norm_sq(const Field<T>& u, const PotentialField& pot) {
  return grad_norm_sq(u) + potential_term(u, pot.v);
}

/// K(u) = ||grad u||^2 - (1/2) int x.grad V |u|^2 - (3/4) P(u)
template <typename T>
double virial_K(const Field<T>& u, const PotentialField& pot) {
  return grad_norm_sq(u) - 0.5 * potential_term(u, pot.rdv) - 0.75 * interaction_P(u);
}

inline void require_converged(const GroundStateResult& gs) {
  if (!gs.converged) throw std::invalid_argument("ground state is not converged");
}

/// ||u|| ||grad_V u|| / (||Q|| ||grad Q||)
template <typename T>
double threshold_f(const Field<T>& u, const PotentialField& pot, const GroundStateResult& gs) {
  require_converged(gs);
  return std::sqrt(mass(u) * gradV_norm_sq(u, pot)) / std::sqrt(gs.mass * gs.grad_sq);
}

inline double g_of_f(double f) { return 3.0 * f * f - 2.0 * f * f * f; }

/// Radial cutoff equal to 1 on [0, R/2] and 0 on [R, inf), joined by the
/// cubic ramp 1 - 3 s^2 + 2 s^3 with s = 2r/R - 1.
inline double cutoff_value(double r, double R) {
  if (r <= 0.5 * R) return 1.0;
  if (r >= R) return 0.0;
  const double s = 2.0 * r / R - 1.0;
  return 1.0 - 3.0 * s * s + 2.0 * s * s * s;
}

inline RealField cutoff_chi(double R, const GridPtr& grid) {
  if (!(R > 0.0)) throw std::invalid_argument("cutoff radius must be positive");
  if (R > grid->r_max()) throw std::invalid_argument("cutoff radius exceeds r_max");
  return RealField::sample(grid, [R](double r) { return cutoff_value(r, R); });
}

/// Sum of w_i |u_i|^2 over nodes with r_i <= R.
template <typename T>
double local_mass(const Field<T>& u, double R) {
  if (R > u.grid().r_max()) throw std::invalid_argument("local mass radius exceeds r_max");
  const RadialGrid& g = u.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size() && g.r(i) <= R; ++i) sum += g.w(i) * abs_sq(u[i]);
  return sum;
}

/// P(chi_R u)
template <typename T>
double morawetz_P_chi(const Field<T>& u, double R) {
  const RealField chi = cutoff_chi(R, u.grid_ptr());
  Field<T> cut = u;
  for (std::size_t i = 0; i < u.size(); ++i) cut[i] *= chi[i];
  return interaction_P(cut);
}

/// integral of r^2 |u|^2
template <typename T>
double x2_moment(const Field<T>& u) {
  const RadialGrid& g = u.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += g.w(i) * g.r(i) * g.r(i) * abs_sq(u[i]);
  return sum;
}

/// All diagnostics at once; shares the Hartree potential between P, E and K.
/// The Morawetz column is skipped when morawetz_radius <= 0.
template <typename T>
DiagnosticsRow diagnostics(double t, const Field<T>& u, const PotentialField& pot,
                           const GroundStateResult& gs, double local_mass_radius,
                           double morawetz_radius = 0.0) {
  require_converged(gs);
  DiagnosticsRow row;
  row.t = t;
  row.mass = mass(u);
  row.grad_sq = grad_norm_sq(u);
  row.P = interaction_P(u);
  const double vterm = potential_term(u, pot.v);
  const double rdvterm = potential_term(u, pot.rdv);
  row.gradV_sq = row.grad_sq + vterm;
  row.free_energy = 0.5 * row.grad_sq - 0.25 * row.P;
  row.energy = row.free_energy + 0.5 * vterm;
  row.K = row.grad_sq - 0.5 * rdvterm - 0.75 * row.P;
  row.f = std::sqrt(row.mass * row.gradV_sq) / std::sqrt(gs.mass * gs.grad_sq);
  row.local_mass = local_mass(u, local_mass_radius);
  row.sup_abs = sup_abs(u);
  row.x2_moment = x2_moment(u);
  if (morawetz_radius > 0.0) row.P_chi = morawetz_P_chi(u, morawetz_radius);
  return row;
}

}  // namespace hartree5d
