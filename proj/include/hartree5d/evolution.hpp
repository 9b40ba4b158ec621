#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hartree5d/functionals.hpp"
#include "hartree5d/ground_state.hpp"
#include "hartree5d/newton_potential.hpp"
#include "hartree5d/oracle.hpp"
#include "hartree5d/potentials.hpp"
#include "hartree5d/radial_grid.hpp"
#include "hartree5d/tridiagonal.hpp"

namespace hartree5d {

struct EvolutionConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int output_every = 10;
  /// Detector fires once grad_sq >= factor^2 * grad_sq(u0).
  double blowup_grad_factor = 10.0;
  double blowup_sup_cap = 1e6;
  /// Largest nonlinear phase max|Phi - V| dt allowed per step before dt is halved.
  double phase_cap = 0.1;
  double local_mass_radius = 5.0;
  /// Radius of the cutoff in the P(chi_R u) column; 0 disables it.
  double morawetz_radius = 0.0;

  void validate() const {
    if (!(dt > 0.0) || !(t_end > 0.0) || !(dt < t_end)) {
      throw std::invalid_argument("evolution needs 0 < dt < t_end");
    }
    if (output_every < 1) throw std::invalid_argument("output_every must be >= 1");
    if (!(blowup_grad_factor >= 2.0)) throw std::invalid_argument("blowup_grad_factor must be >= 2");
    if (!(blowup_sup_cap > 0.0) || !(phase_cap > 0.0)) throw std::invalid_argument("caps must be positive");
    if (!(local_mass_radius > 0.0)) throw std::invalid_argument("local_mass_radius must be positive");
    if (morawetz_radius < 0.0) throw std::invalid_argument("morawetz_radius must be >= 0");
  }
};

enum class RunStatus { completed, blowup_detected, dt_underflow };

inline std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_detected: return "blowup_detected";
    case RunStatus::dt_underflow: return "dt_underflow";
  }
  return "unknown";
}

struct RunOutcome {
  RunStatus status = RunStatus::completed;
  double t_final = 0.0;
  std::vector<DiagnosticsRow> series;
  std::optional<double> blowup_time_estimate;
  /// "gradient" or "sup" when the blow-up detector fired.
  std::string detector;
  double dt_final = 0.0;
  long long steps = 0;
  int dt_halvings = 0;
};

inline constexpr double kMinTimeStep = 1e-12;

/// u_i <- exp(i dt (Phi_i - V_i)) u_i for a precomputed Hartree potential.
inline void apply_phase(RadialField& u, const RealField& phi, const RealField& v, double dt) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double theta = dt * (phi[i] - v[i]);
    u[i] *= Complex(std::cos(theta), std::sin(theta));
  }
}

/// Exact flow of i u_t = (V - Phi_u) u: |u| is frozen, so Phi is too.
inline RadialField nonlinear_substep(RadialField u, const PotentialField& pot, double dt) {
  require_same_grid(u, pot.v);
  const RealField phi = hartree_potential(density(u));
  apply_phase(u, phi, pot.v, dt);
  return u;
}

/// Crank-Nicolson for i u_t = -Laplace u, factored once for a fixed dt.
class LinearPropagator {
 public:
  LinearPropagator(const RadialGrid& g, double dt) : lap_(laplacian_bands(g)), dt_(dt), factor_(implicit_bands(lap_, dt)) {}

  double dt() const { return dt_; }

  void apply(RadialField& u) const {
    const Complex half(0.0, 0.5 * dt_);
    const std::size_t n = u.size();
    std::vector<Complex> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex lap = lap_.diag[i] * u[i];
      if (i > 0) lap += lap_.lower[i] * u[i - 1];
      if (i + 1 < n) lap += lap_.upper[i] * u[i + 1];
      rhs[i] = u[i] + half * lap;
    }
    factor_.solve_in_place(std::span<Complex>(rhs));
    for (std::size_t i = 0; i < n; ++i) u[i] = rhs[i];
  }

 private:
  static TridiagonalBands<Complex> implicit_bands(const TridiagonalBands<double>& lap, double dt) {
    const Complex half(0.0, 0.5 * dt);
    TridiagonalBands<Complex> m(lap.size());
    for (std::size_t i = 0; i < lap.size(); ++i) {
      m.lower[i] = -half * lap.lower[i];
      m.diag[i] = 1.0 - half * lap.diag[i];
      m.upper[i] = -half * lap.upper[i];
    }
    return m;
  }

  TridiagonalBands<double> lap_;
  double dt_;
  TridiagonalFactor<Complex> factor_;
};

/// (I - i dt/2 L_h) u+ = (I + i dt/2 L_h) u
inline RadialField linear_substep(RadialField u, double dt) {
  if (dt == 0.0) return u;
  LinearPropagator(u.grid(), dt).apply(u);
  if (!u.all_finite()) throw std::runtime_error("linear_substep: non-finite result");
  return u;
}

/// Strang splitting (half phase, full Crank-Nicolson, half phase) with phase-cap
/// step halving and blow-up detection. Emits a row at t = 0, every
/// output_every steps, at t_end and when a detector fires.
inline RunOutcome evolve(const RadialField& u0, const PotentialField& pot, const EvolutionConfig& cfg,
                         const GroundStateResult& gs) {
  cfg.validate();
  require_converged(gs);
  require_same_grid(u0, pot.v);
  require_same_grid(u0, gs.Q);
  if (cfg.local_mass_radius > u0.grid().r_max() || cfg.morawetz_radius > u0.grid().r_max()) {
    throw std::invalid_argument("diagnostic radius exceeds r_max");
  }

  RunOutcome out;
  RadialField u = u0;
  const RealField& v = pot.v;
  auto row_at = [&](double t) {
    return diagnostics(t, u, pot, gs, cfg.local_mass_radius, cfg.morawetz_radius);
  };
  out.series.push_back(row_at(0.0));
  const double grad0 = out.series.front().grad_sq;
  const double grad_limit = cfg.blowup_grad_factor * cfg.blowup_grad_factor * grad0;

  double dt = cfg.dt;
  double t_anchor = 0.0;  // time at which the current dt took effect
  long long k = 0;        // steps taken since t_anchor
  double t = 0.0;
  long long since_output = 0;
  std::optional<LinearPropagator> prop;

  while (t < cfg.t_end) {
    const double t_next = std::min(t_anchor + static_cast<double>(k + 1) * dt, cfg.t_end);
    const double step = t_next - t;
    // A sliver left over by rounding is folded into the previous step.
    if (step <= 1e-9 * dt) {
      t = cfg.t_end;
      break;
    }

    RealField phi = hartree_potential(density(u));
    double rate = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) rate = std::max(rate, std::abs(phi[i] - v[i]));

    auto halve = [&]() {
      dt *= 0.5;
      ++out.dt_halvings;
      t_anchor = t;
      k = 0;
      prop.reset();
      return dt >= kMinTimeStep;
    };
    if (rate * step > cfg.phase_cap) {
      if (!halve()) {
        out.status = RunStatus::dt_underflow;
        break;
      }
      continue;
    }

    RadialField trial = u;
    apply_phase(trial, phi, v, 0.5 * step);
    if (step == dt) {
      if (!prop) prop.emplace(trial.grid(), dt);
      prop->apply(trial);
    } else {
      LinearPropagator(trial.grid(), step).apply(trial);
    }
    phi = hartree_potential(density(trial));
    apply_phase(trial, phi, v, 0.5 * step);
    if (!trial.all_finite()) {
      if (!halve()) {
        out.status = RunStatus::dt_underflow;
        break;
      }
      continue;
    }

    u = std::move(trial);
    ++k;
    ++out.steps;
    ++since_output;
    t = t_next;

    const double g = grad_norm_sq(u);
    const double s = sup_abs(u);
    const bool grad_fired = grad0 > 0.0 && g >= grad_limit;
    const bool sup_fired = s >= cfg.blowup_sup_cap;
    if (grad_fired || sup_fired) {
      out.series.push_back(row_at(t));
      out.status = RunStatus::blowup_detected;
      out.blowup_time_estimate = t;
      out.detector = grad_fired ? "gradient" : "sup";
      break;
    }
    if (since_output >= cfg.output_every || t >= cfg.t_end) {
      out.series.push_back(row_at(t));
      since_output = 0;
    }
  }
  if (out.status == RunStatus::completed && out.series.back().t < t) out.series.push_back(row_at(t));
  out.t_final = t;
  out.dt_final = dt;
  return out;
}

struct VirialReport {
  /// max |d^2/dt^2 x2_moment - 8K| over interior output times
  double max_abs_deviation = 0.0;
  /// max_abs_deviation / max |8K| (0 when K vanishes identically)
  double max_rel_deviation = 0.0;
  double max_abs_8K = 0.0;
  std::size_t compared = 0;
};

/// Compares the centered second difference of int r^2 |u|^2 with 8 K(u).
/// The potential enters through the K column already stored in the rows.
inline VirialReport virial_check(const RunOutcome& outcome) {
  const auto& rows = outcome.series;
  if (rows.size() < 3) throw std::invalid_argument("virial_check needs at least 3 output rows");
  std::vector<std::pair<double, double>> moment;
  moment.reserve(rows.size());
  for (const DiagnosticsRow& r : rows) moment.emplace_back(r.t, r.x2_moment);
  VirialReport rep;
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    const double lhs = oracle::fd_second_derivative(moment, k);
    const double rhs = 8.0 * rows[k].K;
    rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::abs(lhs - rhs));
    rep.max_abs_8K = std::max(rep.max_abs_8K, std::abs(rhs));
    ++rep.compared;
  }
  rep.max_rel_deviation = rep.max_abs_8K > 0.0 ? rep.max_abs_deviation / rep.max_abs_8K : 0.0;
  return rep;
}

/// u^lambda(r) = lambda^2 u(lambda r), resampled by linear interpolation.
template <typename T>
Field<T> scaling_transform(const Field<T>& u, double lambda) {
  if (!(lambda >= 0.25 && lambda <= 4.0)) throw std::invalid_argument("scaling factor must lie in [1/4, 4]");
  const RadialGrid& g = u.grid();
  if (lambda < 1.0) {
    // Samples beyond lambda * r_max have no image on the grid.
    double outside = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (g.r(i) > lambda * g.r_max()) outside += g.w(i) * abs_sq(u[i]);
    }
    const double total = l2_norm_sq(u);
    if (total > 0.0 && outside > 1e-10 * total) {
      throw std::invalid_argument("scaling_transform: rescaled support overflows the grid");
    }
  }
  Field<T> out(u.grid_ptr());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = lambda * lambda * interpolate(u, lambda * g.r(i));
  return out;
}

}  // namespace hartree5d
