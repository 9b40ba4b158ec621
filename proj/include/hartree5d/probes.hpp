#pragma once

// Numerical probes of the sharp Gagliardo-Nirenberg bound and of the scaling
// symmetry, shared by the verify command and the test suites.

#include <cmath>
#include <random>
#include <vector>

#include "hartree5d/evolution.hpp"
#include "hartree5d/functionals.hpp"
#include "hartree5d/ground_state.hpp"
#include "hartree5d/newton_potential.hpp"
#include "hartree5d/radial_grid.hpp"

namespace hartree5d {

/// P(u) / (C_GN ||u|| ||grad u||^3); at most 1 for every u.
template <typename T>
double gn_ratio(const Field<T>& u, double c_gn) {
  const double m = l2_norm_sq(u);
  const double g = grad_norm_sq(u);
  return interaction_P(u) / (c_gn * std::sqrt(m) * std::pow(g, 1.5));
}

/// ||u||_{L^2} ||u||_{H^1-dot}, invariant under u -> lambda^2 u(lambda x).
template <typename T>
double scale_invariant_product(const Field<T>& u) {
  return std::sqrt(l2_norm_sq(u) * grad_norm_sq(u));
}

/// Random smooth radial field: a sum of 1-3 terms a r^{2m} exp(-alpha r^2)
/// with a in [-2, 2], m in {0, 1, 2} and alpha in [0.25, 3].
inline RealField random_smooth_field(const GridPtr& grid, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms(1, 3);
  std::uniform_int_distribution<int> power(0, 2);
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  std::uniform_real_distribution<double> decay(0.25, 3.0);
  struct Term {
    double a;
    int m;
    double alpha;
  };
  std::vector<Term> parts;
  const int count = terms(rng);
  for (int k = 0; k < count; ++k) {
    const double a = amp(rng);
    const int m = power(rng);
    const double alpha = decay(rng);
    parts.push_back({a, m, alpha});
  }
  // Keep the field away from zero so the ratio is well defined.
  if (std::abs(parts.front().a) < 0.1) parts.front().a = 0.1;
  return RealField::sample(grid, [&](double r) {
    double sum = 0.0;
    for (const Term& t : parts) sum += t.a * std::pow(r * r, t.m) * std::exp(-t.alpha * r * r);
    return sum;
  });
}

struct GnProbeResult {
  double max_ratio = 0.0;
  double ratio_at_Q = 0.0;
  int samples = 0;
};

inline GnProbeResult gn_probe(const GroundStateResult& gs, int samples, std::uint64_t seed) {
  require_converged(gs);
  std::mt19937_64 rng(seed);
  GnProbeResult out;
  out.samples = samples;
  for (int k = 0; k < samples; ++k) {
    out.max_ratio = std::max(out.max_ratio, gn_ratio(random_smooth_field(gs.Q.grid_ptr(), rng), gs.c_gn));
  }
  out.ratio_at_Q = gn_ratio(gs.Q, gs.c_gn);
  return out;
}

/// Largest relative change of ||u|| ||grad u|| under the scaling map over the
/// given factors.
template <typename T>
double scaling_probe(const Field<T>& u, const std::vector<double>& lambdas) {
  const double base = scale_invariant_product(u);
  double worst = 0.0;
  for (double lam : lambdas) {
    const double p = scale_invariant_product(scaling_transform(u, lam));
    worst = std::max(worst, std::abs(p - base) / base);
  }
  return worst;
}

}  // namespace hartree5d
