#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hartree5d/functionals.hpp"
#include "hartree5d/ground_state.hpp"
#include "hartree5d/potentials.hpp"

namespace hartree5d {

enum class Regime { scattering_candidate, blowup_candidate, indeterminate };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::scattering_candidate: return "scattering_candidate";
    case Regime::blowup_candidate: return "blowup_candidate";
    case Regime::indeterminate: return "indeterminate";
  }
  return "unknown";
}

/// Relative dead-band around f0 = 1 where no regime is assigned.
inline constexpr double kThresholdDeadBand = 1e-6;

struct ClassificationReport {
  double me_product = 0.0;
  double me_threshold = 0.0;
  bool below_threshold = false;
  double f0 = 0.0;
  double g_f0 = 0.0;
  Regime regime = Regime::indeterminate;
  HypothesisReport hypothesis_report;
  std::vector<std::string> notes;
};

/// M(u0) E(u0) (with V) against M(Q) E_0(Q), and the gradient product f0.
template <typename T>
ClassificationReport classify(const Field<T>& u0, const PotentialField& pot, const GroundStateResult& gs) {
  require_converged(gs);
  require_same_grid(u0, pot.v);
  require_same_grid(u0, gs.Q);

  ClassificationReport rep;
  rep.me_product = mass(u0) * energy(u0, pot);
  rep.me_threshold = gs.mass * free_energy(gs.Q);
  rep.below_threshold = rep.me_product < rep.me_threshold;
  rep.f0 = threshold_f(u0, pot, gs);
  rep.g_f0 = g_of_f(rep.f0);
  rep.hypothesis_report = check_hypotheses(pot);

  const bool knife_edge = std::abs(rep.f0 - 1.0) <= kThresholdDeadBand;
  if (rep.below_threshold && !knife_edge) {
    rep.regime = rep.f0 < 1.0 ? Regime::scattering_candidate : Regime::blowup_candidate;
  }

  auto& notes = rep.notes;
  notes.push_back("radial symmetry holds by construction");
  if (!rep.below_threshold) notes.push_back("M(u0)E(u0) >= M(Q)E0(Q): above the mass-energy threshold");
  if (knife_edge) notes.push_back("f0 within the dead-band of 1: threshold case");
  const HypothesisReport& h = rep.hypothesis_report;
  if (!h.v_nonneg) notes.push_back("V ≥ 0 fails");
  notes.push_back(h.rdv_nonpos ? "x·∇V ≤ 0 holds" : "x·∇V ≤ 0 fails");
  notes.push_back(h.blowup_cond ? "2V + x·∇V ≥ 0 holds" : "2V + x·∇V ≥ 0 fails");
  if (rep.regime == Regime::scattering_candidate && !h.rdv_nonpos) {
    notes.push_back("scattering side-condition x·∇V ≤ 0 is not met");
  }
  if (rep.regime == Regime::blowup_candidate && !h.blowup_cond) {
    notes.push_back("blow-up side-condition 2V + x·∇V ≥ 0 is not met");
  }
  notes.push_back("absence of eigenvalues for -Laplace + V is not verified");
  return rep;
}

}  // namespace hartree5d
