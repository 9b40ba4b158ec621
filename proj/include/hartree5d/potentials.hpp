#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hartree5d/radial_grid.hpp"

namespace hartree5d {

enum class PotentialFamily { zero, gaussian, lorentzian, table };

inline std::string to_string(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::zero: return "zero";
    case PotentialFamily::gaussian: return "gaussian";
    case PotentialFamily::lorentzian: return "lorentzian";
    case PotentialFamily::table: return "table";
  }
  return "unknown";
}

inline PotentialFamily potential_family_from_string(const std::string& s) {
  if (s == "zero") return PotentialFamily::zero;
  if (s == "gaussian") return PotentialFamily::gaussian;
  if (s == "lorentzian") return PotentialFamily::lorentzian;
  if (s == "table") return PotentialFamily::table;
  throw std::invalid_argument("unknown potential family '" + s + "'");
}

/// gaussian:   V = a exp(-b r^2)
/// lorentzian: V = a (1 + r^2)^(-shape)
/// table:      piecewise-linear through (r, V) nodes, constant outside them.
struct PotentialSpec {
  PotentialFamily family = PotentialFamily::zero;
  double amplitude = 0.0;
  double shape = 1.0;
  std::vector<std::pair<double, double>> table;

  static PotentialSpec zero() { return {}; }
  static PotentialSpec gaussian(double a, double b) {
    return {PotentialFamily::gaussian, a, b, {}};
  }
  static PotentialSpec lorentzian(double a, double p) {
    return {PotentialFamily::lorentzian, a, p, {}};
  }
  static PotentialSpec from_table(std::vector<std::pair<double, double>> nodes) {
    return {PotentialFamily::table, 0.0, 1.0, std::move(nodes)};
  }
};

/// V and x.grad V = r V'(r) sampled on the grid.
struct PotentialField {
  RealField v;
  RealField rdv;

  bool is_zero() const {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0.0 || rdv[i] != 0.0) return false;
    }
    return true;
  }
};

inline PotentialField zero_potential(const GridPtr& grid) {
  return {RealField(grid), RealField(grid)};
}

inline PotentialField build_potential(const PotentialSpec& spec, const GridPtr& grid) {
  PotentialField out = zero_potential(grid);
  const RadialGrid& g = *grid;
  switch (spec.family) {
    case PotentialFamily::zero:
      break;
    case PotentialFamily::gaussian:
    case PotentialFamily::lorentzian: {
      if (!(spec.amplitude >= 0.0)) throw std::invalid_argument("potential amplitude must be >= 0");
      if (!(spec.shape > 0.0)) throw std::invalid_argument("potential shape parameter must be > 0");
      const double a = spec.amplitude;
      const double s = spec.shape;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double r2 = g.r(i) * g.r(i);
        if (spec.family == PotentialFamily::gaussian) {
          const double e = std::exp(-s * r2);
          out.v[i] = a * e;
          out.rdv[i] = -2.0 * a * s * r2 * e;
        } else {
          const double base = 1.0 + r2;
          const double vv = a * std::pow(base, -s);
          out.v[i] = vv;
          out.rdv[i] = -2.0 * s * r2 * vv / base;
        }
      }
      break;
    }
    case PotentialFamily::table: {
      const auto& t = spec.table;
      if (t.size() < 2) throw std::invalid_argument("table potential needs at least two nodes");
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (!std::isfinite(t[k].first) || !std::isfinite(t[k].second)) {
          throw std::invalid_argument("table potential has a non-finite entry");
        }
        if (k > 0 && !(t[k].first > t[k - 1].first)) {
          throw std::invalid_argument("table potential nodes must be strictly increasing");
        }
      }
      std::size_t k = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.r(i);
        if (r <= t.front().first) {
          out.v[i] = t.front().second;
          continue;
        }
        if (r >= t.back().first) {
          out.v[i] = t.back().second;
          continue;
        }
        while (t[k + 1].first < r) ++k;
        const double slope = (t[k + 1].second - t[k].second) / (t[k + 1].first - t[k].first);
        out.v[i] = t[k].second + slope * (r - t[k].first);
        out.rdv[i] = r * slope;
      }
      break;
    }
  }
  return out;
}

struct Violation {
  double r = 0.0;
  double magnitude = 0.0;
};

/// Pointwise checks of V >= 0, x.grad V <= 0 and 2V + x.grad V >= 0 plus the
/// L^{5/2} norms of V and x.grad V. Purely descriptive.
struct HypothesisReport {
  bool v_nonneg = true;
  double v_l52_norm = 0.0;
  double rdv_l52_norm = 0.0;
  bool rdv_nonpos = true;
  bool blowup_cond = true;
  std::optional<Violation> v_nonneg_violation;
  std::optional<Violation> rdv_nonpos_violation;
  std::optional<Violation> blowup_cond_violation;
};

inline HypothesisReport check_hypotheses(const PotentialField& pot) {
  const RadialGrid& g = pot.v.grid();
  HypothesisReport rep;
  auto record = [](std::optional<Violation>& slot, double r, double mag) {
    if (!slot || mag > slot->magnitude) slot = Violation{r, mag};
  };
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = pot.v[i];
    const double rdv = pot.rdv[i];
    if (v < 0.0) record(rep.v_nonneg_violation, g.r(i), -v);
    if (rdv > 0.0) record(rep.rdv_nonpos_violation, g.r(i), rdv);
    const double combo = 2.0 * v + rdv;
    if (combo < 0.0) record(rep.blowup_cond_violation, g.r(i), -combo);
  }
  rep.v_nonneg = !rep.v_nonneg_violation;
  rep.rdv_nonpos = !rep.rdv_nonpos_violation;
  rep.blowup_cond = !rep.blowup_cond_violation;
  rep.v_l52_norm = lp_norm(pot.v, 2.5);
  rep.rdv_l52_norm = lp_norm(pot.rdv, 2.5);
  return rep;
}

}  // namespace hartree5d
