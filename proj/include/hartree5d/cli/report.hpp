#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hartree5d/classifier.hpp"
#include "hartree5d/evolution.hpp"
#include "hartree5d/functionals.hpp"
#include "hartree5d/ground_state.hpp"
#include "hartree5d/potentials.hpp"

namespace hartree5d::cli {

using nlohmann::json;

/// Column order of series.csv; frozen.
inline constexpr const char* kSeriesHeader = "t,mass,energy,free_energy,grad_sq,gradV_sq,P,K,f,local_mass,sup_abs";

/// Fixed 17-significant-digit rendering used for every CSV float.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Non-finite values have no JSON literal; they are written as null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json to_json(const GroundStateResult& gs) {
  return json{{"converged", gs.converged},
              {"iterations", gs.iterations},
              {"residual", number(gs.residual)},
              {"relative_change", number(gs.relative_change)},
              {"stabilizer", number(gs.stabilizer)},
              {"init_amp", number(gs.init_amp)},
              {"mass", number(gs.mass)},
              {"grad_sq", number(gs.grad_sq)},
              {"P", number(gs.P)},
              {"pohozaev_grad_ratio", number(gs.pohozaev_grad_ratio)},
              {"pohozaev_P_ratio", number(gs.pohozaev_P_ratio)},
              {"c_gn", number(gs.c_gn)},
              {"grid", {{"n", gs.Q.size()}, {"r_max", gs.Q.grid().r_max()}}}};
}

inline std::string profile_csv(const RealField& q) {
  std::ostringstream out;
  out << "r,Q\n";
  for (std::size_t i = 0; i < q.size(); ++i) out << fmt17(q.grid().r(i)) << ',' << fmt17(q[i]) << '\n';
  return out.str();
}

/// Reads a Q.csv written by profile_csv back onto the given grid.
inline RealField read_profile_csv(const std::filesystem::path& path, const GridPtr& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "r,Q") throw std::runtime_error(path.string() + ": bad header");
  RealField q(grid);
  std::size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= grid->size()) throw std::runtime_error(path.string() + ": more rows than grid points");
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error(path.string() + ": malformed row");
    const double r = std::stod(line.substr(0, comma));
    const double v = std::stod(line.substr(comma + 1));
    if (std::abs(r - grid->r(i)) > 1e-12 * grid->r_max()) {
      throw std::runtime_error(path.string() + ": radii do not match the configured grid");
    }
    q[i++] = v;
  }
  if (i != grid->size()) throw std::runtime_error(path.string() + ": fewer rows than grid points");
  return q;
}

inline std::string series_csv(const std::vector<DiagnosticsRow>& rows) {
  std::ostringstream out;
  out << kSeriesHeader << '\n';
  for (const DiagnosticsRow& r : rows) {
    out << fmt17(r.t) << ',' << fmt17(r.mass) << ',' << fmt17(r.energy) << ',' << fmt17(r.free_energy) << ','
        << fmt17(r.grad_sq) << ',' << fmt17(r.gradV_sq) << ',' << fmt17(r.P) << ',' << fmt17(r.K) << ','
        << fmt17(r.f) << ',' << fmt17(r.local_mass) << ',' << fmt17(r.sup_abs) << '\n';
  }
  return out.str();
}

/// Companion columns for the virial and Morawetz checks.
inline std::string series_aux_csv(const std::vector<DiagnosticsRow>& rows) {
  std::ostringstream out;
  out << "t,x2_moment,P_chi\n";
  for (const DiagnosticsRow& r : rows) {
    out << fmt17(r.t) << ',' << fmt17(r.x2_moment) << ',' << fmt17(r.P_chi) << '\n';
  }
  return out.str();
}

/// RunOutcome without the series.
inline json to_json(const RunOutcome& o) {
  json j{{"status", to_string(o.status)},
         {"t_final", number(o.t_final)},
         {"rows", o.series.size()},
         {"steps", o.steps},
         {"dt_final", number(o.dt_final)},
         {"dt_halvings", o.dt_halvings}};
  j["blowup_time_estimate"] = o.blowup_time_estimate ? number(*o.blowup_time_estimate) : json(nullptr);
  j["detector"] = o.detector.empty() ? json(nullptr) : json(o.detector);
  return j;
}

inline json to_json(const std::optional<Violation>& v) {
  if (!v) return nullptr;
  return json{{"r", number(v->r)}, {"magnitude", number(v->magnitude)}};
}

inline json to_json(const HypothesisReport& h) {
  return json{{"v_nonneg", h.v_nonneg},
              {"rdv_nonpos", h.rdv_nonpos},
              {"blowup_cond", h.blowup_cond},
              {"v_l52_norm", number(h.v_l52_norm)},
              {"rdv_l52_norm", number(h.rdv_l52_norm)},
              {"h2_verified", false},
              {"worst_violation",
               {{"v_nonneg", to_json(h.v_nonneg_violation)},
                {"rdv_nonpos", to_json(h.rdv_nonpos_violation)},
                {"blowup_cond", to_json(h.blowup_cond_violation)}}}};
}

inline json to_json(const ClassificationReport& c) {
  return json{{"me_product", number(c.me_product)},
              {"me_threshold", number(c.me_threshold)},
              {"me_ratio", number(c.me_product / c.me_threshold)},
              {"below_threshold", c.below_threshold},
              {"f0", number(c.f0)},
              {"g_f0", number(c.g_f0)},
              {"regime", to_string(c.regime)},
              {"hypothesis_report", to_json(c.hypothesis_report)},
              {"notes", c.notes}};
}

}  // namespace hartree5d::cli
