// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hartree5d/classifier.hpp"
#include "hartree5d/evolution.hpp"
#include "hartree5d/ground_state.hpp"
#include "hartree5d/newton_potential.hpp"
#include "hartree5d/oracle.hpp"
#include "hartree5d/probes.hpp"

using namespace hartree5d;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Criterion {
  std::string id;
  std::string title;
  std::function<bool(std::ostringstream&)> run;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const GroundStateResult& default_gs() {
  static const GroundStateResult gs = solve_ground_state(make_grid(4096, 30.0), 1e-10, 2000);
  return gs;
}

const GroundStateResult& wide_gs() {
  static const GroundStateResult gs = solve_ground_state(make_grid(8192, 60.0), 1e-10, 2000);
  return gs;
}

RadialField scaled_q(const GroundStateResult& gs, double c) {
  RadialField u = to_complex(gs.Q);
  u *= Complex(c);
  return u;
}

EvolutionConfig run_config(double dt, double t_end, double morawetz_radius = 0.0) {
  EvolutionConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.output_every = 10;
  cfg.morawetz_radius = morawetz_radius;
  return cfg;
}

bool pohozaev(std::ostringstream& msg) {
  const GroundStateResult& gs = default_gs();
  const double g = gs.pohozaev_grad_ratio;
  const double p = gs.pohozaev_P_ratio;
  msg << "converged=" << gs.converged << " grad/M=" << g << " P/M=" << p;
  return gs.converged && std::abs(g - 3.0) <= 5e-3 && std::abs(p - 4.0) <= 5e-3;
}

bool identities(std::ostringstream& msg) {
  const GroundStateResult& gs = default_gs();
  const double threshold = gs.mass * free_energy(gs.Q) / (gs.mass * gs.grad_sq / 6.0);
  const double sharp = gs.c_gn * 3.0 * std::sqrt(3.0) * gs.mass / 4.0;
  msg << "ME0/(MG/6)=" << threshold << " c_gn*3sqrt3*M/4=" << sharp;
  return std::abs(threshold - 1.0) <= 1e-3 && std::abs(sharp - 1.0) <= 1e-3;
}

bool newton_gate(std::ostringstream& msg) {
  const GridPtr g = make_grid(4096, 30.0);
  const RealField phi = hartree_potential(RealField::sample(g, [](double r) { return std::exp(-r * r); }));
  const auto rho = [](double s) { return std::exp(-s * s); };
  double worst = 0.0;
  for (double r : {0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0}) {
    const double direct = oracle::convolution_direct(rho, r, 0.0, 12.0).value;
    worst = std::max(worst, rel(interpolate(phi, r), direct));
  }
  const double phi0 = value_at_origin(phi);
  const double exact = 4.0 * std::numbers::pi * std::numbers::pi / 3.0;
  msg << "max rel dev=" << worst << " phi(0+)=" << phi0;
  return worst <= 1e-3 && rel(phi0, exact) <= 1e-3;
}

struct Drift {
  double mass = 0.0;
  double energy = 0.0;
};

Drift drift_of(const RunOutcome& run) {
  Drift d;
  const DiagnosticsRow& first = run.series.front();
  for (const DiagnosticsRow& row : run.series) {
    d.mass = std::max(d.mass, rel(row.mass, first.mass));
    d.energy = std::max(d.energy, rel(row.energy, first.energy));
  }
  return d;
}

bool conservation(std::ostringstream& msg) {
  const GroundStateResult& gs = default_gs();
  bool ok = true;
  for (const PotentialSpec& spec : {PotentialSpec::zero(), PotentialSpec::gaussian(0.5, 1.0)}) {
    const PotentialField pot = build_potential(spec, gs.Q.grid_ptr());
    const RunOutcome a = evolve(scaled_q(gs, 0.9), pot, run_config(1e-3, 1.0), gs);
    const RunOutcome b = evolve(scaled_q(gs, 0.9), pot, run_config(5e-4, 1.0), gs);
    const Drift da = drift_of(a);
    const Drift db = drift_of(b);
    const double ratio = da.energy / db.energy;
    msg << to_string(spec.family) << ": mass=" << da.mass << " energy=" << da.energy << " ratio=" << ratio << "; ";
    ok = ok && a.status == RunStatus::completed && b.status == RunStatus::completed && da.mass <= 1e-6 &&
         da.energy <= 1e-4 && ratio >= 3.0;
  }
  return ok;
}

bool virial(std::ostringstream& msg) {
  const GroundStateResult& gs = default_gs();
  const RunOutcome run = evolve(scaled_q(gs, 0.9), zero_potential(gs.Q.grid_ptr()), run_config(1e-3, 1.0), gs);
  const VirialReport rep = virial_check(run);
  msg << "max rel dev=" << rep.max_rel_deviation << " over " << rep.compared << " times";
  return run.status == RunStatus::completed && rep.max_rel_deviation <= 2e-2;
}

bool dichotomy(std::ostringstream& msg) {
  const GroundStateResult& gs = default_gs();
  const PotentialField zero = zero_potential(gs.Q.grid_ptr());
  const RunOutcome below = evolve(scaled_q(gs, 0.9), zero, run_config(1e-3, 20.0), gs);
  double max_f = 0.0;
  double max_local = 0.0;
  for (const DiagnosticsRow& row : below.series) {
    max_f = std::max(max_f, row.f);
    max_local = std::max(max_local, row.local_mass);
  }
  const double end_local = below.series.back().local_mass;
  const RunOutcome above = evolve(scaled_q(gs, 1.1), zero, run_config(1e-3, 20.0), gs);
  msg << "c=0.9: " << to_string(below.status) << " max f=" << max_f << " local mass end/max=" << end_local << "/"
      << max_local << "; c=1.1: " << to_string(above.status) << " at t=" << above.t_final << " (" << above.detector
      << ")";
  return below.status == RunStatus::completed && max_f < 1.0 && end_local < max_local &&
         above.status == RunStatus::blowup_detected && above.t_final < 20.0;
}

bool gn_inequality(std::ostringstream& msg) {
  const GnProbeResult probe = gn_probe(default_gs(), 100, 20240501);
  msg << "max ratio=" << probe.max_ratio << " ratio at Q=" << probe.ratio_at_Q;
  return probe.samples == 100 && probe.max_ratio <= 1.0 + 1e-6 && std::abs(probe.ratio_at_Q - 1.0) <= 1e-3;
}

bool scaling(std::ostringstream& msg) {
  const RealField u = RealField::sample(make_grid(4096, 30.0), [](double r) { return std::exp(-0.5 * r * r); });
  const double dev = scaling_probe(u, {0.5, 2.0});
  msg << "max rel change=" << dev;
  return dev <= 1e-3;
}

bool morawetz(std::ostringstream& msg) {
  // Wide domain so that no outgoing mass returns from the boundary by t = 20.
  const GroundStateResult& gs = wide_gs();
  const PotentialField pot = build_potential(PotentialSpec::gaussian(0.5, 1.0), gs.Q.grid_ptr());
  if (!check_hypotheses(pot).rdv_nonpos) {
    msg << "x.gradV <= 0 fails";
    return false;
  }
  const RunOutcome run = evolve(scaled_q(gs, 0.9), pot, run_config(1e-3, 20.0, 10.0), gs);
  if (run.status != RunStatus::completed) {
    msg << "run ended " << to_string(run.status);
    return false;
  }
  std::vector<double> averages;
  double integral = 0.0;
  std::size_t k = 1;
  for (double T : {5.0, 10.0, 20.0}) {
    for (; k < run.series.size() && run.series[k].t <= T + 1e-9; ++k) {
      const DiagnosticsRow& a = run.series[k - 1];
      const DiagnosticsRow& b = run.series[k];
      integral += 0.5 * (a.P_chi + b.P_chi) * (b.t - a.t);
    }
    averages.push_back(integral / T);
  }
  msg << "averages T=5,10,20: " << averages[0] << ", " << averages[1] << ", " << averages[2];
  return averages[1] <= 1.05 * averages[0] && averages[2] <= 1.05 * averages[1];
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool determinism(std::ostringstream& msg) {
  const fs::path root = fs::temp_directory_path() / "hartree5d_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const json base{{"schema_version", 1},
                  {"grid", {{"n", 1024}, {"r_max", 20.0}}},
                  {"potential", {{"family", "gaussian"}, {"a", 0.5}, {"b", 1.0}}},
                  {"evolve", {{"dt", 1e-3}, {"t_end", 0.5}, {"output_every", 10}, {"morawetz_radius", 10.0}}},
                  {"verify", {{"gn_samples", 20}}}};
  bool ok = true;
  for (const std::string cmd : {"groundstate", "evolve", "classify", "check-potential", "verify"}) {
    const fs::path cfg = root / (cmd + ".json");
    std::ofstream(cfg) << base.dump(2);
    std::vector<fs::path> dirs{root / (cmd + "_a"), root / (cmd + "_b")};
    std::vector<int> codes;
    for (const fs::path& d : dirs) {
      const std::string line = std::string("\"") + HARTREE5D_CLI_PATH + "\" " + cmd + " \"" + cfg.string() +
                               "\" -o \"" + d.string() + "\" > \"" + d.string() + ".log\" 2>&1";
      codes.push_back(std::system(line.c_str()));
    }
    std::size_t compared = 0;
    bool same = codes[0] == codes[1];
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const std::string name = entry.path().filename().string();
      if (name == "run.meta.json") continue;
      same = same && fs::exists(dirs[1] / name) && slurp(entry.path()) == slurp(dirs[1] / name);
      ++compared;
    }
    same = same && compared > 0;
    msg << cmd << "(" << compared << " files)=" << (same ? "same" : "DIFFERENT") << " ";
    ok = ok && same;
  }
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"C1", "Pohozaev identities", pohozaev},
      {"C2", "threshold and sharp-constant identities", identities},
      {"C3", "Newton potential gate", newton_gate},
      {"C4", "mass and energy conservation", conservation},
      {"C5", "virial identity", virial},
      {"C6", "scattering/blow-up dichotomy", dichotomy},
      {"C7", "Gagliardo-Nirenberg probe", gn_inequality},
      {"C8", "scaling symmetry", scaling},
      {"C9", "Morawetz trend", morawetz},
      {"C10", "CLI determinism", determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    std::ostringstream msg;
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = c.run(msg);
    } catch (const std::exception& e) {
      msg << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %-4s %-40s %s [%.1fs]\n", pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(),
                msg.str().c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
