#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hartree5d/classifier.hpp"
#include "hartree5d/cli/config.hpp"
#include "hartree5d/cli/report.hpp"
#include "hartree5d/evolution.hpp"
#include "hartree5d/ground_state.hpp"
#include "hartree5d/newton_potential.hpp"
#include "hartree5d/oracle.hpp"
#include "hartree5d/potentials.hpp"
#include "hartree5d/probes.hpp"

namespace hartree5d::cli {

namespace fs = std::filesystem;

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNotConverged = 2,
  kBlowup = 3,
  kDtUnderflow = 4,
  kIndeterminate = 5,
  kVerifyFailed = 6,
};

namespace detail {

inline GridPtr grid_of(const Config& c) { return make_grid(c.grid_n, c.grid_r_max); }

/// Solves inline or loads groundstate.load/Q.csv; nullopt when not converged.
inline std::optional<GroundStateResult> obtain_ground_state(const Config& c, const GridPtr& grid,
                                                            std::ostream& log) {
  GroundStateResult gs;
  if (!c.groundstate.load.empty()) {
    const fs::path path = fs::path(c.groundstate.load) / "Q.csv";
    try {
      gs = ground_state_from_profile(read_profile_csv(path, grid), c.groundstate.tol);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("groundstate.load: ") + e.what());
    }
  } else {
    gs = solve_ground_state(grid, c.groundstate.tol, c.groundstate.max_iter, c.groundstate.init_amp);
  }
  if (!gs.converged) {
    log << "ground state did not converge (residual " << gs.residual << ")\n";
    return std::nullopt;
  }
  return gs;
}

inline RadialField initial_data(const Config& c, const GridPtr& grid, const GroundStateResult& gs) {
  if (c.u0.kind == InitialKind::scaled_Q) {
    RadialField u = to_complex(gs.Q);
    u *= Complex(c.u0.c);
    return u;
  }
  const double w = c.u0.width;
  const double amp = c.u0.c;
  return RadialField::sample(grid, [=](double r) { return Complex(amp * std::exp(-r * r / (2.0 * w * w))); });
}

inline PotentialField potential_of(const Config& c, const GridPtr& grid) {
  try {
    return build_potential(c.potential, grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
}

}  // namespace detail

inline int run_groundstate(const Config& c, const fs::path& out, std::ostream& log) {
  const GridPtr grid = detail::grid_of(c);
  GroundStateResult gs;
  try {
    gs = solve_ground_state(grid, c.groundstate.tol, c.groundstate.max_iter, c.groundstate.init_amp);
  } catch (const GroundStateCollapse& e) {
    log << e.what() << '\n';
    write_json(out / "groundstate.json", json{{"converged", false}, {"error", e.what()}});
    return kNotConverged;
  }
  write_text(out / "Q.csv", profile_csv(gs.Q));
  write_json(out / "groundstate.json", to_json(gs));
  log << "groundstate: converged=" << gs.converged << " iterations=" << gs.iterations
      << " |grad Q|^2/|Q|^2=" << gs.pohozaev_grad_ratio << '\n';
  return gs.converged ? kOk : kNotConverged;
}

inline int run_evolve(const Config& c, const fs::path& out, std::ostream& log) {
  const GridPtr grid = detail::grid_of(c);
  const PotentialField pot = detail::potential_of(c, grid);
  const auto gs = detail::obtain_ground_state(c, grid, log);
  if (!gs) return kNotConverged;
  const RadialField u0 = detail::initial_data(c, grid, *gs);
  RunOutcome outcome;
  try {
    outcome = evolve(u0, pot, c.evolve, *gs);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("evolve: ") + e.what());
  }
  write_text(out / "series.csv", series_csv(outcome.series));
  write_text(out / "series_aux.csv", series_aux_csv(outcome.series));
  write_json(out / "outcome.json", to_json(outcome));
  log << "evolve: " << to_string(outcome.status) << " at t=" << outcome.t_final << '\n';
  switch (outcome.status) {
    case RunStatus::completed: return kOk;
    case RunStatus::blowup_detected: return kBlowup;
    case RunStatus::dt_underflow: return kDtUnderflow;
  }
  return kOk;
}

inline int run_classify(const Config& c, const fs::path& out, std::ostream& log) {
  const GridPtr grid = detail::grid_of(c);
  const PotentialField pot = detail::potential_of(c, grid);
  const auto gs = detail::obtain_ground_state(c, grid, log);
  if (!gs) return kNotConverged;
  const ClassificationReport rep = classify(detail::initial_data(c, grid, *gs), pot, *gs);
  write_json(out / "classification.json", to_json(rep));
  log << "classify: " << to_string(rep.regime) << '\n';
  switch (rep.regime) {
    case Regime::scattering_candidate: return kOk;
    case Regime::blowup_candidate: return kBlowup;
    case Regime::indeterminate: return kIndeterminate;
  }
  return kOk;
}

inline int run_check_potential(const Config& c, const fs::path& out, std::ostream& log) {
  const GridPtr grid = detail::grid_of(c);
  const HypothesisReport rep = check_hypotheses(detail::potential_of(c, grid));
  json j = to_json(rep);
  j["family"] = to_string(c.potential.family);
  write_json(out / "hypotheses.json", j);
  log << "check-potential: V>=0 " << rep.v_nonneg << ", x.gradV<=0 " << rep.rdv_nonpos << ", 2V+x.gradV>=0 "
      << rep.blowup_cond << '\n';
  return kOk;
}

struct VerifyGate {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Oracle gates: kernel constant, Pohozaev/GN identities, virial, scaling.
inline std::vector<VerifyGate> verify_gates(const Config& c, const GroundStateResult& gs) {
  const GridPtr grid = gs.Q.grid_ptr();
  std::vector<VerifyGate> gates;
  auto gate = [&](std::string name, double value, double threshold) {
    gates.push_back({std::move(name), value, threshold, value <= threshold});
  };

  gate("pohozaev_grad_ratio", std::abs(gs.pohozaev_grad_ratio - 3.0), 5e-3);
  gate("pohozaev_P_ratio", std::abs(gs.pohozaev_P_ratio - 4.0), 5e-3);
  gate("sharp_constant", std::abs(gs.c_gn * 3.0 * std::sqrt(3.0) * gs.mass / 4.0 - 1.0), 1e-3);
  gate("threshold_identity", std::abs(gs.mass * free_energy(gs.Q) / (gs.mass * gs.grad_sq / 6.0) - 1.0), 1e-3);

  const RealField rho = RealField::sample(grid, [](double r) { return std::exp(-r * r); });
  const RealField phi = hartree_potential(rho);
  const auto gaussian = [](double s) { return std::exp(-s * s); };
  const double support = std::min(grid->r_max(), 12.0);
  double kernel_dev = 0.0;
  for (double r : {0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0}) {
    const double probe = std::min(r, 0.5 * grid->r_max());
    const double direct = oracle::convolution_direct(gaussian, probe, 0.0, support).value;
    kernel_dev = std::max(kernel_dev, std::abs(interpolate(phi, probe) - direct) / direct);
  }
  gate("newton_kernel", kernel_dev, 1e-3);
  const double phi0 = 4.0 * std::numbers::pi * std::numbers::pi / 3.0;
  gate("newton_origin", std::abs(value_at_origin(phi) - phi0) / phi0, 1e-3);

  EvolutionConfig ec;
  ec.dt = 1e-3;
  ec.t_end = 1.0;
  ec.output_every = 10;
  ec.local_mass_radius = std::min(5.0, grid->r_max());
  RadialField u0 = to_complex(gs.Q);
  u0 *= Complex(0.9);
  const RunOutcome run = evolve(u0, zero_potential(grid), ec, gs);
  gate("virial_identity", virial_check(run).max_rel_deviation, 2e-2);

  const GnProbeResult gn = gn_probe(gs, c.verify.gn_samples, c.verify.seed);
  gate("gn_max_ratio", gn.max_ratio, 1.0 + 1e-6);
  gate("gn_ratio_at_Q", std::abs(gn.ratio_at_Q - 1.0), 1e-3);

  const RealField gauss = RealField::sample(grid, [](double r) { return std::exp(-0.5 * r * r); });
  gate("scaling_symmetry", scaling_probe(gauss, {0.5, 2.0}), 1e-3);
  return gates;
}

inline int run_verify(const Config& c, const fs::path& out, std::ostream& log) {
  const GridPtr grid = detail::grid_of(c);
  const auto gs = detail::obtain_ground_state(c, grid, log);
  if (!gs) return kNotConverged;
  const std::vector<VerifyGate> gates = verify_gates(c, *gs);
  std::ostringstream csv;
  csv << "gate,value,threshold,pass\n";
  json j = json::array();
  bool all = true;
  for (const VerifyGate& g : gates) {
    csv << g.name << ',' << fmt17(g.value) << ',' << fmt17(g.threshold) << ',' << (g.pass ? "pass" : "FAIL") << '\n';
    j.push_back({{"gate", g.name}, {"value", number(g.value)}, {"threshold", g.threshold}, {"pass", g.pass}});
    log << (g.pass ? "PASS " : "FAIL ") << g.name << " value=" << g.value << " threshold=" << g.threshold << '\n';
    all = all && g.pass;
  }
  write_text(out / "verify.csv", csv.str());
  write_json(out / "verify.json", json{{"all_pass", all}, {"gates", j}});
  return all ? kOk : kVerifyFailed;
}

using CommandFn = int (*)(const Config&, const fs::path&, std::ostream&);

inline std::optional<CommandFn> find_command(const std::string& name) {
  if (name == "groundstate") return &run_groundstate;
  if (name == "evolve") return &run_evolve;
  if (name == "classify") return &run_classify;
  if (name == "check-potential") return &run_check_potential;
  if (name == "verify") return &run_verify;
  return std::nullopt;
}

/// Runs one command, or every sweep entry (each in out/<name>) when the config
/// has any. A sweep returns the largest entry exit code and writes sweep.json.
inline int run_command(const std::string& name, const json& raw, const fs::path& out, std::ostream& log) {
  const auto fn = find_command(name);
  if (!fn) {
    log << "unknown command " << name << '\n';
    return kConfigError;
  }
  auto run_one = [&](const json& cfg_json, const fs::path& dir, std::ostream& os) -> int {
    try {
      const Config c = config_from_json(cfg_json);
      fs::create_directories(dir);
      return (*fn)(c, dir, os);
    } catch (const ConfigError& e) {
      os << "config error: " << e.what() << '\n';
      return kConfigError;
    } catch (const GroundStateCollapse& e) {
      os << e.what() << '\n';
      return kNotConverged;
    }
  };

  Config base;
  try {
    base = config_from_json(raw);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (base.sweep.entries.empty()) return run_one(raw, out, log);

  json stripped = raw;
  stripped.erase("sweep");
  const auto& entries = base.sweep.entries;
  std::vector<int> codes(entries.size(), 0);
  std::vector<std::string> logs(entries.size());
  auto task = [&](std::size_t k) {
    json merged = stripped;
    merged.merge_patch(entries[k].overrides);
    std::ostringstream os;
    codes[k] = run_one(merged, out / entries[k].name, os);
    logs[k] = os.str();
  };
  if (base.sweep.parallel) {
    std::vector<std::future<void>> futures;
    for (std::size_t k = 0; k < entries.size(); ++k) futures.push_back(std::async(std::launch::async, task, k));
    for (auto& f : futures) f.get();
  } else {
    for (std::size_t k = 0; k < entries.size(); ++k) task(k);
  }
  json index = json::array();
  int worst = kOk;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    log << "[" << entries[k].name << "] " << logs[k];
    index.push_back({{"name", entries[k].name}, {"exit_code", codes[k]}});
    worst = std::max(worst, codes[k]);
  }
  fs::create_directories(out);
  write_json(out / "sweep.json", json{{"command", name}, {"entries", index}});
  return worst;
}

}  // namespace hartree5d::cli
