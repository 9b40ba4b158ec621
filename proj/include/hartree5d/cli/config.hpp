#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hartree5d/evolution.hpp"
#include "hartree5d/potentials.hpp"

namespace hartree5d::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroundStateConfig {
  double tol = 1e-10;
  int max_iter = 2000;
  double init_amp = 3.0;
  /// Directory holding a previous groundstate run (Q.csv); empty means solve inline.
  std::string load;
};

enum class InitialKind { scaled_Q, gaussian };

/// scaled_Q: c Q(r);  gaussian: c exp(-r^2 / (2 width^2)).
struct InitialData {
  InitialKind kind = InitialKind::scaled_Q;
  double c = 0.9;
  double width = 1.0;
};

struct VerifyConfig {
  std::uint64_t seed = 20240501;
  int gn_samples = 100;
};

struct SweepEntry {
  std::string name;
  json overrides;
};

struct SweepConfig {
  bool parallel = false;
  std::vector<SweepEntry> entries;
};

struct Config {
  int schema_version = kSchemaVersion;
  std::size_t grid_n = 4096;
  double grid_r_max = 30.0;
  PotentialSpec potential;
  GroundStateConfig groundstate;
  EvolutionConfig evolve;
  InitialData u0;
  VerifyConfig verify;
  SweepConfig sweep;
};

namespace detail {

inline void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("");
      out = v.get<double>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("");
      out = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError("");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && v.get<long long>() < 0) throw ConfigError("");
      }
      out = v.get<T>();
    } else {
      if (!v.is_string()) throw ConfigError("");
      out = v.get<T>();
    }
  } catch (const std::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

inline PotentialSpec parse_potential(const json& p) {
  check_keys(p, "potential", {"family", "a", "b", "p", "table"});
  std::string family = "zero";
  read(p, "family", "potential", family);
  PotentialSpec spec;
  try {
    spec.family = potential_family_from_string(family);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("potential.family: ") + e.what());
  }
  read(p, "a", "potential", spec.amplitude);
  if (spec.family == PotentialFamily::gaussian) read(p, "b", "potential", spec.shape);
  if (spec.family == PotentialFamily::lorentzian) read(p, "p", "potential", spec.shape);
  if (p.contains("table")) {
    const json& t = p.at("table");
    if (!t.is_array()) throw ConfigError("potential.table: expected an array of [r, V] pairs");
    for (const json& row : t) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
        throw ConfigError("potential.table: expected an array of [r, V] pairs");
      }
      spec.table.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
  }
  return spec;
}

}  // namespace detail

/// Reads a validated Config from parsed JSON. Unknown keys are rejected.
inline Config config_from_json(const json& j) {
  using detail::check_keys;
  using detail::read;
  check_keys(j, "config", {"schema_version", "grid", "potential", "groundstate", "evolve", "verify", "sweep"});
  Config c;
  if (!j.contains("schema_version")) throw ConfigError("config: missing schema_version");
  read(j, "schema_version", "config", c.schema_version);
  if (c.schema_version != kSchemaVersion) {
    throw ConfigError("config: unsupported schema_version " + std::to_string(c.schema_version));
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, "grid", {"n", "r_max"});
    read(g, "n", "grid", c.grid_n);
    read(g, "r_max", "grid", c.grid_r_max);
  }
  if (j.contains("potential")) c.potential = detail::parse_potential(j.at("potential"));
  if (j.contains("groundstate")) {
    const json& g = j.at("groundstate");
    check_keys(g, "groundstate", {"tol", "max_iter", "init_amp", "load"});
    read(g, "tol", "groundstate", c.groundstate.tol);
    read(g, "max_iter", "groundstate", c.groundstate.max_iter);
    read(g, "init_amp", "groundstate", c.groundstate.init_amp);
    read(g, "load", "groundstate", c.groundstate.load);
  }
  if (j.contains("evolve")) {
    const json& e = j.at("evolve");
    check_keys(e, "evolve",
               {"dt", "t_end", "output_every", "caps", "local_mass_radius", "morawetz_radius", "u0"});
    read(e, "dt", "evolve", c.evolve.dt);
    read(e, "t_end", "evolve", c.evolve.t_end);
    read(e, "output_every", "evolve", c.evolve.output_every);
    read(e, "local_mass_radius", "evolve", c.evolve.local_mass_radius);
    read(e, "morawetz_radius", "evolve", c.evolve.morawetz_radius);
    if (e.contains("caps")) {
      const json& caps = e.at("caps");
      check_keys(caps, "evolve.caps", {"blowup_grad_factor", "blowup_sup_cap", "phase_cap"});
      read(caps, "blowup_grad_factor", "evolve.caps", c.evolve.blowup_grad_factor);
      read(caps, "blowup_sup_cap", "evolve.caps", c.evolve.blowup_sup_cap);
      read(caps, "phase_cap", "evolve.caps", c.evolve.phase_cap);
    }
    if (e.contains("u0")) {
      const json& u = e.at("u0");
      check_keys(u, "evolve.u0", {"kind", "c", "width"});
      std::string kind = "scaled_Q";
      read(u, "kind", "evolve.u0", kind);
      if (kind == "scaled_Q") {
        c.u0.kind = InitialKind::scaled_Q;
      } else if (kind == "gaussian") {
        c.u0.kind = InitialKind::gaussian;
      } else {
        throw ConfigError("evolve.u0.kind: unknown kind '" + kind + "'");
      }
      read(u, "c", "evolve.u0", c.u0.c);
      read(u, "width", "evolve.u0", c.u0.width);
      if (!(c.u0.width > 0.0)) throw ConfigError("evolve.u0.width must be positive");
    }
  }
  if (j.contains("verify")) {
    const json& v = j.at("verify");
    check_keys(v, "verify", {"seed", "gn_samples"});
    read(v, "seed", "verify", c.verify.seed);
    read(v, "gn_samples", "verify", c.verify.gn_samples);
    if (c.verify.gn_samples < 1) throw ConfigError("verify.gn_samples must be >= 1");
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, "sweep", {"parallel", "entries"});
    read(s, "parallel", "sweep", c.sweep.parallel);
    if (s.contains("entries")) {
      if (!s.at("entries").is_array()) throw ConfigError("sweep.entries: expected an array");
      std::set<std::string> names;
      for (const json& entry : s.at("entries")) {
        check_keys(entry, "sweep.entries[]", {"name", "overrides"});
        SweepEntry se;
        read(entry, "name", "sweep.entries[]", se.name);
        if (se.name.empty() || se.name.find('/') != std::string::npos || se.name == "." || se.name == "..") {
          throw ConfigError("sweep.entries[]: each entry needs a plain directory name");
        }
        if (!names.insert(se.name).second) throw ConfigError("sweep.entries[]: duplicate name " + se.name);
        se.overrides = entry.value("overrides", json::object());
        if (!se.overrides.is_object()) throw ConfigError("sweep.entries[].overrides: expected an object");
        if (se.overrides.contains("sweep")) throw ConfigError("sweep.entries[].overrides: nested sweep");
        c.sweep.entries.push_back(std::move(se));
      }
    }
  }
  if (c.grid_n < RadialGrid::kMinPoints) throw ConfigError("grid.n must be >= 16");
  if (!(c.grid_r_max > 0.0)) throw ConfigError("grid.r_max must be positive");
  if (!(c.groundstate.tol > 0.0 && c.groundstate.tol <= 1e-2)) {
    throw ConfigError("groundstate.tol must lie in (0, 1e-2]");
  }
  if (c.groundstate.max_iter < 1) throw ConfigError("groundstate.max_iter must be >= 1");
  try {
    c.evolve.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("evolve: ") + e.what());
  }
  return c;
}

/// Parses JSON text; syntax errors carry line and column numbers.
inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    if (pos != std::string::npos) what = what.substr(pos);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

}  // namespace hartree5d::cli
