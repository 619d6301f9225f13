// Copyright 2026 The CSM Toolbox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runner behind the `csm` command-line tool. Configuration comes
// from key=value text and/or flags; every CSV starts with "# key=value"
// lines holding the resolved configuration.

#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "csm/csm.hpp"

namespace csm::cli {

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"dim",     "kdiag",   "hamiltonian",
                                             "evolve",  "vqt",     "vqe",
                                             "entropy", "gibbs-observable"};
  return c;
}

struct ExperimentConfig {
  std::string command;
  std::string group = "su2";
  int sites = 2;
  double m = 0.5;
  double g2 = 0.5;
  std::string mu = "0";        // grid start:stop:step or a single value
  double T = 0.5;
  double dt = 0.25;
  int steps = 40;
  std::string lambda = "0";    // grid, like mu
  std::string obs = "mass";    // mass, electric, kinetic, energy
  std::string init = "vac";    // singlet library key
  std::string state = "gibbs"; // entropy input: gibbs or vqt
  long samples = 0;            // 0 selects exact traces
  std::uint64_t seed = 1;
  int trials = 5;
  int max_evals = 2000;
  std::uint64_t shots = 0;     // 0 selects exact expectation values
  std::string out;             // empty writes to stdout
};

/// Inclusive grid "start:stop:step" (endpoints within 1e-9) or one value.
inline std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad grid '" + text + "'");
    }
    if (used != tok.size()) throw InvalidArgument("bad grid '" + text + "'");
    parts.push_back(v);
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw InvalidArgument("grid must be start:stop:step, got '" + text + "'");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0) || stop < start) throw InvalidArgument("grid needs step > 0 and stop >= start");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double x = start + static_cast<double>(i) * step;
    if (x > stop + 1e-9) break;
    out.push_back(std::abs(x - stop) <= 1e-9 ? stop : x);
  }
  return out;
}

namespace detail {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  T v{};
  is >> v;
  if (is.fail() || !is.eof()) throw InvalidArgument("bad value for " + key + ": '" + value + "'");
  return v;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Sets one configuration key; unknown keys are rejected.
inline void set_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
  using detail::parse_number;
  if (key == "command") c.command = value;
  else if (key == "group") c.group = value;
  else if (key == "sites") c.sites = parse_number<int>(key, value);
  else if (key == "m") c.m = parse_number<double>(key, value);
  else if (key == "g2") c.g2 = parse_number<double>(key, value);
  else if (key == "mu") c.mu = value;
  else if (key == "T") c.T = parse_number<double>(key, value);
  else if (key == "dt") c.dt = parse_number<double>(key, value);
  else if (key == "steps") c.steps = parse_number<int>(key, value);
  else if (key == "lambda") c.lambda = value;
  else if (key == "obs") c.obs = value;
  else if (key == "init") c.init = value;
  else if (key == "state") c.state = value;
  else if (key == "samples") c.samples = parse_number<long>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "trials") c.trials = parse_number<int>(key, value);
  else if (key == "max_evals") c.max_evals = parse_number<int>(key, value);
  else if (key == "shots") c.shots = parse_number<std::uint64_t>(key, value);
  else if (key == "out") c.out = value;
  else throw InvalidArgument("unknown config key '" + key + "'");
}

/// Applies "key = value" lines; '#' starts a comment.
inline void load_config_text(ExperimentConfig& c, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key=value");
    set_value(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
}

inline void load_config_file(ExperimentConfig& c, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  load_config_text(c, ss.str());
}

inline ModelSpec model_spec(const ExperimentConfig& c, double mu) {
  ModelSpec s{parse_group(c.group), c.sites, c.m, c.g2, mu};
  s.validate();
  return s;
}

inline void validate(const ExperimentConfig& c) {
  const auto& cmds = commands();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end())
    throw InvalidArgument("unknown command '" + c.command + "'");
  parse_group(c.group);
  if (c.sites < 1) throw InvalidArgument("sites must be >= 1");
  if (!(c.T > 0)) throw InvalidArgument("T must be positive");
  if (c.steps < 0) throw InvalidArgument("steps must be >= 0");
  if (c.trials < 1) throw InvalidArgument("trials must be >= 1");
  if (c.max_evals < 1) throw InvalidArgument("max_evals must be >= 1");
  if (c.samples != 0 && c.samples < 100) throw InvalidArgument("samples must be 0 or >= 100");
  for (double l : parse_grid(c.lambda))
    if (l < 0 || l > 1) throw InvalidArgument("lambda must lie in [0, 1]");
  parse_grid(c.mu);
  if (c.obs != "mass" && c.obs != "electric" && c.obs != "kinetic" && c.obs != "energy")
    throw InvalidArgument("obs must be mass, electric, kinetic or energy");
  if (c.state != "gibbs" && c.state != "vqt") throw InvalidArgument("state must be gibbs or vqt");
}

inline std::string resolved_header(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "# command=" << c.command << "\n# group=" << c.group << "\n# sites=" << c.sites
     << "\n# m=" << detail::fmt(c.m) << "\n# g2=" << detail::fmt(c.g2) << "\n# mu=" << c.mu
     << "\n# T=" << detail::fmt(c.T) << "\n# dt=" << detail::fmt(c.dt)
     << "\n# steps=" << c.steps << "\n# lambda=" << c.lambda << "\n# obs=" << c.obs
     << "\n# init=" << c.init << "\n# state=" << c.state << "\n# samples=" << c.samples
     << "\n# seed=" << c.seed << "\n# trials=" << c.trials << "\n# max_evals=" << c.max_evals
     << "\n# shots=" << c.shots << "\n";
  return os.str();
}

/// Observable selected by name, scaled by its coupling.
inline OperatorSum observable(const ModelSpec& s, const std::string& name) {
  if (name == "mass") return s.mass * build_component(s, Component::Mass);
  if (name == "electric") return s.coupling_sq * build_component(s, Component::Electric);
  if (name == "kinetic") return build_component(s, Component::Kinetic);
  if (name == "energy") return build_hamiltonian(s);
  throw InvalidArgument("unknown observable '" + name + "'");
}

/// Runtime failure at one grid point; maps to exit code 2.
class PointFailure : public Error {
 public:
  using Error::Error;
};

namespace detail {

// Evaluates f on every grid value in parallel and returns rows in grid order.
template <typename F>
std::vector<std::string> grid_rows(const std::string& label, const std::vector<double>& grid,
                                   F&& f) {
  std::vector<std::string> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      rows[i] = f(i, grid[i]);
    } catch (const InvalidArgument&) {
      throw;
    } catch (const CapExceeded&) {
      throw;
    } catch (const std::exception& e) {
      throw PointFailure("at " + label + "=" + fmt(grid[i]) + ": " + e.what());
    }
  });
  return rows;
}

inline std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (std::uint64_t{words[0]} << 32) | words[1];
}

inline QuantumState library_state(const ModelSpec& s, const std::string& key) {
  if (s.n_sites != 2) throw UnsupportedSpec("initial states are defined on the 2-site cell");
  const auto lib = singlet_library(s.group);
  const auto it = lib.states.find(key);
  if (it == lib.states.end()) throw InvalidArgument("unknown initial state '" + key + "'");
  return QuantumState::pure(it->second);
}

inline VariationalOptions variational_options(const ExperimentConfig& c) {
  VariationalOptions o;
  o.n_trials = c.trials;
  o.max_evals = c.max_evals;
  o.shot_noise = c.shots > 0;
  if (c.shots > 0) o.shots = c.shots;
  return o;
}

inline void run_command(const ExperimentConfig& c, std::ostream& out) {
  const std::vector<double> mus = parse_grid(c.mu);
  if (c.command == "dim") {
    out << fmt(singlet_dimension(model_spec(c, mus.front()))) << "\n";
    return;
  }
  if (c.command == "hamiltonian") {
    out << build_hamiltonian(model_spec(c, mus.front())).to_text();
    return;
  }
  if (c.command == "kdiag") {
    out << resolved_header(c);
    write_k_csv(out, k_diagonal(model_spec(c, mus.front())));
    return;
  }
  if (c.command == "evolve") {
    const std::vector<double> lams = parse_grid(c.lambda);
    if (lams.size() != 1) throw InvalidArgument("evolve takes a single lambda");
    const ModelSpec s = model_spec(c, mus.front());
    const QuantumState init = library_state(s, c.init);
    EvolutionRun run;
    try {
      run = evolve(s, init, c.dt, c.steps, lams.front(), observable(s, c.obs));
    } catch (const NearZeroSingletWeight& e) {
      throw PointFailure("at lambda=" + fmt(lams.front()) + ": " + e.what());
    }
    out << resolved_header(c);
    write_evolution_csv(out, run);
    return;
  }
  if (c.command == "gibbs-observable") {
    const auto rows = grid_rows("mu", mus, [&](std::size_t, double mu) {
      const ModelSpec s = model_spec(c, mu);
      const QuantumState rho = gibbs_state(s, c.T);
      const OperatorSum o = observable(s, c.obs);
      const double via_k = singlet_expectation(rho, o, k_diagonal(s));
      std::string row = fmt(mu) + "," + fmt(c.T) + "," + fmt(via_k) + "," + fmt(expectation(rho, o));
      if (s.n_qubits() <= kMaxMatrixQubits)
        row += "," + fmt(oracle_projected_expectation(s, rho, o));
      else
        row += ",nan";
      return row + "\n";
    });
    out << resolved_header(c) << "mu,T,projected,unprojected,oracle\n";
    for (const auto& r : rows) out << r;
    return;
  }
  if (c.command == "vqt") {
    const auto rows = grid_rows("mu", mus, [&](std::size_t i, double mu) {
      const ModelSpec s = model_spec(c, mu);
      Rng rng(point_seed(c.seed, i));
      const VqtResult r = vqt_optimize(s, c.T, variational_options(c), rng);
      const QuantumState rho = vqt_density_matrix(r.best, s);
      const OperatorSum o = observable(s, c.obs);
      const double vqt_obs = singlet_expectation(rho, o, k_diagonal(s));
      const double exact = oracle_projected_expectation(s, gibbs_state(s, c.T), o);
      return fmt(mu) + "," + fmt(c.T) + "," + fmt(r.best_cost) + "," + fmt(vqt_obs) + "," +
             fmt(exact) + "," + std::to_string(r.best_trial) + "\n";
    });
    out << resolved_header(c) << "mu,T,free_energy,projected_vqt,projected_exact,best_trial\n";
    for (const auto& r : rows) out << r;
    return;
  }
  if (c.command == "vqe") {
    const ModelSpec s = model_spec(c, mus.front());
    const double e0 = ground_state(s).energy;
    const auto rows = grid_rows("lambda", parse_grid(c.lambda), [&](std::size_t i, double lam) {
      Rng rng(point_seed(c.seed, i));
      const VqeResult r = vqe_optimize(s, lam, variational_options(c), rng);
      return fmt(lam) + "," + fmt(r.energy_raw) + "," + fmt(r.energy_csm) + "," + fmt(e0) + "\n";
    });
    out << resolved_header(c) << "lambda,e_raw,e_csm,e_exact\n";
    for (const auto& r : rows) out << r;
    return;
  }
  if (c.command == "entropy") {
    std::vector<EntropyEstimate> est(mus.size());
    const auto rows = grid_rows("mu", mus, [&](std::size_t i, double mu) {
      const ModelSpec s = model_spec(c, mu);
      Rng rng(point_seed(c.seed, i));
      QuantumState rho;
      std::optional<double> s_red;
      if (c.state == "vqt") {
        const VqtResult r = vqt_optimize(s, c.T, variational_options(c), rng);
        rho = vqt_density_matrix(r.best, s);
        s_red = analytic_entropy(r.best.thetas);
      } else {
        rho = gibbs_state(s, c.T);
      }
      est[i] = c.samples > 0 ? singlet_entropy_mc(rho, s, c.T, c.samples, rng, s_red)
                             : singlet_entropy_exact(rho, s, c.T, s_red);
      return std::string();
    });
    std::vector<EntropyRow> table;
    for (std::size_t i = 0; i < mus.size(); ++i) table.push_back({mus[i], c.T, est[i]});
    out << resolved_header(c);
    write_entropy_csv(out, table);
    return;
  }
  throw InvalidArgument("unknown command '" + c.command + "'");
}

}  // namespace detail

/// Runs one experiment. Returns 0 on success, 1 on invalid configuration or
/// a refused size, 2 on a runtime failure at a parameter point.
inline int run(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
    if (c.out.empty()) {
      detail::run_command(c, out);
    } else {
      std::ostringstream buf;
      detail::run_command(c, buf);
      std::ofstream f(c.out);
      if (!f) throw InvalidArgument("cannot write '" + c.out + "'");
      f << buf.str();
    }
    return 0;
  } catch (const PointFailure& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnsupportedSpec& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace csm::cli
