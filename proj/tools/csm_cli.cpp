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

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "csm/cli.hpp"

namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"--group", "group", "gauge group: su2 or su3"},
    {"--sites", "sites", "number of staggered sites N"},
    {"--m", "m", "fermion mass"},
    {"--g2", "g2", "squared coupling g^2"},
    {"--mu", "mu", "chemical potential, value or start:stop:step"},
    {"--T", "T", "temperature"},
    {"--dt", "dt", "Trotter step"},
    {"--steps", "steps", "number of Trotter steps"},
    {"--lambda", "lambda", "two-qubit depolarizing strength, value or grid"},
    {"--obs", "obs", "observable: mass, electric, kinetic, energy"},
    {"--init", "init", "initial singlet state: vac, B, Bbar, M, T, BbarB"},
    {"--state", "state", "entropy input state: gibbs or vqt"},
    {"--samples", "samples", "Monte-Carlo group samples (0 = exact)"},
    {"--seed", "seed", "RNG seed"},
    {"--trials", "trials", "random restarts of the optimizer"},
    {"--max-evals", "max_evals", "cost evaluations per trial"},
    {"--shots", "shots", "shots per Pauli term (0 = exact)"},
    {"--out", "out", "output file (default stdout)"},
};

const std::map<std::string, std::string> kDescriptions = {
    {"dim", "dimension of the charge-singlet subspace"},
    {"kdiag", "diagonal of the projector K over the computational basis"},
    {"hamiltonian", "Hamiltonian as a Pauli sum"},
    {"evolve", "noisy Trotter evolution with raw and singlet-projected observables"},
    {"vqt", "variational thermal state and its projected electric energy over mu"},
    {"vqe", "variational ground energy, raw and projected, over lambda"},
    {"entropy", "singlet-subspace entropy of a thermal state over mu"},
    {"gibbs-observable", "projected and unprojected Gibbs expectation over mu"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Charge-singlet measurement toolbox for (1+1)-D SU(N) lattice gauge theories"};
  app.require_subcommand(1);
  std::map<std::string, std::string> values;
  std::string config_path;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : csm::cli::commands()) {
    CLI::App* sub = app.add_subcommand(cmd, kDescriptions.at(cmd));
    sub->add_option("--config", config_path, "key=value file; flags override it");
    for (const Flag& f : kFlags) sub->add_option(f.name, values[f.key], f.help);
    subs[cmd] = sub;
  }
  CLI11_PARSE(app, argc, argv);

  csm::cli::ExperimentConfig cfg;
  try {
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      if (!config_path.empty()) csm::cli::load_config_file(cfg, config_path);
      cfg.command = name;
      for (const Flag& f : kFlags)
        if (sub->count(f.name) > 0) csm::cli::set_value(cfg, f.key, values[f.key]);
    }
  } catch (const csm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return csm::cli::run(cfg, std::cout, std::cerr);
}
