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

// Variational thermal states (VQT) and ground states (VQE) on the SU(2)
// two-site cell.

#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "csm/lgt_models.hpp"
#include "csm/optimize.hpp"
#include "csm/parallel.hpp"
#include "csm/projection.hpp"
#include "csm/simulator.hpp"

namespace csm {

inline void require_unit_cell(const ModelSpec& spec, const char* who) {
  if (spec.group != Group::SU2 || spec.n_sites != 2)
    throw UnsupportedSpec(std::string(who) + " requires su2 with 2 sites");
}

/// Four ancilla angles and six system angles.
///
/// Ancilla i is prepared with RX(theta_i) in the half-angle convention and
/// entangled with system qubit i, so system qubit i starts in |1> with
/// probability sin^2(theta_i / 2). The system unitary is
///   R_YZX(phi1)[0,1,2] R_YZX(phi2)[1,2,3] R_YZX(phi3)[0,1,2]
///   R_YZX(phi4)[1,2,3] RZ(phi5)[2] RZ(phi6)[3]   (applied left to right).
struct VqtAnsatz {
  static constexpr int kParams = 10;
  std::array<double, 4> thetas{};
  std::array<double, 6> phis{};

  RealVector params() const {
    RealVector p(kParams);
    for (int i = 0; i < 4; ++i) p[i] = thetas[i];
    for (int i = 0; i < 6; ++i) p[4 + i] = phis[i];
    return p;
  }
  static VqtAnsatz from_params(const RealVector& p) {
    if (p.size() != kParams) throw DimensionMismatch("VqtAnsatz expects 10 parameters");
    VqtAnsatz a;
    for (int i = 0; i < 4; ++i) a.thetas[i] = p[i];
    for (int i = 0; i < 6; ++i) a.phis[i] = p[4 + i];
    return a;
  }
  static RealVector lower_bounds() {
    RealVector lo(kParams);
    lo << 0, 0, 0, 0, -kPi, -kPi, -kPi, -kPi, -kPi, -kPi;
    return lo;
  }
  static RealVector upper_bounds() {
    RealVector hi(kParams);
    hi << kPi, kPi, kPi, kPi, kPi, kPi, kPi, kPi, kPi, kPi;
    return hi;
  }
};

inline Circuit vqt_system_circuit(const VqtAnsatz& a) {
  Circuit c(4);
  c.pauli_rotation_decomposed("YZX", {0, 1, 2}, a.phis[0]);
  c.pauli_rotation_decomposed("YZX", {1, 2, 3}, a.phis[1]);
  c.pauli_rotation_decomposed("YZX", {0, 1, 2}, a.phis[2]);
  c.pauli_rotation_decomposed("YZX", {1, 2, 3}, a.phis[3]);
  c.rz(2, a.phis[4]);
  c.rz(3, a.phis[5]);
  return c;
}

/// Product-Bernoulli weights of the 16 system basis states.
inline RealVector bernoulli_probabilities(const std::array<double, 4>& thetas) {
  RealVector p(16);
  for (int n = 0; n < 16; ++n) {
    double w = 1;
    for (int i = 0; i < 4; ++i) {
      const double s = std::sin(thetas[i] / 2);
      const double p1 = s * s;
      w *= (n >> (3 - i) & 1) ? p1 : 1 - p1;
    }
    p[n] = w;
  }
  return p;
}

/// Entropy of the ancilla-induced mixture: sum of binary entropies.
inline double analytic_entropy(const std::array<double, 4>& thetas) {
  double s = 0;
  for (double th : thetas) {
    const double c = std::cos(th / 2), sn = std::sin(th / 2);
    for (double p : {c * c, sn * sn})
      if (p > 0) s -= p * std::log(p);
  }
  return s;
}

/// rho = U diag(p) U^dagger.
inline QuantumState vqt_density_matrix(const VqtAnsatz& a, const ModelSpec& spec) {
  require_unit_cell(spec, "vqt_density_matrix");
  const Matrix u = circuit_unitary(vqt_system_circuit(a));
  const RealVector p = bernoulli_probabilities(a.thetas);
  Matrix rho = u * p.cast<Complex>().asDiagonal() * u.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuantumState::mixed_unchecked(std::move(rho));
}

/// Estimates <O> from `shots` computational-basis samples per Pauli term,
/// rotating each term's X/Y letters to Z before readout.
inline double shot_expectation(const QuantumState& rho, const OperatorSum& obs,
                               std::uint64_t shots, Rng& rng) {
  double total = 0;
  for (const auto& [p, c] : obs.terms()) {
    if (p.is_identity()) {
      total += c.real();
      continue;
    }
    Circuit basis(rho.n_qubits());
    for (int q = 0; q < p.n_qubits(); ++q) {
      if (p.letter(q) == 'X') basis.h(q);
      if (p.letter(q) == 'Y') basis.rx(q, kPi / 4);
    }
    const Histogram h = sample_bitstrings(apply(rho, basis), shots, rng);
    const std::uint64_t support = p.x_mask() | p.z_mask();
    double acc = 0;
    for (const auto& [idx, count] : h)
      acc += PauliString::parity_sign(idx & support) * static_cast<double>(count);
    total += c.real() * acc / static_cast<double>(shots);
  }
  return total;
}

struct VariationalOptions {
  int n_trials = 5;
  int max_evals = 2000;
  bool shot_noise = false;
  std::uint64_t shots = 1000;
};

struct VqtTrial {
  std::uint64_t seed = 0;
  VqtAnsatz initial;
  VqtAnsatz best;
  double initial_cost = 0;
  double best_cost = 0;
  bool budget_exhausted = false;  // stopped on the evaluation budget, not convergence
  std::vector<double> history;    // cost of every evaluation
};

struct VqtResult {
  VqtAnsatz best;
  double best_cost = std::numeric_limits<double>::infinity();
  int best_trial = -1;
  std::vector<VqtTrial> trials;
};

/// Free energy Tr(rho H) - T S(theta) from the dense state.
inline double vqt_free_energy(const VqtAnsatz& a, const Matrix& h_dense, double T) {
  const Matrix u = circuit_unitary(vqt_system_circuit(a));
  const RealVector p = bernoulli_probabilities(a.thetas);
  const Matrix hu = u.adjoint() * h_dense * u;
  double e = 0;
  for (int n = 0; n < 16; ++n) e += p[n] * hu(n, n).real();
  return e - T * analytic_entropy(a.thetas);
}

/// Minimizes the free energy from n_trials random starts. Each trial owns a
/// seed drawn from `rng`.
inline VqtResult vqt_optimize(const ModelSpec& spec, double T, const VariationalOptions& opt,
                              Rng& rng) {
  require_unit_cell(spec, "vqt_optimize");
  if (!(T > 0)) throw InvalidArgument("temperature must be positive");
  if (opt.n_trials < 1) throw InvalidArgument("n_trials must be >= 1");
  const OperatorSum h = build_hamiltonian(spec);
  const Matrix hd = to_dense(h);
  const RealVector lo = VqtAnsatz::lower_bounds(), hi = VqtAnsatz::upper_bounds();

  VqtResult out;
  out.trials.resize(opt.n_trials);
  for (auto& t : out.trials) t.seed = rng();
  parallel_for(out.trials.size(), [&](std::size_t i) {
    VqtTrial& trial = out.trials[i];
    Rng trng(trial.seed);
    RealVector x0(VqtAnsatz::kParams);
    for (int k = 0; k < x0.size(); ++k) x0[k] = uniform(trng, lo[k], hi[k]);
    auto cost = [&](const RealVector& x) {
      const VqtAnsatz a = VqtAnsatz::from_params(x);
      if (!opt.shot_noise) return vqt_free_energy(a, hd, T);
      return shot_expectation(vqt_density_matrix(a, spec), h, opt.shots, trng) -
             T * analytic_entropy(a.thetas);
    };
    trial.initial = VqtAnsatz::from_params(x0);
    SimplexOptions so;
    so.max_evals = opt.max_evals;
    so.ftol = opt.shot_noise ? 1e-6 : 1e-12;
    const SimplexResult r = nelder_mead(cost, x0, lo, hi, so);
    trial.initial_cost = r.trace.front();
    trial.best = VqtAnsatz::from_params(r.x);
    trial.best_cost = r.f;
    trial.budget_exhausted = r.evals >= opt.max_evals && !r.converged;
    trial.history = r.trace;
  });
  for (std::size_t i = 0; i < out.trials.size(); ++i)
    if (out.trials[i].best_cost < out.best_cost) {
      out.best_cost = out.trials[i].best_cost;
      out.best = out.trials[i].best;
      out.best_trial = static_cast<int>(i);
    }
  return out;
}

inline void write_history_csv(std::ostream& os, const std::vector<double>& history) {
  os << "eval,cost,best_cost\n";
  const std::vector<double> best = running_min(history);
  char buf[128];
  for (std::size_t i = 0; i < history.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i + 1, history[i], best[i]);
    os << buf;
  }
}

inline std::string params_text(const VqtAnsatz& a) {
  std::string s;
  char buf[64];
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof buf, "theta%d=%.17g\n", i + 1, a.thetas[i]);
    s += buf;
  }
  for (int i = 0; i < 6; ++i) {
    std::snprintf(buf, sizeof buf, "phi%d=%.17g\n", i + 1, a.phis[i]);
    s += buf;
  }
  return s;
}

/// Three-angle ground-state circuit: X on qubits 2 and 3, then
/// RY(t1)[0] CNOT(0,1) RY(t2)[0] RY(t3)[1] CNOT(0,2) CNOT(1,3).
struct VqeAnsatz {
  static constexpr int kParams = 3;
  std::array<double, 3> angles{};

  RealVector params() const { return Eigen::Map<const RealVector>(angles.data(), 3); }
  static VqeAnsatz from_params(const RealVector& p) {
    if (p.size() != kParams) throw DimensionMismatch("VqeAnsatz expects 3 parameters");
    return {{p[0], p[1], p[2]}};
  }
};

inline Circuit vqe_circuit(const VqeAnsatz& a) {
  Circuit c(4);
  c.x(2).x(3);
  c.ry(0, a.angles[0]).cnot(0, 1);
  c.ry(0, a.angles[1]).ry(1, a.angles[2]);
  c.cnot(0, 2).cnot(1, 3);
  return c;
}

/// Ansatz state with a depolarizing channel after each CNOT when lambda > 0.
inline QuantumState vqe_state(const VqeAnsatz& a, double lambda) {
  Circuit c = vqe_circuit(a);
  if (lambda > 0) c = c.with_depolarizing(lambda);
  return apply(QuantumState::basis(4, 0), c);
}

struct VqeResult {
  double energy_raw = 0;
  double energy_csm = 0;
  VqeAnsatz best;
  bool budget_exhausted = false;
  std::vector<double> history;  // best trial
};

/// Minimizes the raw energy of the (noisy) ansatz state, then reports the
/// raw and singlet-projected energies of the optimum.
inline VqeResult vqe_optimize(const ModelSpec& spec, double lambda,
                              const VariationalOptions& opt, Rng& rng) {
  require_unit_cell(spec, "vqe_optimize");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidArgument("depolarizing strength must lie in [0, 1]");
  const OperatorSum h = build_hamiltonian(spec);
  const ProjectorK k = k_diagonal(spec);
  RealVector lo = RealVector::Constant(3, -kPi), hi = RealVector::Constant(3, kPi);

  std::vector<std::uint64_t> seeds(opt.n_trials);
  for (auto& s : seeds) s = rng();
  std::vector<SimplexResult> results(opt.n_trials);
  parallel_for(seeds.size(), [&](std::size_t i) {
    Rng trng(seeds[i]);
    RealVector x0(3);
    for (int j = 0; j < 3; ++j) x0[j] = uniform(trng, lo[j], hi[j]);
    auto cost = [&](const RealVector& x) {
      const QuantumState s = vqe_state(VqeAnsatz::from_params(x), lambda);
      return opt.shot_noise ? shot_expectation(s.to_mixed(), h, opt.shots, trng)
                            : expectation(s, h);
    };
    SimplexOptions so;
    so.max_evals = opt.max_evals;
    so.ftol = opt.shot_noise ? 1e-6 : 1e-15;
    so.xtol = 1e-12;
    results[i] = nelder_mead(cost, x0, lo, hi, so);
  });
  std::size_t bi = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].f < results[bi].f) bi = i;
  VqeResult out;
  out.best = VqeAnsatz::from_params(results[bi].x);
  const QuantumState s = vqe_state(out.best, lambda);
  out.energy_raw = expectation(s, h);
  out.energy_csm = singlet_expectation(s, h, k);
  out.budget_exhausted = results[bi].evals >= opt.max_evals && !results[bi].converged;
  out.history = results[bi].trace;
  return out;
}

}  // namespace csm
