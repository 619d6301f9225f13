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

// Trotterized evolution of the SU(2) unit cell under two-qubit depolarizing
// noise, with singlet-projected readout.

#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>
#include <vector>

#include "csm/lgt_models.hpp"
#include "csm/optimize.hpp"
#include "csm/oracle.hpp"
#include "csm/projection.hpp"
#include "csm/simulator.hpp"

namespace csm {

/// One first-order step exp(-i h_diag dt) exp(-i h_nondiag dt) on the
/// two-site SU(2) cell. Contains 13 two-qubit gates.
inline Circuit trotter_step_circuit(const ModelSpec& spec, double dt) {
  if (spec.group != Group::SU2 || spec.n_sites != 2 || spec.chem_potential != 0.0)
    throw UnsupportedSpec("trotter_step_circuit requires su2, 2 sites, mu = 0");
  const double m = spec.mass, g2 = spec.coupling_sq;
  Circuit c(4);
  const double phi4 = -dt / 4;
  c.pauli_rotation_decomposed("XZX", {0, 1, 2}, phi4);
  c.pauli_rotation_decomposed("YZY", {0, 1, 2}, phi4);
  c.pauli_rotation_decomposed("XZX", {1, 2, 3}, phi4);
  c.pauli_rotation_decomposed("YZY", {1, 2, 3}, phi4);
  const double phi1 = m * dt / 2;
  c.rz(0, -phi1).rz(1, -phi1).rz(2, phi1).rz(3, phi1);
  c.pauli_rotation("ZZ", {0, 1}, -3 * g2 * dt / 8);
  c.global_phase((2 * m + 3 * g2 / 8) * dt);
  return c;
}

struct EvolutionRecord {
  double t;
  double raw_obs;
  double mitigated_obs;
  double exact_obs;
  double tr_rho_k;
  double fidelity_raw;
  double fidelity_proj;
};

struct EvolutionRun {
  ModelSpec spec;
  double dt = 0;
  int n_steps = 0;
  double lambda = 0;
  std::vector<EvolutionRecord> records;  // steps 0..n_steps
};

/// Trotter evolution from `initial`, with a depolarizing channel after every
/// two-qubit gate when lambda > 0. Fidelities are taken against the exact
/// propagator; the projected fidelity is Re Tr(sigma K rho) / Tr(rho K).
inline EvolutionRun evolve(const ModelSpec& spec, const QuantumState& initial, double dt,
                           int n_steps, double lambda, const OperatorSum& observable) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidArgument("depolarizing strength must lie in [0, 1]");
  if (n_steps < 0) throw InvalidArgument("n_steps must be >= 0");
  if (initial.n_qubits() != spec.n_qubits())
    throw DimensionMismatch("initial state does not match the model register");
  Circuit step = trotter_step_circuit(spec, dt);
  if (lambda > 0) step = step.with_depolarizing(lambda);
  const ProjectorK k = k_diagonal(spec);
  const Matrix kd = k.diag.values.asDiagonal();
  const Matrix obs = to_dense(observable);

  EvolutionRun run{spec, dt, n_steps, lambda, {}};
  QuantumState rho = lambda > 0 ? initial.to_mixed() : initial;
  const QuantumState ref0 = initial;
  for (int s = 0; s <= n_steps; ++s) {
    if (s > 0) rho = apply(rho, step);
    const double t = s * dt;
    const Matrix sigma = exact_evolve(spec, ref0, t).density();
    const Matrix r = rho.density();
    EvolutionRecord rec;
    rec.t = t;
    rec.raw_obs = (r * obs).trace().real();
    rec.exact_obs = (sigma * obs).trace().real();
    rec.tr_rho_k = singlet_weight(rho, k);
    rec.mitigated_obs = singlet_expectation(rho, observable, k);
    rec.fidelity_raw = (sigma * r).trace().real();
    rec.fidelity_proj = (sigma * kd * r).trace().real() / rec.tr_rho_k;
    run.records.push_back(rec);
  }
  return run;
}

/// R(t) = 1 / Tr(rho(t) K) - 1.
inline std::vector<std::pair<double, double>> r_of_t(const EvolutionRun& run) {
  std::vector<std::pair<double, double>> out;
  out.reserve(run.records.size());
  for (const auto& r : run.records) out.emplace_back(r.t, 1.0 / r.tr_rho_k - 1.0);
  return out;
}

struct SigmoidFit {
  double a = 0, b = 0, c = 0;
  double residual = 0;  // root-mean-square deviation
};

inline double sigmoid(double x, double a, double b, double c) {
  return a / (1 + std::exp(-b * x)) + c;
}

struct SigmoidFitOptions {
  int n_starts = 20;
  std::uint64_t seed = 20240917;
  double a_lo = 0, a_hi = 4, b_lo = 0, b_hi = 10, c_lo = -1, c_hi = 1;
};

/// Least-squares fit of a / (1 + exp(-b x)) + c by multi-start simplex descent.
inline SigmoidFit fit_sigmoid(const std::vector<std::pair<double, double>>& series,
                              const SigmoidFitOptions& opt = {}) {
  if (series.size() < 8) throw InvalidArgument("fit_sigmoid needs at least 8 points");
  double ymin = series.front().second, ymax = ymin;
  for (const auto& [x, y] : series) {
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  const double range = ymax - ymin;
  if (range < 1e-12) throw FitDiverged("fit_sigmoid: series is constant");

  auto sse = [&](const RealVector& p) {
    double s = 0;
    for (const auto& [x, y] : series) {
      const double d = sigmoid(x, p[0], p[1], p[2]) - y;
      s += d * d;
    }
    return s;
  };
  RealVector lo(3), hi(3);
  lo << opt.a_lo, opt.b_lo, opt.c_lo;
  hi << opt.a_hi, opt.b_hi, opt.c_hi;
  Rng rng(opt.seed);
  SimplexOptions so;
  so.max_evals = 3000;
  so.ftol = 1e-15;
  so.xtol = 1e-12;
  RealVector best;
  double best_f = std::numeric_limits<double>::infinity();
  for (int s = 0; s < opt.n_starts; ++s) {
    RealVector x0(3);
    for (int i = 0; i < 3; ++i) x0[i] = uniform(rng, lo[i], hi[i]);
    const SimplexResult r = nelder_mead(sse, x0, lo, hi, so);
    if (r.f < best_f) {
      best_f = r.f;
      best = r.x;
    }
  }
  SigmoidFit fit{best[0], best[1], best[2],
                 std::sqrt(best_f / static_cast<double>(series.size()))};
  if (fit.residual > 0.1 * range)
    throw FitDiverged("fit_sigmoid: rms residual " + std::to_string(fit.residual) +
                      " exceeds 10% of the series range");
  return fit;
}

struct LinearFit {
  double slope = 0, intercept = 0, r_squared = 0;
};

inline LinearFit linear_fit(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) throw InvalidArgument("linear fit needs at least 2 points");
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0) throw InvalidArgument("linear fit: all abscissae coincide");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

/// Inverts the least-squares line b(lambda) through the calibration points.
inline double estimate_noise_strength(double b_measured,
                                      const std::vector<std::pair<double, double>>& calibration) {
  if (calibration.size() < 2)
    throw InvalidArgument("noise calibration needs at least 2 (lambda, b) points");
  const LinearFit f = linear_fit(calibration);
  if (std::abs(f.slope) < 1e-14) throw InvalidArgument("calibration line has zero slope");
  return (b_measured - f.intercept) / f.slope;
}

inline void write_evolution_csv(std::ostream& os, const EvolutionRun& run) {
  os << "t,raw,mitigated,tr_rho_k,R,fid_raw,fid_proj\n";
  char buf[512];
  for (const auto& r : run.records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                  r.raw_obs, r.mitigated_obs, r.tr_rho_k, 1.0 / r.tr_rho_k - 1.0,
                  r.fidelity_raw, r.fidelity_proj);
    os << buf;
  }
}

}  // namespace csm
