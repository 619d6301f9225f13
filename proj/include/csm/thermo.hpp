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

// Charge-singlet entropy from averages over the reducible state:
//   S0 = S + ln<K> + (<HK> - <H><K>) / (T <K>).

#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <vector>

#include "csm/lgt_models.hpp"
#include "csm/oracle.hpp"
#include "csm/parallel.hpp"
#include "csm/projection.hpp"
#include "csm/simulator.hpp"

namespace csm {

struct EntropyEstimate {
  double s0 = 0;
  double s_reducible = 0;
  double k_mean = 0;
  double hk_mean = 0;
  double h_mean = 0;
  long n_samples = 0;  // 0 on the exact path
  double std_err = 0;
};

/// Pairwise summation.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

namespace detail {

inline double entropy_formula(double s, double k, double hk, double h, double T) {
  return s + std::log(k) + (hk - h * k) / (T * k);
}

inline void check_entropy_inputs(const QuantumState& rho, const ModelSpec& spec, double T) {
  if (!(T > 0)) throw InvalidArgument("temperature must be positive");
  if (rho.n_qubits() != spec.n_qubits())
    throw DimensionMismatch("state does not match the model register");
}

}  // namespace detail

/// Exact traces with the closed-form K. S defaults to the von Neumann
/// entropy of rho; pass the analytic ansatz entropy for variational states.
inline EntropyEstimate singlet_entropy_exact(const QuantumState& rho, const ModelSpec& spec,
                                             double T,
                                             std::optional<double> s_reducible = std::nullopt) {
  detail::check_entropy_inputs(rho, spec, T);
  const ProjectorK k = k_diagonal(spec);
  const OperatorSum h = build_hamiltonian(spec);
  EntropyEstimate e;
  e.s_reducible = s_reducible ? *s_reducible : von_neumann_entropy(rho.density());
  e.k_mean = singlet_weight(rho, k);
  if (e.k_mean < kSingletWeightThreshold)
    throw NearZeroSingletWeight("<K> = " + std::to_string(e.k_mean) + " below threshold");
  e.hk_mean = singlet_expectation(rho, h, k) * e.k_mean;
  e.h_mean = expectation(rho, h);
  e.s0 = detail::entropy_formula(e.s_reducible, e.k_mean, e.hk_mean, e.h_mean, T);
  return e;
}

/// Monte-Carlo estimate of <K> and <HK> from group samples, with a
/// delta-method standard error on S0.
inline EntropyEstimate singlet_entropy_mc(const QuantumState& rho, const ModelSpec& spec,
                                          double T, long n_samples, Rng& rng,
                                          std::optional<double> s_reducible = std::nullopt) {
  detail::check_entropy_inputs(rho, spec, T);
  if (n_samples < 100) throw InvalidArgument("n_samples must be >= 100");
  const OperatorSum h = build_hamiltonian(spec);
  const Matrix r = rho.density();
  const Matrix rh = r * to_dense(h);
  const Vector rho_diag = r.diagonal();
  const Vector rh_diag = rh.diagonal();

  std::vector<GroupSample> samples;
  samples.reserve(n_samples);
  for (long i = 0; i < n_samples; ++i) samples.push_back(sample_group(spec.group, rng));
  std::vector<double> ks(n_samples), hks(n_samples);
  parallel_for(samples.size(), [&](std::size_t i) {
    const Vector u = u_diag(spec, samples[i]).values;
    ks[i] = rho_diag.cwiseProduct(u).sum().real();
    hks[i] = rh_diag.cwiseProduct(u).sum().real();
  });

  const double n = static_cast<double>(n_samples);
  EntropyEstimate e;
  e.n_samples = n_samples;
  e.s_reducible = s_reducible ? *s_reducible : von_neumann_entropy(r);
  e.h_mean = expectation(rho, h);
  e.k_mean = pairwise_sum(ks.data(), ks.size()) / n;
  e.hk_mean = pairwise_sum(hks.data(), hks.size()) / n;
  if (e.k_mean < kSingletWeightThreshold)
    throw NearZeroSingletWeight("MC estimate of <K> = " + std::to_string(e.k_mean) +
                                " below threshold");
  std::vector<double> dkk(n_samples), dhh(n_samples), dkh(n_samples);
  for (long i = 0; i < n_samples; ++i) {
    const double a = ks[i] - e.k_mean, b = hks[i] - e.hk_mean;
    dkk[i] = a * a;
    dhh[i] = b * b;
    dkh[i] = a * b;
  }
  const double vkk = pairwise_sum(dkk.data(), dkk.size()) / (n - 1);
  const double vhh = pairwise_sum(dhh.data(), dhh.size()) / (n - 1);
  const double vkh = pairwise_sum(dkh.data(), dkh.size()) / (n - 1);
  const double gk = 1 / e.k_mean - e.hk_mean / (T * e.k_mean * e.k_mean);
  const double gh = 1 / (T * e.k_mean);
  e.s0 = detail::entropy_formula(e.s_reducible, e.k_mean, e.hk_mean, e.h_mean, T);
  e.std_err = std::sqrt(std::max(0.0, (gk * gk * vkk + 2 * gk * gh * vkh + gh * gh * vhh) / n));
  return e;
}

/// Z0 / Z = Tr(rho K) for a Gibbs state rho.
inline double z0_over_z(const QuantumState& rho, const ModelSpec& spec) {
  return singlet_weight(rho, k_diagonal(spec));
}

struct EntropyRow {
  double mu, T;
  EntropyEstimate est;
};

inline void write_entropy_csv(std::ostream& os, const std::vector<EntropyRow>& rows) {
  os << "mu,T,s0,s0_err,k_mean,hk_mean\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.mu, r.T,
                  r.est.s0, r.est.std_err, r.est.k_mean, r.est.hk_mean);
    os << buf;
  }
}

}  // namespace csm
