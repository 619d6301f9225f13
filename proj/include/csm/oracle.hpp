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

// Exact-diagonalization reference results.

#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <tuple>
#include <utility>

#include "csm/lgt_models.hpp"
#include "csm/projection.hpp"
#include "csm/simulator.hpp"

namespace csm {

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns

  static SpectralDecomposition of(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw Error("eigensolver failed to converge");
    return {es.eigenvalues(), es.eigenvectors()};
  }

  /// V f(Lambda) V^dagger.
  template <typename F>
  Matrix apply_function(F&& f) const {
    Vector d(eigenvalues.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = f(eigenvalues[i]);
    return eigenvectors * d.asDiagonal() * eigenvectors.adjoint();
  }
};

namespace detail {
using SpecKey = std::tuple<int, int, double, double, double>;

inline SpecKey key_of(const ModelSpec& s) {
  return {static_cast<int>(s.group), s.n_sites, s.mass, s.coupling_sq, s.chem_potential};
}
}  // namespace detail

/// Spectral decomposition of the model Hamiltonian, cached per spec.
inline std::shared_ptr<const SpectralDecomposition> spectrum(const ModelSpec& spec) {
  static std::shared_mutex mu;
  static std::map<detail::SpecKey, std::shared_ptr<const SpectralDecomposition>> cache;
  const auto key = detail::key_of(spec);
  {
    std::shared_lock lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  check_matrix_cap(spec.n_qubits());
  auto sd = std::make_shared<const SpectralDecomposition>(
      SpectralDecomposition::of(to_dense(build_hamiltonian(spec))));
  std::unique_lock lock(mu);
  return cache.emplace(key, std::move(sd)).first->second;
}

/// Singlet projector from the Casimir null space, cached per (group, N).
inline std::shared_ptr<const Matrix> cached_p0(const ModelSpec& spec) {
  static std::shared_mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const Matrix>> cache;
  const auto key = std::make_pair(static_cast<int>(spec.group), spec.n_sites);
  {
    std::shared_lock lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto p = std::make_shared<const Matrix>(oracle_p0(spec));
  std::unique_lock lock(mu);
  return cache.emplace(key, std::move(p)).first->second;
}

/// exp(-H/T) / Z.
inline QuantumState gibbs_state(const ModelSpec& spec, double T) {
  if (!(T > 0)) throw InvalidArgument("temperature must be positive");
  const auto sd = spectrum(spec);
  const double e0 = sd->eigenvalues[0];
  double z = 0;
  for (Eigen::Index i = 0; i < sd->eigenvalues.size(); ++i)
    z += std::exp(-(sd->eigenvalues[i] - e0) / T);
  Matrix rho = sd->apply_function([&](double e) { return Complex(std::exp(-(e - e0) / T) / z); });
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuantumState::mixed_unchecked(std::move(rho));
}

struct GroundState {
  double energy;
  Vector state;
};

/// Lowest eigenpair. Within a degenerate ground space the returned vector is
/// the one with maximal singlet weight.
inline GroundState ground_state(const ModelSpec& spec, double degeneracy_tol = 1e-9) {
  const auto sd = spectrum(spec);
  const double e0 = sd->eigenvalues[0];
  Eigen::Index k = 1;
  while (k < sd->eigenvalues.size() &&
         sd->eigenvalues[k] - e0 < degeneracy_tol * std::max(1.0, std::abs(e0)))
    ++k;
  if (k == 1) return {e0, sd->eigenvectors.col(0)};
  const Matrix v = sd->eigenvectors.leftCols(k);
  const Matrix m = v.adjoint() * (*cached_p0(spec)) * v;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Vector psi = v * es.eigenvectors().col(k - 1);
  return {e0, psi.normalized()};
}

/// exp(-i H t) applied to a pure or mixed state.
inline QuantumState exact_evolve(const ModelSpec& spec, const QuantumState& state, double t) {
  if (state.n_qubits() != spec.n_qubits())
    throw DimensionMismatch("exact_evolve: state and model qubit counts differ");
  const auto sd = spectrum(spec);
  const Matrix& v = sd->eigenvectors;
  Vector phase(sd->eigenvalues.size());
  for (Eigen::Index i = 0; i < phase.size(); ++i)
    phase[i] = std::exp(Complex(0, -sd->eigenvalues[i] * t));
  if (state.is_pure()) {
    Vector c = v.adjoint() * state.vector();
    return QuantumState::pure(v * phase.cwiseProduct(c));
  }
  const Matrix u = v * phase.asDiagonal() * v.adjoint();
  return QuantumState::mixed_unchecked(u * state.matrix() * u.adjoint());
}

/// -sum p ln p over eigenvalues, with eigenvalues clipped at 1e-15.
inline double von_neumann_entropy(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()[i];
    if (p > 1e-15) s -= p * std::log(p);
  }
  return s;
}

struct ProjectedGibbs {
  double energy0;
  double entropy0;
  double z0_over_z;
  Matrix rho0;
};

/// Gibbs state projected with P0: energy, entropy and singlet weight.
inline ProjectedGibbs projected_gibbs_quantities(const ModelSpec& spec, double T) {
  const QuantumState rho = gibbs_state(spec, T);
  const Matrix& p0 = *cached_p0(spec);
  const Matrix& r = rho.matrix();
  const double w = (r * p0).trace().real();
  if (w < 1e-12)
    throw NearZeroSingletWeight("Tr(rho P0) = " + std::to_string(w) + " at T = " +
                                std::to_string(T));
  Matrix rho0 = p0 * r * p0 / w;
  rho0 = 0.5 * (rho0 + rho0.adjoint()).eval();
  const Matrix h = to_dense(build_hamiltonian(spec));
  return {(rho0 * h).trace().real(), von_neumann_entropy(rho0), w, std::move(rho0)};
}

/// Tr(P0 rho P0 O) / Tr(rho P0) with the dense oracle projector.
inline double oracle_projected_expectation(const ModelSpec& spec, const QuantumState& rho,
                                           const OperatorSum& obs) {
  const Matrix& p0 = *cached_p0(spec);
  const Matrix r = rho.density();
  const double w = (r * p0).trace().real();
  if (w < 1e-12) throw NearZeroSingletWeight("Tr(rho P0) below threshold");
  return (p0 * r * p0 * to_dense(obs)).trace().real() / w;
}

}  // namespace csm
