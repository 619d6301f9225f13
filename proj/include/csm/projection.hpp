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

// Singlet-sector projection.
//
// The diagonal operator K reproduces the singlet projector P0 inside traces
// with gauge-invariant observables: Tr(rho O P0) = Tr(rho O K). K is the
// group average of exp(i alpha . Q_diag) over the Cartan torus weighted by
// the Weyl measure, so each entry depends only on the diagonal-charge
// eigenvalues of its basis state.
//
// Diagonal charges are handled as exact integers:
//   SU2: s = 4 Q^z, an even integer;
//   SU3: s3 = 4 Q^3 and s8 = 4 sqrt(3) Q^8, both even integers.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "csm/lgt_models.hpp"
#include "csm/simulator.hpp"

namespace csm {

/// Integer diagonal charges of a basis state (s8 unused for SU2).
struct DiagonalCharges {
  int s3 = 0;
  int s8 = 0;
  auto operator<=>(const DiagonalCharges&) const = default;
};

inline DiagonalCharges diagonal_charges(Group g, int n_sites, std::uint64_t b) {
  const int nc = colors(g);
  const int n = nc * n_sites;
  auto zq = [&](int q) { return (b >> (n - 1 - q) & 1) ? -1 : 1; };
  DiagonalCharges c;
  for (int site = 0; site < n_sites; ++site) {
    const int a = nc * site;
    if (g == Group::SU2) {
      c.s3 += zq(a) - zq(a + 1);
    } else {
      c.s3 += zq(a) - zq(a + 1);
      c.s8 += zq(a) + zq(a + 1) - 2 * zq(a + 2);
    }
  }
  return c;
}

/// Weyl-measure density of SU(3) on the box [-2pi, 2pi] x [-3pi, 3pi];
/// integrates to 1 over the box.
inline double su3_density(double a, double b) {
  const double s1 = std::sin(a / 2), s2 = std::sin(b / 2 + a / 4), s3 = std::sin(b / 2 - a / 4);
  return 4.0 / (9.0 * kPi * kPi) * s1 * s1 * s2 * s2 * s3 * s3;
}

/// SU(2) density sin^2(alpha/2) / (2 pi) on [0, 4 pi].
inline double su2_density(double alpha) {
  const double s = std::sin(alpha / 2);
  return s * s / (2 * kPi);
}

namespace detail {

inline constexpr int kSu3NodesA = 64;
inline constexpr int kSu3NodesB = 96;

// Periodic trapezoid rule on the SU(3) box; f(a, b) -> complex.
template <typename F>
Complex su3_quadrature(F&& f) {
  const double ha = 4 * kPi / kSu3NodesA, hb = 6 * kPi / kSu3NodesB;
  Complex acc = 0;
  for (int i = 0; i < kSu3NodesA; ++i) {
    const double a = -2 * kPi + i * ha;
    for (int j = 0; j < kSu3NodesB; ++j) {
      const double b = -3 * kPi + j * hb;
      acc += su3_density(a, b) * f(a, b);
    }
  }
  return acc * (ha * hb);
}

// Entry of K for SU(3) with integer charges (s3, s8), cached process-wide.
inline double su3_k_entry(int s3, int s8) {
  static std::shared_mutex mu;
  static std::map<std::pair<int, int>, double> cache;
  const auto key = std::make_pair(s3, s8);
  {
    std::shared_lock lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const Complex v = su3_quadrature([&](double a, double b) {
    return std::exp(Complex(0, a * s3 / 4.0 + b * s8 / 6.0));
  });
  std::unique_lock lock(mu);
  return cache.emplace(key, v.real()).first->second;
}

inline double su2_k_entry(int s) {
  if (s == 0) return 1.0;
  if (s == 4 || s == -4) return -0.5;
  return 0.0;
}

}  // namespace detail

struct ProjectorK {
  DiagonalOperator diag;
  double trace = 0.0;
};

/// K over the computational basis.
inline ProjectorK k_diagonal(const ModelSpec& spec) {
  spec.validate();
  const int n = spec.n_qubits();
  check_state_cap(n);
  const std::uint64_t dim = std::uint64_t{1} << n;
  Vector v(static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    const DiagonalCharges c = diagonal_charges(spec.group, spec.n_sites, b);
    v[static_cast<Eigen::Index>(b)] = spec.group == Group::SU2
                                          ? detail::su2_k_entry(c.s3)
                                          : detail::su3_k_entry(c.s3, c.s8);
  }
  ProjectorK k{DiagonalOperator(n, std::move(v)), 0.0};
  k.trace = k.diag.values.real().sum();
  return k;
}

/// Number of {I, Z} strings in the Walsh expansion of K.
inline std::size_t count_k_pauli_strings(const ModelSpec& spec) {
  return pauli_decompose_diagonal(k_diagonal(spec).diag, 1e-12).size();
}

/// Dimension of the charge-singlet subspace.
inline double singlet_dimension(const ModelSpec& spec) {
  spec.validate();
  const int N = spec.n_sites;
  if (spec.group == Group::SU2) {
    // Catalan number C_{N+1} = (2N+2)! / ((N+1)! (N+2)!).
    if (N <= 15) {
      std::uint64_t c = 1;  // C_0
      for (int k = 0; k < N + 1; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
      return static_cast<double>(c);
    }
    return std::exp(std::lgamma(2.0 * N + 3) - std::lgamma(N + 2.0) - std::lgamma(N + 3.0));
  }
  const Complex v = detail::su3_quadrature([&](double a, double b) {
    const double cb = std::cos(b / 3);
    return std::pow(4.0 * cb * (std::cos(a / 2) + cb), N);
  });
  return v.real();
}

/// Tr(rho O K) / Tr(rho K).
inline double singlet_expectation(const QuantumState& rho, const OperatorSum& obs,
                                  const ProjectorK& k) {
  if (rho.n_qubits() != k.diag.n_qubits || obs.n_qubits() != k.diag.n_qubits)
    throw DimensionMismatch("singlet_expectation: qubit counts differ");
  const Vector& kd = k.diag.values;
  Complex num, den;
  if (rho.is_pure()) {
    const Vector& psi = rho.vector();
    const Vector kpsi = kd.cwiseProduct(psi);
    den = psi.dot(kpsi);
    num = psi.dot(obs.apply(kpsi));
  } else {
    const Matrix& r = rho.matrix();
    den = (r.diagonal().cwiseProduct(kd)).sum();
    // Tr(rho O K) = sum_b K_b (rho O)_{bb} = sum_b K_b sum_c rho_{bc} O_{cb}.
    const std::uint64_t dim = std::uint64_t{1} << rho.n_qubits();
    for (const auto& [p, c] : obs.terms()) {
      Complex acc = 0;
      for (std::uint64_t b = 0; b < dim; ++b) {
        const auto bi = static_cast<Eigen::Index>(b);
        acc += kd[bi] * PauliString::parity_sign(b & p.z_mask()) *
               r(static_cast<Eigen::Index>(b ^ p.x_mask()), bi);
      }
      num += c * p.base_phase() * acc;
    }
  }
  if (den.real() < kSingletWeightThreshold)
    throw NearZeroSingletWeight("Tr(rho K) = " + std::to_string(den.real()) +
                                " is below the singlet-weight threshold");
  return num.real() / den.real();
}

/// Tr(rho K).
inline double singlet_weight(const QuantumState& rho, const ProjectorK& k) {
  if (rho.n_qubits() != k.diag.n_qubits)
    throw DimensionMismatch("singlet_weight: qubit counts differ");
  if (rho.is_pure())
    return (rho.vector().cwiseAbs2().cast<Complex>().cwiseProduct(k.diag.values)).sum().real();
  return (rho.matrix().diagonal().cwiseProduct(k.diag.values)).sum().real();
}

struct GroupSample {
  Group group;
  double a = 0.0;  // alpha for SU2
  double b = 0.0;  // SU3 only
};

namespace detail {
// Bound on the SU(3) density from a dense grid scan, padded by 1%.
inline double su3_envelope() {
  static const double env = [] {
    double mx = 0;
    constexpr int n = 512;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        mx = std::max(mx, su3_density(-2 * kPi + 4 * kPi * i / n, -3 * kPi + 6 * kPi * j / n));
    return mx * 1.01;
  }();
  return env;
}
}  // namespace detail

/// Draws group parameters from the normalized measure by rejection sampling.
inline GroupSample sample_group(Group g, Rng& rng) {
  if (g == Group::SU2) {
    const double env = 1.0 / (2 * kPi);
    for (;;) {
      const double alpha = uniform(rng, 0.0, 4 * kPi);
      if (uniform01(rng) * env < su2_density(alpha)) return {g, alpha, 0.0};
    }
  }
  const double env = detail::su3_envelope();
  for (;;) {
    const double a = uniform(rng, -2 * kPi, 2 * kPi);
    const double b = uniform(rng, -3 * kPi, 3 * kPi);
    if (uniform01(rng) * env < su3_density(a, b)) return {g, a, b};
  }
}

/// exp(i alpha Q^z) or exp(i (a Q^3 + 2 b Q^8 / sqrt 3)), built from
/// per-qubit phases.
inline DiagonalOperator u_diag(const ModelSpec& spec, const GroupSample& s) {
  spec.validate();
  if (s.group != spec.group) throw InvalidArgument("u_diag: group mismatch");
  const int n = spec.n_qubits();
  check_state_cap(n);
  const int nc = colors(spec.group);
  // Phase exponent per qubit color when the qubit is |0> (z = +1).
  std::array<double, 3> theta{};
  if (spec.group == Group::SU2) {
    theta = {s.a / 4, -s.a / 4, 0.0};
  } else {
    theta = {s.a / 4 + s.b / 6, -s.a / 4 + s.b / 6, -s.b / 3};
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  Vector v(static_cast<Eigen::Index>(dim));
  v.setOnes();
  for (int q = 0; q < n; ++q) {
    const Complex up = std::exp(Complex(0, theta[q % nc]));
    const Complex down = std::conj(up);
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    for (std::uint64_t b = 0; b < dim; ++b) v[static_cast<Eigen::Index>(b)] *= (b & bit) ? down : up;
  }
  return {n, std::move(v)};
}

/// |G|^-1 sum_g D(g) for a finite group given as representation matrices.
inline Matrix project_finite_group(const std::vector<Matrix>& reps) {
  if (reps.empty()) throw InvalidArgument("project_finite_group: empty group");
  const Eigen::Index d = reps.front().rows();
  Matrix p = Matrix::Zero(d, d);
  for (const Matrix& u : reps) {
    if (u.rows() != d || u.cols() != d)
      throw DimensionMismatch("project_finite_group: representation sizes differ");
    if ((u.adjoint() * u - Matrix::Identity(d, d)).norm() > 1e-10)
      throw InvalidArgument("project_finite_group: matrix is not unitary");
    p += u;
  }
  p /= static_cast<double>(reps.size());
  if ((p * p - p).norm() > 1e-10)
    throw NonProjector("group average is not idempotent; are the matrices closed under product?");
  return p;
}

/// Projector onto the joint null space of all total charges.
inline Matrix oracle_p0(const ModelSpec& spec) {
  check_matrix_cap(spec.n_qubits());
  const Matrix c = to_dense(build_casimir(spec));
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  const auto& w = es.eigenvalues();
  Matrix p = Matrix::Zero(c.rows(), c.cols());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w[i] < 1e-10) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return p;
}

inline void write_k_csv(std::ostream& os, const ProjectorK& k) {
  char buf[64];
  os << "basis_index,value\n";
  for (Eigen::Index i = 0; i < k.diag.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", k.diag.values[i].real());
    os << i << ',' << buf << '\n';
  }
}

}  // namespace csm
