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

// Dense statevector / density-matrix circuit simulation.
//
// Every rotation follows R_P(phi) = exp(-i phi P), including the
// single-qubit RX, RY and RZ gates.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "csm/operators.hpp"

namespace csm {

class QuantumState {
 public:
  enum class Kind { Pure, Mixed };

  QuantumState() = default;

  static QuantumState pure(Vector psi) {
    QuantumState s;
    s.n_ = qubits_for(psi.size());
    check_state_cap(s.n_);
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-10)
      throw InvalidArgument("pure state must have unit norm (got " +
                            std::to_string(norm) + ")");
    s.kind_ = Kind::Pure;
    s.psi_ = std::move(psi);
    return s;
  }

  static QuantumState basis(int n_qubits, std::uint64_t index) {
    check_state_cap(n_qubits);
    const std::uint64_t dim = std::uint64_t{1} << n_qubits;
    if (index >= dim) throw InvalidArgument("basis index out of range");
    Vector v = Vector::Zero(dim);
    v[index] = 1.0;
    return pure(std::move(v));
  }

  /// Checks Hermiticity, unit trace and positivity.
  static QuantumState mixed(Matrix rho) {
    QuantumState s;
    if (rho.rows() != rho.cols()) throw DimensionMismatch("density matrix not square");
    s.n_ = qubits_for(rho.rows());
    check_matrix_cap(s.n_);
    if ((rho - rho.adjoint()).norm() > 1e-10 * std::max(1.0, rho.norm()))
      throw InvalidArgument("density matrix not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > 1e-10)
      throw InvalidArgument("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
      throw InvalidArgument("density matrix not positive semidefinite");
    s.kind_ = Kind::Mixed;
    s.rho_ = std::move(rho);
    return s;
  }

  /// Skips validation; for internal use on outputs of trusted channels.
  static QuantumState mixed_unchecked(Matrix rho) {
    QuantumState s;
    s.n_ = qubits_for(rho.rows());
    s.kind_ = Kind::Mixed;
    s.rho_ = std::move(rho);
    return s;
  }

  static QuantumState maximally_mixed(int n_qubits) {
    check_matrix_cap(n_qubits);
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    return mixed_unchecked(Matrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  int n_qubits() const { return n_; }
  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::Pure; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_; }
  const Vector& vector() const {
    if (!is_pure()) throw InvalidArgument("state is mixed; no statevector");
    return psi_;
  }
  Vector& vector_mut() { return psi_; }
  Matrix& matrix_mut() { return rho_; }

  /// Density matrix, forming |psi><psi| for pure states.
  Matrix density() const {
    if (is_pure()) {
      check_matrix_cap(n_);
      return psi_ * psi_.adjoint();
    }
    return rho_;
  }
  const Matrix& matrix() const {
    if (is_pure()) throw InvalidArgument("state is pure; call density()");
    return rho_;
  }

  QuantumState to_mixed() const {
    return is_pure() ? mixed_unchecked(density()) : *this;
  }

  /// Born probabilities in the computational basis.
  RealVector probabilities() const {
    if (is_pure()) return psi_.cwiseAbs2();
    return rho_.diagonal().real();
  }

 private:
  static int qubits_for(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    if ((Eigen::Index{1} << n) != dim || n == 0)
      throw DimensionMismatch("state dimension is not a power of two >= 2");
    return n;
  }

  int n_ = 0;
  Kind kind_ = Kind::Pure;
  Vector psi_;
  Matrix rho_;
};

struct Gate {
  enum class Kind { RX, RY, RZ, RPauliString, CNOT, X, H, GlobalPhase, DepolarizeTwoQubit };

  Kind kind;
  std::vector<int> targets;
  double angle = 0.0;   // rotation angle, or lambda for the channel
  std::string paulis;   // RPauliString letters, one per target

  bool is_two_qubit() const {
    return targets.size() == 2 && kind != Kind::DepolarizeTwoQubit;
  }
  bool is_channel() const { return kind == Kind::DepolarizeTwoQubit; }
};

class Circuit {
 public:
  explicit Circuit(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1) throw InvalidArgument("Circuit: n_qubits must be >= 1");
  }

  int n_qubits() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }

  Circuit& add(Gate g) {
    for (int t : g.targets)
      if (t < 0 || t >= n_)
        throw InvalidArgument("gate target " + std::to_string(t) +
                              " out of range for " + std::to_string(n_) + " qubits");
    for (std::size_t i = 0; i < g.targets.size(); ++i)
      for (std::size_t j = i + 1; j < g.targets.size(); ++j)
        if (g.targets[i] == g.targets[j]) throw InvalidArgument("repeated gate target");
    if (g.kind == Gate::Kind::RPauliString && g.paulis.size() != g.targets.size())
      throw InvalidArgument("RPauliString needs one letter per target");
    if (g.kind == Gate::Kind::DepolarizeTwoQubit && (g.angle < 0.0 || g.angle > 1.0))
      throw InvalidArgument("depolarizing strength must lie in [0, 1]");
    gates_.push_back(std::move(g));
    return *this;
  }

  Circuit& rx(int q, double phi) { return add({Gate::Kind::RX, {q}, phi, {}}); }
  Circuit& ry(int q, double phi) { return add({Gate::Kind::RY, {q}, phi, {}}); }
  Circuit& rz(int q, double phi) { return add({Gate::Kind::RZ, {q}, phi, {}}); }
  Circuit& x(int q) { return add({Gate::Kind::X, {q}, 0.0, {}}); }
  Circuit& h(int q) { return add({Gate::Kind::H, {q}, 0.0, {}}); }
  Circuit& cnot(int control, int target) {
    return add({Gate::Kind::CNOT, {control, target}, 0.0, {}});
  }
  Circuit& global_phase(double phi) { return add({Gate::Kind::GlobalPhase, {}, phi, {}}); }
  Circuit& pauli_rotation(const std::string& letters, std::vector<int> targets, double phi) {
    return add({Gate::Kind::RPauliString, std::move(targets), phi, letters});
  }
  Circuit& depolarize(int i, int j, double lambda) {
    return add({Gate::Kind::DepolarizeTwoQubit, {i, j}, lambda, {}});
  }

  /// exp(-i phi P) for a Pauli string P on `targets`, compiled to basis
  /// changes, a CNOT ladder and one two-qubit ZZ rotation.
  Circuit& pauli_rotation_decomposed(const std::string& letters,
                                     const std::vector<int>& targets, double phi) {
    if (letters.size() != targets.size() || targets.empty())
      throw InvalidArgument("pauli_rotation_decomposed: letters/targets mismatch");
    std::vector<int> active;
    std::vector<char> lets;
    for (std::size_t k = 0; k < targets.size(); ++k)
      if (letters[k] != 'I') {
        active.push_back(targets[k]);
        lets.push_back(letters[k]);
      }
    if (active.empty()) return global_phase(phi);
    auto to_z = [&](bool forward) {
      for (std::size_t k = 0; k < active.size(); ++k) {
        if (lets[k] == 'X') h(active[k]);
        // RX(pi/4) takes Y to Z under conjugation; RX(-pi/4) undoes it.
        if (lets[k] == 'Y') rx(active[k], forward ? kPi / 4 : -kPi / 4);
      }
    };
    to_z(true);
    const std::size_t k = active.size();
    if (k == 1) {
      rz(active[0], phi);
    } else {
      for (std::size_t i = 0; i + 2 < k; ++i) cnot(active[i], active[i + 1]);
      pauli_rotation("ZZ", {active[k - 2], active[k - 1]}, phi);
      for (std::size_t i = k - 2; i-- > 0;) cnot(active[i], active[i + 1]);
    }
    to_z(false);
    return *this;
  }

  Circuit& append(const Circuit& other) {
    if (other.n_ != n_) throw DimensionMismatch("Circuit::append: qubit-count mismatch");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
  }

  int two_qubit_gate_count() const {
    return static_cast<int>(std::count_if(gates_.begin(), gates_.end(),
                                          [](const Gate& g) { return g.is_two_qubit(); }));
  }
  bool has_channels() const {
    return std::any_of(gates_.begin(), gates_.end(),
                       [](const Gate& g) { return g.is_channel(); });
  }

  /// Copy with a two-qubit depolarizing channel after every two-qubit gate.
  Circuit with_depolarizing(double lambda) const {
    Circuit out(n_);
    for (const Gate& g : gates_) {
      out.add(g);
      if (g.is_two_qubit()) out.depolarize(g.targets[0], g.targets[1], lambda);
    }
    return out;
  }

 private:
  int n_;
  std::vector<Gate> gates_;
};

namespace detail {

using Mat2 = Eigen::Matrix2cd;

inline Mat2 single_qubit_matrix(const Gate& g) {
  const double c = std::cos(g.angle), s = std::sin(g.angle);
  const Complex I(0, 1);
  Mat2 m;
  switch (g.kind) {
    case Gate::Kind::RX: m << c, -I * s, -I * s, c; break;
    case Gate::Kind::RY: m << c, -s, s, c; break;
    case Gate::Kind::RZ: m << std::exp(-I * g.angle), 0, 0, std::exp(I * g.angle); break;
    case Gate::Kind::X: m << 0, 1, 1, 0; break;
    case Gate::Kind::H: m << 1, 1, 1, -1; m /= std::sqrt(2.0); break;
    default: throw InvalidArgument("not a single-qubit gate");
  }
  return m;
}

// Left-multiplies each column of `a` (rows indexed by basis state) by the gate.
template <typename Dense>
void apply_unitary_left(Dense& a, int n, const Gate& g) {
  const Eigen::Index dim = a.rows();
  const Eigen::Index cols = a.cols();
  const Complex I(0, 1);
  auto bit = [n](int q) { return Eigen::Index{1} << (n - 1 - q); };
  switch (g.kind) {
    case Gate::Kind::GlobalPhase:
      a *= std::exp(-I * g.angle);
      return;
    case Gate::Kind::CNOT: {
      const Eigen::Index cb = bit(g.targets[0]), tb = bit(g.targets[1]);
      for (Eigen::Index b = 0; b < dim; ++b)
        if ((b & cb) && !(b & tb)) a.row(b).swap(a.row(b | tb));
      return;
    }
    case Gate::Kind::RPauliString: {
      PauliString p(n);
      for (std::size_t k = 0; k < g.targets.size(); ++k) p.set(g.targets[k], g.paulis[k]);
      const Complex base = p.base_phase();
      const Dense orig = a;
      a *= std::cos(g.angle);
      const Complex f = -I * std::sin(g.angle) * base;
      for (Eigen::Index b = 0; b < dim; ++b)
        a.row(b ^ static_cast<Eigen::Index>(p.x_mask())) +=
            (f * PauliString::parity_sign(b & p.z_mask())) * orig.row(b);
      return;
    }
    case Gate::Kind::DepolarizeTwoQubit:
      throw InvalidArgument("channel is not a unitary gate");
    default: {
      const Mat2 m = single_qubit_matrix(g);
      const Eigen::Index tb = bit(g.targets[0]);
      for (Eigen::Index b = 0; b < dim; ++b) {
        if (b & tb) continue;
        for (Eigen::Index c = 0; c < cols; ++c) {
          const Complex u = a(b, c), v = a(b | tb, c);
          a(b, c) = m(0, 0) * u + m(0, 1) * v;
          a(b | tb, c) = m(1, 0) * u + m(1, 1) * v;
        }
      }
    }
  }
}

// rho -> P rho P for a Hermitian Pauli string P.
inline Matrix conjugate_by_pauli(const Matrix& rho, const PauliString& p) {
  const Eigen::Index dim = rho.rows();
  const auto x = static_cast<Eigen::Index>(p.x_mask());
  const std::uint64_t z = p.z_mask();
  Matrix out(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    const double sc = PauliString::parity_sign(c & z);
    for (Eigen::Index b = 0; b < dim; ++b)
      out(b ^ x, c ^ x) = sc * PauliString::parity_sign(b & z) * rho(b, c);
  }
  return out;
}

}  // namespace detail

/// (1 - 15 l/16) rho + (l/16) sum over the 15 non-identity P_i P_j of P rho P.
inline QuantumState depolarize_two_qubit(const QuantumState& state, int i, int j,
                                         double lambda) {
  if (state.is_pure()) throw InvalidArgument("depolarize_two_qubit needs a mixed state");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidArgument("depolarizing strength must lie in [0, 1]");
  const int n = state.n_qubits();
  if (i < 0 || j < 0 || i >= n || j >= n || i == j)
    throw InvalidArgument("depolarize_two_qubit: bad target qubits");
  const Matrix& rho = state.matrix();
  Matrix out = (1.0 - 15.0 * lambda / 16.0) * rho;
  if (lambda == 0.0) return QuantumState::mixed_unchecked(std::move(out));
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      PauliString p(n);
      p.set(i, kLetters[a]);
      p.set(j, kLetters[b]);
      out += (lambda / 16.0) * detail::conjugate_by_pauli(rho, p);
    }
  return QuantumState::mixed_unchecked(std::move(out));
}

/// Applies the circuit in order. A pure state is promoted to a density
/// matrix at the first channel.
inline QuantumState apply(const QuantumState& state, const Circuit& circuit) {
  if (state.n_qubits() != circuit.n_qubits())
    throw DimensionMismatch("apply: state has " + std::to_string(state.n_qubits()) +
                            " qubits, circuit has " + std::to_string(circuit.n_qubits()));
  QuantumState s = state;
  const int n = s.n_qubits();
  for (const Gate& g : circuit.gates()) {
    if (g.is_channel()) {
      if (s.is_pure()) s = s.to_mixed();
      s = depolarize_two_qubit(s, g.targets[0], g.targets[1], g.angle);
      continue;
    }
    if (s.is_pure()) {
      detail::apply_unitary_left(s.vector_mut(), n, g);
    } else {
      Matrix& rho = s.matrix_mut();
      detail::apply_unitary_left(rho, n, g);
      Matrix t = rho.adjoint();
      detail::apply_unitary_left(t, n, g);
      rho = t.adjoint();
    }
  }
  return s;
}

/// Dense unitary of a channel-free circuit.
inline Matrix circuit_unitary(const Circuit& circuit) {
  if (circuit.has_channels()) throw InvalidArgument("circuit contains channels");
  check_matrix_cap(circuit.n_qubits());
  const Eigen::Index dim = Eigen::Index{1} << circuit.n_qubits();
  Matrix u = Matrix::Identity(dim, dim);
  for (const Gate& g : circuit.gates()) detail::apply_unitary_left(u, circuit.n_qubits(), g);
  return u;
}

/// Tr(rho P) summed over terms, without forming the observable's matrix.
inline Complex trace_with(const QuantumState& s, const OperatorSum& obs) {
  if (obs.n_qubits() != s.n_qubits())
    throw DimensionMismatch("observable and state qubit counts differ");
  if (s.is_pure()) return s.vector().dot(obs.apply(s.vector()));
  const Matrix& rho = s.matrix();
  const std::uint64_t dim = std::uint64_t{1} << s.n_qubits();
  Complex total = 0;
  for (const auto& [p, c] : obs.terms()) {
    Complex acc = 0;
    for (std::uint64_t b = 0; b < dim; ++b)
      acc += rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b ^ p.x_mask())) *
             PauliString::parity_sign(b & p.z_mask());
    total += c * p.base_phase() * acc;
  }
  return total;
}

/// <O> for a Hermitian observable.
inline double expectation(const QuantumState& s, const OperatorSum& obs) {
  if (!obs.hermitian()) throw NotHermitian("expectation: observable is not Hermitian");
  const Complex v = trace_with(s, obs);
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real())))
    throw NotHermitian("expectation: imaginary part " + std::to_string(v.imag()));
  return v.real();
}

using Histogram = std::map<std::uint64_t, std::uint64_t>;

/// Multinomial readout in the computational basis.
inline Histogram sample_bitstrings(const QuantumState& s, std::uint64_t shots, Rng& rng) {
  if (shots < 1) throw InvalidArgument("shots must be >= 1");
  const RealVector p = s.probabilities();
  std::vector<double> cdf(p.size());
  double acc = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += std::max(0.0, p[i]);
    cdf[i] = acc;
  }
  Histogram h;
  for (std::uint64_t k = 0; k < shots; ++k) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    auto idx = static_cast<std::uint64_t>(it - cdf.begin());
    ++h[idx];
  }
  return h;
}

inline std::string bitstring(std::uint64_t index, int n_qubits) {
  std::string s(n_qubits, '0');
  for (int q = 0; q < n_qubits; ++q)
    if (index >> (n_qubits - 1 - q) & 1) s[q] = '1';
  return s;
}

inline void write_histogram_csv(std::ostream& os, const Histogram& h, int n_qubits) {
  os << "basis_index,bitstring,count\n";
  for (const auto& [idx, count] : h)
    os << idx << ',' << bitstring(idx, n_qubits) << ',' << count << '\n';
}

}  // namespace csm
