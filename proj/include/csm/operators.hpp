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

// Pauli-string operator algebra.
//
// Qubit 0 is the most significant bit of a computational basis index, so the
// bitstring "0011" is the integer 3. |0> is spin up (Z eigenvalue +1).

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "csm/common.hpp"

namespace csm {

/// Tensor product of single-qubit Paulis, stored as X and Z bit masks aligned
/// with basis-index bits. Letter per qubit: I=(0,0), X=(1,0), Z=(0,1), Y=(1,1).
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 63)
      throw InvalidArgument("PauliString: n_qubits must be in [1, 63]");
  }
  PauliString(int n_qubits, std::uint64_t x, std::uint64_t z)
      : PauliString(n_qubits) {
    const std::uint64_t mask = full_mask();
    if ((x | z) & ~mask)
      throw InvalidArgument("PauliString: mask bits beyond n_qubits");
    x_ = x;
    z_ = z;
  }

  /// Parses a letter string such as "XIZY".
  static PauliString from_letters(const std::string& letters) {
    PauliString p(static_cast<int>(letters.size()));
    for (int q = 0; q < p.n_; ++q) p.set(q, letters[q]);
    return p;
  }

  int n_qubits() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  std::uint64_t bit(int q) const {
    return std::uint64_t{1} << (n_ - 1 - q);
  }

  char letter(int q) const {
    const bool x = x_ & bit(q), z = z_ & bit(q);
    if (x && z) return 'Y';
    if (x) return 'X';
    if (z) return 'Z';
    return 'I';
  }

  void set(int q, char c) {
    if (q < 0 || q >= n_) throw InvalidArgument("PauliString: qubit out of range");
    const std::uint64_t b = bit(q);
    x_ &= ~b;
    z_ &= ~b;
    switch (c) {
      case 'I': break;
      case 'X': x_ |= b; break;
      case 'Y': x_ |= b; z_ |= b; break;
      case 'Z': z_ |= b; break;
      default:
        throw InvalidArgument(std::string("PauliString: bad letter '") + c + "'");
    }
  }

  std::string letters() const {
    std::string s(n_, 'I');
    for (int q = 0; q < n_; ++q) s[q] = letter(q);
    return s;
  }

  bool is_identity() const { return (x_ | z_) == 0; }
  bool is_diagonal() const { return x_ == 0; }
  int weight() const { return std::popcount(x_ | z_); }

  /// Action on a basis state: P|b> = phase * |flip>.
  std::pair<std::uint64_t, Complex> act(std::uint64_t b) const {
    return {b ^ x_, base_phase() * parity_sign(b & z_)};
  }

  /// i^{popcount(x & z)}: the phase from writing each Y as i X Z.
  Complex base_phase() const { return ipow(std::popcount(x_ & z_)); }

  bool commutes_with(const PauliString& o) const {
    return ((std::popcount(x_ & o.z_) + std::popcount(z_ & o.x_)) & 1) == 0;
  }

  auto operator<=>(const PauliString&) const = default;

  static Complex ipow(int k) {
    switch (((k % 4) + 4) % 4) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return {-1, 0};
      default: return {0, -1};
    }
  }
  static double parity_sign(std::uint64_t v) {
    return (std::popcount(v) & 1) ? -1.0 : 1.0;
  }

 private:
  std::uint64_t full_mask() const {
    return n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
  }

  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// Product of two Pauli strings: returns (phase, string) with a*b = phase*string.
inline std::pair<Complex, PauliString> pauli_product(const PauliString& a,
                                                     const PauliString& b) {
  if (a.n_qubits() != b.n_qubits())
    throw DimensionMismatch("pauli_product: qubit-count mismatch");
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  const int e = std::popcount(a.x_mask() & a.z_mask()) +
                std::popcount(b.x_mask() & b.z_mask()) +
                2 * std::popcount(a.z_mask() & b.x_mask()) -
                std::popcount(x & z);
  return {PauliString::ipow(e), PauliString(a.n_qubits(), x, z)};
}

/// Weighted sum of Pauli strings on a fixed register.
class OperatorSum {
 public:
  using Terms = std::map<PauliString, Complex>;

  OperatorSum() = default;
  explicit OperatorSum(int n_qubits, double prune = kPruneThreshold)
      : n_(n_qubits), prune_(prune) {
    if (n_qubits < 1) throw InvalidArgument("OperatorSum: n_qubits must be >= 1");
  }

  static OperatorSum identity(int n_qubits, Complex c = 1.0) {
    OperatorSum s(n_qubits);
    s.add_term(PauliString(n_qubits), c);
    return s;
  }

  static OperatorSum from_string(const std::string& letters, Complex c = 1.0) {
    const PauliString p = PauliString::from_letters(letters);
    OperatorSum s(p.n_qubits());
    s.add_term(p, c);
    return s;
  }

  /// Single-qubit operator on qubit q (0-based). Accepts I, X, Y, Z and the
  /// ladder operators '+' = |0><1| = (X + iY)/2 and '-' = |1><0| = (X - iY)/2.
  static OperatorSum single(int n_qubits, int q, char c) {
    OperatorSum s(n_qubits);
    auto str = [&](char l) {
      PauliString p(n_qubits);
      p.set(q, l);
      return p;
    };
    switch (c) {
      case '+':
        s.add_term(str('X'), 0.5);
        s.add_term(str('Y'), Complex(0, 0.5));
        break;
      case '-':
        s.add_term(str('X'), 0.5);
        s.add_term(str('Y'), Complex(0, -0.5));
        break;
      default:
        s.add_term(str(c), 1.0);
    }
    return s;
  }

  /// Product of single-qubit factors, e.g. product(4, {{0,'+'},{1,'Z'},{2,'-'}}).
  static OperatorSum product(int n_qubits,
                             std::initializer_list<std::pair<int, char>> factors) {
    OperatorSum out = identity(n_qubits);
    for (const auto& [q, c] : factors) out = out * single(n_qubits, q, c);
    return out;
  }

  int n_qubits() const { return n_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  double prune_threshold() const { return prune_; }

  Complex coefficient(const PauliString& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? Complex{} : it->second;
  }
  Complex coefficient(const std::string& letters) const {
    return coefficient(PauliString::from_letters(letters));
  }

  void add_term(const PauliString& p, Complex c) {
    if (p.n_qubits() != n_)
      throw DimensionMismatch("OperatorSum: term has " +
                              std::to_string(p.n_qubits()) + " qubits, sum has " +
                              std::to_string(n_));
    auto [it, inserted] = terms_.try_emplace(p, c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) < prune_) terms_.erase(it);
  }

  /// All coefficients real (every Pauli string is Hermitian).
  bool hermitian(double tol = 1e-12) const {
    for (const auto& [p, c] : terms_)
      if (std::abs(c.imag()) > tol) return false;
    return true;
  }

  bool is_diagonal() const {
    for (const auto& [p, c] : terms_)
      if (!p.is_diagonal()) return false;
    return true;
  }

  OperatorSum adjoint() const {
    OperatorSum out(n_, prune_);
    for (const auto& [p, c] : terms_) out.terms_.emplace(p, std::conj(c));
    return out;
  }

  OperatorSum& operator+=(const OperatorSum& o) {
    check_same(o);
    for (const auto& [p, c] : o.terms_) add_term(p, c);
    return *this;
  }
  OperatorSum& operator-=(const OperatorSum& o) {
    check_same(o);
    for (const auto& [p, c] : o.terms_) add_term(p, -c);
    return *this;
  }
  OperatorSum& operator*=(Complex s) {
    Terms out;
    for (const auto& [p, c] : terms_)
      if (std::abs(c * s) >= prune_) out.emplace(p, c * s);
    terms_ = std::move(out);
    return *this;
  }

  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
  friend OperatorSum operator*(OperatorSum a, Complex s) { return a *= s; }
  friend OperatorSum operator*(Complex s, OperatorSum a) { return a *= s; }
  friend OperatorSum operator*(OperatorSum a, double s) { return a *= Complex(s); }
  friend OperatorSum operator*(double s, OperatorSum a) { return a *= Complex(s); }

  friend OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
    a.check_same(b);
    OperatorSum out(a.n_, a.prune_);
    for (const auto& [pa, ca] : a.terms_)
      for (const auto& [pb, cb] : b.terms_) {
        auto [phase, p] = pauli_product(pa, pb);
        auto [it, inserted] = out.terms_.try_emplace(p, ca * cb * phase);
        if (!inserted) it->second += ca * cb * phase;
      }
    out.prune();
    return out;
  }

  /// Applies the operator to a statevector without forming a matrix.
  Vector apply(const Vector& v) const {
    const std::uint64_t dim = std::uint64_t{1} << n_;
    if (static_cast<std::uint64_t>(v.size()) != dim)
      throw DimensionMismatch("OperatorSum::apply: vector length mismatch");
    Vector out = Vector::Zero(v.size());
    for (const auto& [p, c] : terms_) {
      const Complex base = c * p.base_phase();
      const std::uint64_t x = p.x_mask(), z = p.z_mask();
      for (std::uint64_t b = 0; b < dim; ++b)
        out[b ^ x] += base * PauliString::parity_sign(b & z) * v[b];
    }
    return out;
  }

  /// One line per term: "<re> <im> <letters>", full precision.
  std::string to_text() const {
    std::string out;
    char buf[96];
    for (const auto& [p, c] : terms_) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g ", c.real(), c.imag());
      out += buf;
      out += p.letters();
      out += '\n';
    }
    return out;
  }

  static OperatorSum from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    OperatorSum out;
    bool have = false;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      double re, im;
      std::string letters;
      if (!(ls >> re >> im >> letters))
        throw InvalidArgument("OperatorSum::from_text: malformed line " +
                              std::to_string(line_no));
      const PauliString p = PauliString::from_letters(letters);
      if (!have) {
        out = OperatorSum(p.n_qubits());
        have = true;
      }
      out.add_term(p, Complex(re, im));
    }
    if (!have) throw InvalidArgument("OperatorSum::from_text: no terms");
    return out;
  }

 private:
  void check_same(const OperatorSum& o) const {
    if (o.n_ != n_)
      throw DimensionMismatch("OperatorSum: qubit-count mismatch (" +
                              std::to_string(n_) + " vs " +
                              std::to_string(o.n_) + ")");
  }
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = std::abs(it->second) < prune_ ? terms_.erase(it) : std::next(it);
  }

  int n_ = 0;
  double prune_ = kPruneThreshold;
  Terms terms_;
};

inline OperatorSum add(const OperatorSum& a, const OperatorSum& b) { return a + b; }
inline OperatorSum multiply(const OperatorSum& a, const OperatorSum& b) { return a * b; }
inline OperatorSum commutator(const OperatorSum& a, const OperatorSum& b) {
  return a * b - b * a;
}

/// Dense 2^n x 2^n matrix. Refuses registers above the matrix cap.
inline Matrix to_dense(const OperatorSum& a) {
  check_matrix_cap(a.n_qubits());
  const std::uint64_t dim = std::uint64_t{1} << a.n_qubits();
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& [p, c] : a.terms()) {
    const Complex base = c * p.base_phase();
    for (std::uint64_t b = 0; b < dim; ++b)
      m(b ^ p.x_mask(), b) += base * PauliString::parity_sign(b & p.z_mask());
  }
  return m;
}

/// Diagonal over the computational basis.
struct DiagonalOperator {
  int n_qubits = 0;
  Vector values;

  DiagonalOperator() = default;
  DiagonalOperator(int n, Vector v) : n_qubits(n), values(std::move(v)) {
    if (values.size() != (Eigen::Index{1} << n))
      throw DimensionMismatch("DiagonalOperator: expected 2^" +
                              std::to_string(n) + " values");
  }

  Complex trace() const { return values.sum(); }
  Matrix dense() const {
    check_matrix_cap(n_qubits);
    return values.asDiagonal();
  }
};

/// Diagonal of an operator sum, evaluated term by term (no matrix).
inline DiagonalOperator diagonal_of(const OperatorSum& a) {
  check_state_cap(a.n_qubits());
  const std::uint64_t dim = std::uint64_t{1} << a.n_qubits();
  Vector v = Vector::Zero(dim);
  for (const auto& [p, c] : a.terms()) {
    if (!p.is_diagonal()) continue;
    for (std::uint64_t b = 0; b < dim; ++b)
      v[b] += c * PauliString::parity_sign(b & p.z_mask());
  }
  return {a.n_qubits(), std::move(v)};
}

/// Expands a diagonal in {I, Z} strings with a fast Walsh-Hadamard transform.
inline OperatorSum pauli_decompose_diagonal(const DiagonalOperator& d,
                                            double prune = kPruneThreshold) {
  check_state_cap(d.n_qubits);
  Vector w = d.values;
  const Eigen::Index dim = w.size();
  for (Eigen::Index h = 1; h < dim; h <<= 1)
    for (Eigen::Index i = 0; i < dim; i += 2 * h)
      for (Eigen::Index j = i; j < i + h; ++j) {
        const Complex u = w[j], v = w[j + h];
        w[j] = u + v;
        w[j + h] = u - v;
      }
  OperatorSum out(d.n_qubits, prune);
  const double scale = 1.0 / static_cast<double>(dim);
  for (Eigen::Index s = 0; s < dim; ++s)
    out.add_term(PauliString(d.n_qubits, 0, static_cast<std::uint64_t>(s)),
                 w[s] * scale);
  return out;
}

}  // namespace csm
