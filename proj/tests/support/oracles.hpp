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

// Test-only reference computations that avoid the library's code paths:
// explicit Kronecker products, matrix exponentials and brute-force
// quadrature.

#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracles {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Eigen::Matrix2cd pauli(char c) {
  const Complex I(0, 1);
  Eigen::Matrix2cd m;
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -I, I, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    case '+': m << 0, 1, 0, 0; break;   // |0><1|
    case '-': m << 0, 0, 1, 0; break;   // |1><0|
    default: m.setIdentity();
  }
  return m;
}

/// Kronecker product over n qubits, qubit 0 leftmost; `ops` maps qubit to a
/// 2x2 matrix (identity elsewhere).
inline Matrix kron_ops(int n, const std::map<int, Eigen::Matrix2cd>& ops) {
  Matrix m = Matrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    auto it = ops.find(q);
    const Eigen::Matrix2cd f = it == ops.end() ? Eigen::Matrix2cd::Identity() : it->second;
    m = Eigen::kroneckerProduct(m, f).eval();
  }
  return m;
}

inline Matrix kron_letters(const std::string& letters) {
  std::map<int, Eigen::Matrix2cd> ops;
  for (int q = 0; q < static_cast<int>(letters.size()); ++q) ops[q] = pauli(letters[q]);
  return kron_ops(static_cast<int>(letters.size()), ops);
}

inline Matrix expm(const Matrix& a) { return a.exp(); }

/// exp(-i phi P) for a letter string.
inline Matrix pauli_rotation(const std::string& letters, double phi) {
  return expm(Complex(0, -phi) * kron_letters(letters));
}

/// Haar-ish random density matrix from a Ginibre matrix.
template <typename Rng>
Matrix random_density(int dim, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix r = a * a.adjoint();
  return r / r.trace();
}

template <typename Rng>
Vector random_vector(int dim, Rng& rng) {
  std::normal_distribution<double> g;
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
  return v.normalized();
}

/// Trapezoid integral of f over [a, b] with n panels.
template <typename F>
double trapezoid(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

/// SU(2) K entry for integer diagonal charge s = 4 Q^z by direct quadrature
/// of the Haar-weighted character over [0, 4 pi].
inline double su2_k_by_quadrature(int s) {
  const double pi = 3.14159265358979323846;
  return trapezoid(
      [&](double a) {
        const double w = std::sin(a / 2);
        return w * w / (2 * pi) * std::cos(a * s / 4.0);
      },
      0.0, 4 * pi, 4000);
}

/// Haar twirl over a compact group with the given Hermitian generators: the
/// Hilbert-Schmidt orthogonal projection onto their commutant.
class Twirl {
 public:
  explicit Twirl(const std::vector<Matrix>& generators) {
    const Eigen::Index d = generators.at(0).rows(), d2 = d * d;
    Matrix map(generators.size() * d2, d2);
    for (Eigen::Index col = 0; col < d2; ++col) {
      Matrix e = Matrix::Zero(d, d);
      e(col % d, col / d) = 1;
      for (std::size_t a = 0; a < generators.size(); ++a) {
        const Matrix c = generators[a] * e - e * generators[a];
        map.block(a * d2, col, d2, 1) = Eigen::Map<const Vector>(c.data(), d2);
      }
    }
    Eigen::JacobiSVD<Matrix> svd(map, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s[rank] > 1e-9 * s[0]) ++rank;
    basis_ = svd.matrixV().rightCols(d2 - rank);
    dim_ = d;
  }

  Matrix operator()(const Matrix& x) const {
    const Vector v = Eigen::Map<const Vector>(x.data(), x.size());
    const Vector p = basis_ * (basis_.adjoint() * v);
    return Eigen::Map<const Matrix>(p.data(), dim_, dim_);
  }

 private:
  Matrix basis_;
  Eigen::Index dim_ = 0;
};

inline double spectral_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace oracles
