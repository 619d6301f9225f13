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

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace csm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Random source used throughout. Callers own one per thread.
using Rng = std::mt19937_64;

/// Largest register for which dense matrices (2^n x 2^n) are formed.
inline constexpr int kMaxMatrixQubits = 14;
/// Largest register for which statevectors (2^n) are formed.
inline constexpr int kMaxStateQubits = 20;
/// Coefficients below this magnitude are dropped from operator sums.
inline constexpr double kPruneThreshold = 1e-14;
/// Tr(rho K) below this is treated as "no singlet weight".
inline constexpr double kSingletWeightThreshold = 1e-10;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class UnsupportedSpec : public Error {
 public:
  using Error::Error;
};

/// Tr(rho K) is below the degeneracy threshold: the state carries
/// (numerically) no weight in the charge-singlet sector.
class NearZeroSingletWeight : public Error {
 public:
  using Error::Error;
};

/// A finite-group average that is not idempotent.
class NonProjector : public Error {
 public:
  using Error::Error;
};

class FitDiverged : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

inline void check_matrix_cap(int n_qubits) {
  if (n_qubits > kMaxMatrixQubits)
    throw CapExceeded("refusing dense " + std::to_string(n_qubits) +
                      "-qubit matrix: cap is " +
                      std::to_string(kMaxMatrixQubits) + " qubits");
}

inline void check_state_cap(int n_qubits) {
  if (n_qubits > kMaxStateQubits)
    throw CapExceeded("refusing dense " + std::to_string(n_qubits) +
                      "-qubit statevector: cap is " +
                      std::to_string(kMaxStateQubits) + " qubits");
}

/// Uniform double in [0, 1) with 53 random bits; independent of the
/// standard library's distribution implementations.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace csm
