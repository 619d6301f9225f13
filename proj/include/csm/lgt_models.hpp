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

// Qubit Hamiltonians and charges of (1+1)-D SU(2) and SU(3) lattice gauge
// theories with staggered fermions and the gauge links integrated out
// (open boundaries). Site n carries 2 (SU2) or 3 (SU3) color qubits; odd
// sites hold quarks, even sites antiquarks. Internally the builders use
// 1-based qubit labels to keep the formulas readable.

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "csm/operators.hpp"

namespace csm {

enum class Group { SU2, SU3 };

inline std::string to_string(Group g) { return g == Group::SU2 ? "su2" : "su3"; }

inline Group parse_group(const std::string& s) {
  if (s == "su2" || s == "SU2") return Group::SU2;
  if (s == "su3" || s == "SU3") return Group::SU3;
  throw InvalidArgument("unknown gauge group '" + s + "' (expected su2 or su3)");
}

inline int colors(Group g) { return g == Group::SU2 ? 2 : 3; }

struct ModelSpec {
  Group group = Group::SU2;
  int n_sites = 2;
  double mass = 0.5;
  double coupling_sq = 0.5;
  double chem_potential = 0.0;

  int n_qubits() const { return colors(group) * n_sites; }

  void validate() const {
    if (n_sites < 1) throw InvalidArgument("n_sites must be >= 1");
    if (!std::isfinite(mass) || !std::isfinite(coupling_sq) ||
        !std::isfinite(chem_potential))
      throw InvalidArgument("model parameters must be finite");
  }

  bool operator==(const ModelSpec&) const = default;
};

enum class Component { Kinetic, Mass, Electric, Chemical };

namespace detail {

// Operator builder over 1-based qubit labels.
class Builder {
 public:
  explicit Builder(int n) : n_(n) {}
  OperatorSum id(double c = 1.0) const { return OperatorSum::identity(n_, c); }
  OperatorSum z(int q) const { return OperatorSum::single(n_, q - 1, 'Z'); }
  OperatorSum op(std::initializer_list<std::pair<int, char>> f) const {
    OperatorSum out = id();
    for (const auto& [q, c] : f) out = out * OperatorSum::single(n_, q - 1, c);
    return out;
  }
  OperatorSum zero() const { return OperatorSum(n_); }

 private:
  int n_;
};

inline OperatorSum herm(const OperatorSum& t) { return t + t.adjoint(); }
inline double sgn(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

inline OperatorSum su2_component(int N, Component which) {
  const Builder B(2 * N);
  OperatorSum h = B.zero();
  switch (which) {
    case Component::Kinetic:
      for (int n = 1; n < N; ++n) {
        OperatorSum t = B.op({{2 * n - 1, '+'}, {2 * n, 'Z'}, {2 * n + 1, '-'}}) +
                        B.op({{2 * n, '+'}, {2 * n + 1, 'Z'}, {2 * n + 2, '-'}});
        h += -0.5 * herm(t);
      }
      break;
    case Component::Mass:
      for (int n = 1; n <= N; ++n)
        h += sgn(n) * 0.5 * (B.z(2 * n - 1) + B.z(2 * n)) + B.id();
      break;
    case Component::Electric:
      // Sum over links of the squared color-electric field.
      for (int n = 1; n < N; ++n)
        h += (3.0 / 8.0) * (N - n) * (B.id() - B.z(2 * n - 1) * B.z(2 * n));
      for (int n = 1; n < N - 1; ++n)
        for (int m = n + 1; m < N; ++m) {
          h += (1.0 / 8.0) * (N - m) * ((B.z(2 * n - 1) - B.z(2 * n)) *
                                        (B.z(2 * m - 1) - B.z(2 * m)));
          h += double(N - m) * herm(B.op({{2 * n - 1, '+'},
                                          {2 * n, '-'},
                                          {2 * m, '+'},
                                          {2 * m - 1, '-'}}));
        }
      break;
    case Component::Chemical:
      for (int q = 1; q <= 2 * N; ++q) h += 0.25 * B.z(q);
      break;
  }
  return h;
}

inline OperatorSum su3_component(int N, Component which) {
  const Builder B(3 * N);
  OperatorSum h = B.zero();
  switch (which) {
    case Component::Kinetic:
      for (int n = 1; n < N; ++n) {
        const int a = 3 * n;
        OperatorSum t =
            B.op({{a - 2, '+'}, {a - 1, 'Z'}, {a, 'Z'}, {a + 1, '-'}}) -
            B.op({{a - 1, '+'}, {a, 'Z'}, {a + 1, 'Z'}, {a + 2, '-'}}) +
            B.op({{a, '+'}, {a + 1, 'Z'}, {a + 2, 'Z'}, {a + 3, '-'}});
        h += 0.5 * sgn(n) * herm(t);
      }
      break;
    case Component::Mass:
      for (int n = 1; n <= N; ++n) {
        const int a = 3 * n;
        h += 0.5 * (sgn(n) * (B.z(a - 2) + B.z(a - 1) + B.z(a)) + B.id(3.0));
      }
      break;
    case Component::Electric:
      for (int n = 1; n < N; ++n) {
        const int a = 3 * n;
        h += ((N - n) / 3.0) * (B.id(3.0) - B.z(a - 2) * B.z(a - 1) -
                                B.z(a - 2) * B.z(a) - B.z(a - 1) * B.z(a));
      }
      for (int n = 1; n < N - 1; ++n)
        for (int m = n + 1; m < N; ++m) {
          const double w = N - m;
          const int a = 3 * n, b = 3 * m;
          OperatorSum t =
              B.op({{a - 2, '+'}, {a - 1, '-'}, {b - 1, '+'}, {b - 2, '-'}}) +
              B.op({{a - 1, '+'}, {a, '-'}, {b - 1, '-'}, {b, '+'}});
          h += w * sgn(n + m) * herm(t);
          h += w * herm(B.op({{a - 2, '+'},
                              {a - 1, 'Z'},
                              {a, '-'},
                              {b - 2, '-'},
                              {b - 1, 'Z'},
                              {b, '+'}}));
          h += (-w / 12.0) *
               (B.z(b - 2) * (B.z(a - 1) + B.z(a) - 2.0 * B.z(a - 2)) +
                B.z(b - 1) * (B.z(a) + B.z(a - 2) - 2.0 * B.z(a - 1)) +
                B.z(b) * (B.z(a - 2) + B.z(a - 1) - 2.0 * B.z(a)));
        }
      break;
    case Component::Chemical:
      for (int q = 1; q <= 3 * N; ++q) h += (1.0 / 6.0) * B.z(q);
      break;
  }
  return h;
}

}  // namespace detail

/// One Hamiltonian term without its prefactor (m, g^2 or mu).
inline OperatorSum build_component(const ModelSpec& spec, Component which) {
  spec.validate();
  return spec.group == Group::SU2 ? detail::su2_component(spec.n_sites, which)
                                  : detail::su3_component(spec.n_sites, which);
}

/// H = H_kin + m H_m + g^2 H_el - mu H_chem.
inline OperatorSum build_hamiltonian(const ModelSpec& spec) {
  return build_component(spec, Component::Kinetic) +
         spec.mass * build_component(spec, Component::Mass) +
         spec.coupling_sq * build_component(spec, Component::Electric) -
         spec.chem_potential * build_component(spec, Component::Chemical);
}

/// Charges of the single site n (1-based): 3 for SU2, 8 for SU3 (Gell-Mann
/// order).
inline std::vector<OperatorSum> build_site_charges(const ModelSpec& spec, int n) {
  spec.validate();
  if (n < 1 || n > spec.n_sites) throw InvalidArgument("site index out of range");
  using detail::herm;
  const detail::Builder B(spec.n_qubits());
  const Complex I(0, 1);
  if (spec.group == Group::SU2) {
    const int a = 2 * n;
    const OperatorSum t = B.op({{a - 1, '-'}, {a, '+'}});
    return {0.5 * herm(B.op({{a - 1, '+'}, {a, '-'}})),
            (0.5 * I) * (t - t.adjoint()),
            0.25 * (B.z(a - 1) - B.z(a))};
  }
  const int a = 3 * n;
  const double s = detail::sgn(n);
  const OperatorSum t2 = B.op({{a - 1, '+'}, {a - 2, '-'}});
  const OperatorSum t45 = B.op({{a - 2, '+'}, {a - 1, 'Z'}, {a, '-'}});
  const OperatorSum t7 = B.op({{a, '+'}, {a - 1, '-'}});
  return {
      (s / 2) * herm(B.op({{a - 2, '+'}, {a - 1, '-'}})),
      (I * s / 2.0) * (t2 - t2.adjoint()),
      0.25 * (B.z(a - 2) - B.z(a - 1)),
      -0.5 * herm(t45),
      (0.5 * I) * (t45 - t45.adjoint()),
      (s / 2) * herm(B.op({{a - 1, '+'}, {a, '-'}})),
      (I * s / 2.0) * (t7 - t7.adjoint()),
      (1.0 / (4.0 * std::sqrt(3.0))) *
          (B.z(a - 2) + B.z(a - 1) - 2.0 * B.z(a)),
  };
}

/// Total (site-summed) charges.
inline std::vector<OperatorSum> build_charges(const ModelSpec& spec) {
  std::vector<OperatorSum> tot = build_site_charges(spec, 1);
  for (int n = 2; n <= spec.n_sites; ++n) {
    const auto site = build_site_charges(spec, n);
    for (std::size_t k = 0; k < tot.size(); ++k) tot[k] += site[k];
  }
  return tot;
}

/// Casimir sum_a (Q^a_tot)^2; its null space is the singlet sector.
inline OperatorSum build_casimir(const ModelSpec& spec) {
  OperatorSum c(spec.n_qubits());
  for (const auto& q : build_charges(spec)) c += q * q;
  return c;
}

struct UnitCellSplit {
  OperatorSum h_diag;
  OperatorSum h_nondiag;
};

/// Diagonal / off-diagonal split of the SU(2) two-site Hamiltonian at mu = 0.
/// The four three-body terms of h_nondiag mutually commute.
inline UnitCellSplit unit_cell_split(const ModelSpec& spec) {
  if (spec.group != Group::SU2 || spec.n_sites != 2 || spec.chem_potential != 0.0)
    throw UnsupportedSpec("unit_cell_split requires su2, 2 sites, mu = 0");
  const double m = spec.mass, g2 = spec.coupling_sq;
  OperatorSum d = OperatorSum::identity(4, 2 * m + 3 * g2 / 8);
  d += (m / 2) * (OperatorSum::from_string("IIZI") + OperatorSum::from_string("IIIZ") -
                  OperatorSum::from_string("ZIII") - OperatorSum::from_string("IZII"));
  d += (-3 * g2 / 8) * OperatorSum::from_string("ZZII");
  OperatorSum nd(4);
  for (const char* s : {"XZXI", "YZYI", "IXZX", "IYZY"})
    nd += -0.25 * OperatorSum::from_string(s);
  return {std::move(d), std::move(nd)};
}

/// Strong-coupling singlet states on the two-site unit cell.
struct SingletStateLibrary {
  Group group;
  std::map<std::string, Vector> states;  // keys: vac, B, Bbar, M, T, BbarB
};

namespace detail {
inline Vector superpose(int n_qubits,
                        std::initializer_list<std::pair<const char*, double>> terms) {
  Vector v = Vector::Zero(Eigen::Index{1} << n_qubits);
  for (const auto& [bits, amp] : terms)
    v[std::stoll(bits, nullptr, 2)] += amp;
  return v.normalized();
}
}  // namespace detail

inline SingletStateLibrary singlet_library(Group group) {
  using detail::superpose;
  SingletStateLibrary lib{group, {}};
  if (group == Group::SU2) {
    lib.states["vac"] = superpose(4, {{"0011", 1}});
    lib.states["B"] = superpose(4, {{"0000", 1}});
    lib.states["Bbar"] = superpose(4, {{"1111", 1}});
    // Relative minus sign: the symmetric combination carries total charge 1.
    lib.states["M"] = superpose(4, {{"1001", 1}, {"0110", -1}});
    lib.states["BbarB"] = superpose(4, {{"1100", 1}});
    return lib;
  }
  lib.states["vac"] = superpose(6, {{"000111", 1}});
  lib.states["B"] = superpose(6, {{"000000", 1}});
  lib.states["Bbar"] = superpose(6, {{"111111", 1}});
  lib.states["M"] = superpose(6, {{"100011", 1}, {"010101", 1}, {"001110", 1}});
  lib.states["T"] = superpose(6, {{"110001", 1}, {"101010", 1}, {"011100", 1}});
  lib.states["BbarB"] = superpose(6, {{"111000", 1}});
  return lib;
}

}  // namespace csm
