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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "csm/csm.hpp"
#include "support/oracles.hpp"

namespace {

using namespace csm;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const ModelSpec kCell{Group::SU2, 2, 0.5, 0.5, 0.0};

ModelSpec cell(double mu) { return {Group::SU2, 2, 0.5, 0.5, mu}; }

// mu = 0, 0.25, ..., 3.
std::vector<double> mu_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 12; ++i) g.push_back(0.25 * i);
  return g;
}

QuantumState vacuum() { return QuantumState::pure(singlet_library(Group::SU2).states.at("vac")); }

// 1. Singlet dimensions.
Verdict singlet_dimensions() {
  bool ok = true;
  const double su2[] = {2, 5, 14, 42, 132, 429};
  for (int n = 1; n <= 6; ++n) {
    // Independent closed form (2N+2)! / ((N+1)! (N+2)!).
    double f = 1;
    for (int k = 1; k <= 2 * n + 2; ++k) f *= k;
    for (int k = 1; k <= n + 1; ++k) f /= k;
    for (int k = 1; k <= n + 2; ++k) f /= k;
    const double d = singlet_dimension({Group::SU2, n});
    ok = ok && d == su2[n - 1] && std::round(f) == su2[n - 1];
  }
  double worst = 0;
  const std::pair<int, double> su3[] = {{2, 6}, {4, 92}, {6, 2074}};
  for (auto [n, want] : su3)
    worst = std::max(worst, std::abs(singlet_dimension({Group::SU3, n}) - want));
  ok = ok && worst <= 1e-6;
  return {ok, "SU2 N=1..6 exact; SU3 max |err| = " + fmt("%.2e", worst)};
}

// 2. K-based expectation against the P0 oracle on random mixed states. The
// identity holds for group-invariant states, so each Ginibre draw is twirled
// over SU(2); the untwirled deviation is reported for reference.
Verdict projection_equivalence() {
  std::mt19937_64 rng(2024);
  const Matrix p0 = oracle_p0(kCell);
  const ProjectorK k = k_diagonal(kCell);
  std::vector<Matrix> charges;
  for (const auto& q : build_charges(kCell)) charges.push_back(to_dense(q));
  const oracles::Twirl twirl(charges);
  const std::vector<OperatorSum> obs = {build_hamiltonian(kCell),
                                        build_component(kCell, Component::Electric),
                                        build_component(kCell, Component::Mass)};
  auto deviation = [&](const Matrix& r) {
    double worst = 0;
    const double w = (r * p0).trace().real();
    for (const auto& o : obs) {
      const double ref = (p0 * r * p0 * to_dense(o)).trace().real() / w;
      worst = std::max(worst, std::abs(singlet_expectation(QuantumState::mixed(r), o, k) - ref));
    }
    return worst;
  };
  double worst = 0, generic = 0;
  for (int i = 0; i < 100; ++i) {
    const Matrix r = oracles::random_density(16, rng);
    generic = std::max(generic, deviation(r));
    worst = std::max(worst, deviation(twirl(r)));
  }
  return {worst <= 1e-9, "100 invariant states x 3 observables, max |diff| = " +
                             fmt("%.2e", worst) + " (untwirled: " + fmt("%.2e", generic) + ")"};
}

// 3. Projected electric energy of the Gibbs state and of the VQT optimum.
Verdict gibbs_and_vqt_electric() {
  const double T = 0.5;
  double worst_exact = 0;
  int vqt_points = 0, vqt_ok_points = 0;
  double worst_vqt = 0;
  for (double mu : mu_grid()) {
    const ModelSpec s = cell(mu);
    const QuantumState rho = gibbs_state(s, T);
    const OperatorSum el = s.coupling_sq * build_component(s, Component::Electric);
    const double oracle = oracle_projected_expectation(s, rho, el);
    const ProjectorK k = k_diagonal(s);
    worst_exact = std::max(worst_exact, std::abs(singlet_expectation(rho, el, k) - oracle));
    if (mu < 1.5 - 1e-9) continue;
    Rng rng(1);
    const VqtResult r = vqt_optimize(s, T, {}, rng);
    int good = 0;
    for (const auto& trial : r.trials) {
      const double v = singlet_expectation(vqt_density_matrix(trial.best, s), el, k);
      const double err = std::abs(v - oracle);
      if (err <= 0.05) ++good;
      worst_vqt = std::max(worst_vqt, err);
    }
    ++vqt_points;
    if (good >= 4) ++vqt_ok_points;
  }
  const bool ok = worst_exact <= 1e-10 && vqt_ok_points == vqt_points;
  return {ok, "Gibbs max |K - P0| = " + fmt("%.2e", worst_exact) + "; VQT >=4/5 trials within 0.05 at " +
                  std::to_string(vqt_ok_points) + "/" + std::to_string(vqt_points) +
                  " mu >= 1.5 points (max err " + fmt("%.4f", worst_vqt) + ")"};
}

// 4. Singlet entropy: MC against exact, exact against the oracle.
Verdict singlet_entropy() {
  const double T = 0.5;
  Rng rng(4);
  int mc_ok = 0;
  double worst_oracle = 0, worst_sigma = 0;
  const auto grid = mu_grid();
  for (double mu : grid) {
    const ModelSpec s = cell(mu);
    const QuantumState rho = gibbs_state(s, T);
    const EntropyEstimate ex = singlet_entropy_exact(rho, s, T);
    const EntropyEstimate mc = singlet_entropy_mc(rho, s, T, 2000, rng);
    const double dev = std::abs(mc.s0 - ex.s0) / mc.std_err;
    worst_sigma = std::max(worst_sigma, dev);
    if (dev < 3) ++mc_ok;
    worst_oracle =
        std::max(worst_oracle, std::abs(ex.s0 - projected_gibbs_quantities(s, T).entropy0));
  }
  const bool ok = mc_ok == static_cast<int>(grid.size()) && worst_oracle <= 1e-8;
  return {ok, "MC within 3 sigma at " + std::to_string(mc_ok) + "/" +
                  std::to_string(grid.size()) + " points (max " + fmt("%.2f", worst_sigma) +
                  " sigma); exact vs oracle max " + fmt("%.2e", worst_oracle)};
}

// 5. Trotter dynamics of the mass term, noiseless and with weak noise.
Verdict trotter_mitigation() {
  const OperatorSum obs = kCell.mass * build_component(kCell, Component::Mass);
  const EvolutionRun clean = evolve(kCell, vacuum(), 0.25, 40, 0.0, obs);
  double worst = 0;
  for (const auto& r : clean.records) worst = std::max(worst, std::abs(r.raw_obs - r.exact_obs));
  const EvolutionRun noisy = evolve(kCell, vacuum(), 0.25, 40, 0.001, obs);
  int closer = 0, fid = 0;
  for (const auto& r : noisy.records) {
    if (std::abs(r.mitigated_obs - r.exact_obs) <= std::abs(r.raw_obs - r.exact_obs)) ++closer;
    if (r.fidelity_proj >= r.fidelity_raw) ++fid;
  }
  const int n = static_cast<int>(noisy.records.size());
  const bool ok = worst <= 0.05 && closer >= 0.9 * n && fid == n;
  return {ok, "noiseless max dev " + fmt("%.4f", worst) + "; mitigated closer at " +
                  std::to_string(closer) + "/" + std::to_string(n) + "; fid_proj >= fid_raw at " +
                  std::to_string(fid) + "/" + std::to_string(n)};
}

// 6. R(t) growth: bound, sigmoid rate linear in lambda, closed-loop estimate.
// Each curve runs for round(1 / lambda) steps so that it saturates.
Verdict r_of_t_noise_learning() {
  const OperatorSum obs = kCell.mass * build_component(kCell, Component::Mass);
  const double lambdas[] = {0.001, 0.002, 0.003, 0.004, 0.005};
  double r_max = 0;
  std::vector<std::pair<double, double>> rates;
  std::string fit_error;
  for (double lam : lambdas) {
    const int steps = static_cast<int>(std::lround(1.0 / lam));
    const auto r = r_of_t(evolve(kCell, vacuum(), 0.25, steps, lam, obs));
    for (const auto& [t, v] : r) r_max = std::max(r_max, v);
    try {
      rates.emplace_back(lam, fit_sigmoid(r).b);
    } catch (const FitDiverged& e) {
      fit_error = e.what();
    }
  }
  if (!fit_error.empty()) return {false, "sigmoid fit failed: " + fit_error};
  const LinearFit line = linear_fit(rates);
  std::vector<std::pair<double, double>> calib;
  double b_query = 0;
  for (const auto& [lam, b] : rates) {
    if (std::abs(lam - 0.002) < 1e-12)
      b_query = b;
    else
      calib.emplace_back(lam, b);
  }
  const double est = estimate_noise_strength(b_query, calib);
  const double rel = std::abs(est - 0.002) / 0.002;
  const bool bound_ok = r_max <= 2.2 + 1e-6;
  const bool ok = bound_ok && line.r_squared > 0.99 && rel <= 0.15;
  return {ok, std::string(bound_ok ? "" : "[bound violated] ") + "max R = " + fmt("%.6f", r_max) +
                  " (limit 2.2 + 1e-6); b vs lambda R^2 = " + fmt("%.6f", line.r_squared) +
                  "; recovered lambda = " + fmt("%.6f", est) + " for 0.002 (" +
                  fmt("%.2f", 100 * rel) + "%)"};
}

// 7. VQE ground energy with and without noise.
Verdict vqe_energies() {
  const double e0 = ground_state(kCell).energy;
  Rng rng(7);
  const VqeResult clean = vqe_optimize(kCell, 0.0, {}, rng);
  const double clean_err = std::abs(clean.energy_raw - e0);
  bool ok = clean_err <= 1e-6;
  std::string detail = "noiseless |E - E0| = " + fmt("%.2e", clean_err);
  for (double lam : {0.002, 0.005, 0.01}) {
    Rng r(7);
    const VqeResult v = vqe_optimize(kCell, lam, {}, r);
    const double raw = std::abs(v.energy_raw - e0), csm = std::abs(v.energy_csm - e0);
    ok = ok && csm <= raw;
    detail += "; l=" + fmt("%g", lam) + " raw " + fmt("%.4f", raw) + " csm " + fmt("%.4f", csm);
  }
  return {ok, detail};
}

// 8. Property suites under three seeds.
std::string property_failures(std::uint64_t seed) {
  std::string fails;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2, 2);
  auto fail = [&](const std::string& what) { fails += " " + what; };

  // Charge algebra of SU(2): [Qx, Qy] = i Qz and cyclic.
  for (int n = 1; n <= 3; ++n) {
    const auto q = build_charges({Group::SU2, n});
    for (int a = 0; a < 3; ++a) {
      const OperatorSum c = commutator(q[a], q[(a + 1) % 3]) - Complex(0, 1) * q[(a + 2) % 3];
      if (!c.empty()) fail("su2-algebra");
    }
  }
  // [H, Q] = 0 for random couplings, both groups.
  for (Group g : {Group::SU2, Group::SU3})
    for (int n = 1; n <= 3; ++n) {
      const ModelSpec s{g, n, u(rng), u(rng), u(rng)};
      const OperatorSum h = build_hamiltonian(s);
      for (const auto& q : build_charges(s)) {
        const OperatorSum c = commutator(h, q);
        if (!c.empty() && to_dense(c).norm() > 1e-10) fail("H-Q");
      }
    }
  // K fixes random singlets.
  for (Group g : {Group::SU2, Group::SU3}) {
    const ModelSpec s{g, 2};
    const Matrix p0 = oracle_p0(s);
    const Vector v = (p0 * oracles::random_vector(1 << s.n_qubits(), rng)).normalized();
    if ((k_diagonal(s).diag.values.cwiseProduct(v) - v).norm() > 1e-9) fail("K-fixes-singlets");
  }
  // Odd-m integrals vanish.
  std::uniform_int_distribution<int> odd(0, 20);
  for (int i = 0; i < 5; ++i) {
    const int m = 2 * odd(rng) + 1;
    if (std::abs(oracles::su2_k_by_quadrature(2 * m)) > 1e-10) fail("odd-m");
  }
  // P0 idempotence and Hermiticity.
  for (auto [g, n] : {std::pair{Group::SU2, 2}, {Group::SU2, 3}, {Group::SU3, 2}}) {
    const Matrix p = oracle_p0({g, n});
    if ((p * p - p).norm() > 1e-10 || (p - p.adjoint()).norm() > 1e-12) fail("P0");
  }
  // Depolarizing channel is CPTP: Choi positivity, trace and positivity.
  std::uniform_real_distribution<double> u01(0, 1);
  for (int i = 0; i < 3; ++i) {
    const double lam = u01(rng);
    Matrix choi = Matrix::Zero(16, 16);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        Matrix e = Matrix::Zero(4, 4);
        e(a, b) = 1;
        choi.block(4 * a, 4 * b, 4, 4) =
            depolarize_two_qubit(QuantumState::mixed_unchecked(e), 0, 1, lam).matrix();
      }
    Eigen::SelfAdjointEigenSolver<Matrix> ce(choi);
    if (ce.eigenvalues().minCoeff() < -1e-12) fail("CP");
    const QuantumState rho = QuantumState::mixed(oracles::random_density(16, rng));
    const Matrix out = depolarize_two_qubit(rho, 1, 3, lam).matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> oe(out);
    if (std::abs(out.trace().real() - 1) > 1e-12 || oe.eigenvalues().minCoeff() < -1e-12) fail("TP");
  }
  // MC error of <K> scales as 1/sqrt(n) within a factor 2.
  {
    const ModelSpec s = cell(1.0);
    const QuantumState rho = gibbs_state(s, 0.5);
    const double exact = singlet_weight(rho, k_diagonal(s));
    Rng mc(seed);
    auto rms = [&](long n) {
      double acc = 0;
      for (int i = 0; i < 20; ++i) {
        const double d = singlet_entropy_mc(rho, s, 0.5, n, mc).k_mean - exact;
        acc += d * d;
      }
      return std::sqrt(acc / 20);
    };
    const double e3 = rms(1000), e4 = rms(10000), e5 = rms(100000);
    for (double ratio : {e3 / e4, e4 / e5})
      if (ratio < std::sqrt(10.0) / 2 || ratio > std::sqrt(10.0) * 2) fail("mc-scaling");
  }
  return fails;
}

Verdict property_suites() {
  std::string detail;
  bool ok = true;
  for (std::uint64_t seed : {11u, 23u, 37u}) {
    const std::string f = property_failures(seed);
    ok = ok && f.empty();
    detail += "seed " + std::to_string(seed) + (f.empty() ? " ok" : " failed:" + f) + "; ";
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "singlet dimensions", 5, singlet_dimensions},
      {2, "projection equivalence", 30, projection_equivalence},
      {3, "Gibbs and VQT electric energy", 600, gibbs_and_vqt_electric},
      {4, "singlet entropy", 300, singlet_entropy},
      {5, "Trotter dynamics and mitigation", 300, trotter_mitigation},
      {6, "R(t) bound and noise learning", 900, r_of_t_noise_learning},
      {7, "VQE energies", 600, vqe_energies},
      {8, "property suites", 1e9, property_suites},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) {
      v.pass = false;
      v.detail += "; over time limit";
    }
    if (!v.pass) ++failures;
    std::printf("%s [%d] %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
