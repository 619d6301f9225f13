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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "csm/common.hpp"

namespace csm {

struct SimplexOptions {
  int max_evals = 2000;
  double initial_step = 0.25;  // fraction of each box width
  double ftol = 1e-12;         // spread of simplex values at convergence
  double xtol = 1e-10;         // simplex diameter at convergence
  bool restart_on_converge = true;  // keep spending budget from the best point
};

struct SimplexResult {
  RealVector x;
  double f = std::numeric_limits<double>::infinity();
  int evals = 0;
  bool converged = false;
  std::vector<double> trace;  // objective value of every evaluation
};

/// Nelder-Mead descent on a box. Trial points are clamped onto the box.
inline SimplexResult nelder_mead(const std::function<double(const RealVector&)>& f,
                                 RealVector x0, const RealVector& lo, const RealVector& hi,
                                 const SimplexOptions& opt = {}) {
  const Eigen::Index n = x0.size();
  if (lo.size() != n || hi.size() != n) throw DimensionMismatch("nelder_mead: bound sizes");
  SimplexResult res;
  auto clamp = [&](RealVector x) {
    for (Eigen::Index i = 0; i < n; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
  };
  auto eval = [&](const RealVector& x) {
    double v = f(x);
    if (!std::isfinite(v)) v = std::numeric_limits<double>::max();
    ++res.evals;
    res.trace.push_back(v);
    if (v < res.f) {
      res.f = v;
      res.x = x;
    }
    return v;
  };

  x0 = clamp(x0);
  double step_scale = opt.initial_step;
  while (res.evals < opt.max_evals) {
    std::vector<RealVector> pts{x0};
    for (Eigen::Index i = 0; i < n; ++i) {
      RealVector p = x0;
      const double w = (hi[i] - lo[i]) * step_scale;
      p[i] = (p[i] + w <= hi[i]) ? p[i] + w : p[i] - w;
      pts.push_back(clamp(p));
    }
    std::vector<double> vals;
    for (const auto& p : pts) {
      if (res.evals >= opt.max_evals) return res;
      vals.push_back(eval(p));
    }
    std::vector<std::size_t> idx(pts.size());
    bool done = false;
    while (res.evals < opt.max_evals) {
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
      const std::size_t best = idx.front(), worst = idx.back(), second = idx[idx.size() - 2];
      double diam = 0;
      for (const auto& p : pts) diam = std::max(diam, (p - pts[best]).cwiseAbs().maxCoeff());
      if (std::abs(vals[worst] - vals[best]) <= opt.ftol * (1 + std::abs(vals[best])) &&
          diam <= opt.xtol * std::max(1.0, (hi - lo).maxCoeff())) {
        done = true;
        break;
      }
      if (diam <= 1e-14) {
        done = true;
        break;
      }
      RealVector centroid = RealVector::Zero(n);
      for (std::size_t k = 0; k < pts.size(); ++k)
        if (k != worst) centroid += pts[k];
      centroid /= static_cast<double>(n);
      const RealVector xr = clamp(centroid + (centroid - pts[worst]));
      const double fr = eval(xr);
      if (fr < vals[best]) {
        if (res.evals >= opt.max_evals) break;
        const RealVector xe = clamp(centroid + 2.0 * (centroid - pts[worst]));
        const double fe = eval(xe);
        if (fe < fr) {
          pts[worst] = xe;
          vals[worst] = fe;
        } else {
          pts[worst] = xr;
          vals[worst] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[worst] = xr;
        vals[worst] = fr;
        continue;
      }
      if (res.evals >= opt.max_evals) break;
      const bool outside = fr < vals[worst];
      const RealVector xc = outside ? clamp(centroid + 0.5 * (xr - centroid))
                                    : clamp(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = eval(xc);
      if (fc < std::min(fr, vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
        continue;
      }
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k == best) continue;
        if (res.evals >= opt.max_evals) break;
        pts[k] = clamp(pts[best] + 0.5 * (pts[k] - pts[best]));
        vals[k] = eval(pts[k]);
      }
    }
    if (!done) break;
    res.converged = true;
    if (!opt.restart_on_converge) break;
    // Restart from the incumbent with a smaller simplex.
    x0 = res.x;
    step_scale *= 0.5;
    if (step_scale < 1e-6) break;
  }
  return res;
}

/// Best-so-far sequence of a trace.
inline std::vector<double> running_min(const std::vector<double>& trace) {
  std::vector<double> out(trace.size());
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.size(); ++i) out[i] = m = std::min(m, trace[i]);
  return out;
}

}  // namespace csm
