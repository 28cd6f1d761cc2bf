// Copyright 2026 The normact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "normact/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "normact/errors.hpp"

namespace normact {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kTinyDet = 1e-300;
constexpr double kRoundoffFloor = 4.0 * 2.220446049250313e-16;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

ComplexMatrix step_operator(const ComplexMatrix& h, double dt) {
  return matrix_exp((-kI * dt) * h);
}

}  // namespace

Propagator propagate(const HamiltonianSpec& spec, double tol) {
  return propagate(spec, tol, spec.full_window());
}

Propagator propagate(const HamiltonianSpec& spec, double tol,
                     TimeWindow window, const StepObserver& observer) {
  if (!(tol > 0.0)) throw BadParam("propagation tolerance must be positive");
  spec.require_window(window);

  const auto n = spec.dim();
  const double span = window.length();
  Propagator out;
  out.t_start = window.start;
  out.t_final = window.stop;
  out.u = ComplexMatrix::Identity(n, n);

  const auto bps = spec.breakpoints(window);
  std::size_t attempts = 0;
  double h_next = span;

  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    const double lo = bps[k];
    const double hi = bps[k + 1];
    auto ham = [&](double t) { return spec.evaluate_in_piece(lo, hi, t); };

    double t = lo;
    double h = std::min(h_next, hi - lo);
    while (t < hi) {
      if (++attempts > kMaxPropagationSteps) {
        throw NonConvergence("propagation exhausted " +
                             std::to_string(kMaxPropagationSteps) +
                             " steps at t = " + std::to_string(t));
      }
      const bool last = t + h >= hi - 1e-14 * span;
      if (last) h = hi - t;
      if (!(h > 1e-15 * span)) {
        throw NonConvergence("propagation step underflow at t = " +
                             std::to_string(t));
      }

      const ComplexMatrix h_q1 = ham(t + 0.25 * h);
      const ComplexMatrix h_q3 = ham(t + 0.75 * h);
      const ComplexMatrix full = step_operator(ham(t + 0.5 * h), h);
      const ComplexMatrix halves =
          step_operator(h_q3, 0.5 * h) * step_operator(h_q1, 0.5 * h);
      // Local error of the advanced propagator, not of the step operator.
      const ComplexMatrix advanced = halves * out.u;
      const double err = ((halves - full) * out.u).norm() / 3.0;
      // Half the budget goes to truncation; differences below a few ulps of
      // the result are roundoff and use up the rest.
      const double allowed =
          std::max(0.5 * tol * h / span, kRoundoffFloor * advanced.norm());

      double grow = 4.0;
      if (err > 0.0) grow = std::clamp(0.9 * std::sqrt(allowed / err), 0.2, 4.0);

      if (err <= allowed) {
        out.u = advanced;
        out.trace_integral += 0.5 * h * (h_q1.trace() + h_q3.trace());
        out.step_error += err;
        ++out.steps;
        t = last ? hi : t + h;
        if (observer) observer(t, out.u);
        h_next = h * grow;
        h = std::min(h_next, hi - t);
      } else {
        h *= grow;
      }
    }
  }

  out.det_u = det(out.u);
  const double residual = liouville_residual(out);
  out.est_error = std::max(out.step_error, residual);
  if (out.est_error > tol) {
    throw NonConvergence("propagation error estimate " +
                         sci(out.est_error) + " exceeds tolerance " +
                         sci(tol) + " (Liouville residual " + sci(residual) +
                         ")");
  }
  out.u_norm = normalize_det(out);
  return out;
}

ComplexMatrix normalize_det(const Propagator& p) {
  if (!(std::abs(p.det_u) >= kTinyDet)) {
    throw SingularPropagator("|det U| below 1e-300, cannot normalize");
  }
  const double n = static_cast<double>(p.u.rows());
  return p.u * std::exp(kI * p.trace_integral / n);
}

ComplexMatrix normalize_det(const ComplexMatrix& u) {
  const Complex d = det(u);
  if (!(std::abs(d) >= kTinyDet)) {
    throw SingularPropagator("|det U| below 1e-300, cannot normalize");
  }
  const double n = static_cast<double>(u.rows());
  return u / std::exp(std::log(d) / n);
}

ComplexMatrix marginally_passive(const ComplexMatrix& u) {
  const double s = spectral_norm(u);
  if (!(s > 0.0)) throw InvalidMatrix("zero matrix has no passive rescaling");
  return u / s;
}

double liouville_residual(const Propagator& p) {
  return std::abs(p.det_u - std::exp(-kI * p.trace_integral));
}

}  // namespace normact
