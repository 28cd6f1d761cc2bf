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


#pragma once

#include <cstddef>
#include <functional>

#include "normact/hamspec.hpp"
#include "normact/matlin.hpp"

namespace normact {

/// Solution of i dU/dt = H(t) U with U(start) = I over a time window.
struct Propagator {
  ComplexMatrix u;       // U(t_final)
  ComplexMatrix u_norm;  // determinant-normalized U
  double t_start = 0.0;
  double t_final = 0.0;
  Complex det_u{1.0, 0.0};
  Complex trace_integral{0.0, 0.0};  // integral of tr H over the window
  std::size_t steps = 0;             // accepted steps
  double step_error = 0.0;           // summed step-doubling estimates
  double est_error = 0.0;            // max(step_error, Liouville residual)
};

/// Called after every accepted step with the current time and U(t).
using StepObserver = std::function<void(double, const ComplexMatrix&)>;

/// Step budget of propagate (attempted steps, accepted or rejected).
inline constexpr std::size_t kMaxPropagationSteps = std::size_t{1} << 22;

/// Midpoint exponential stepping U <- exp(-i H(t + h/2) h) U with
/// step-doubling error control. Steps never straddle a breakpoint of the
/// spec. Throws NonConvergence if the budget runs out or the final
/// est_error exceeds tol.
Propagator propagate(const HamiltonianSpec& spec, double tol);
Propagator propagate(const HamiltonianSpec& spec, double tol,
                     TimeWindow window, const StepObserver& observer = {});

/// U / det(U)^{1/N} with det(U)^{1/N} := exp(-(i/N) * trace_integral), the
/// branch that is continuous along the trajectory. Throws SingularPropagator
/// when |det U| < 1e-300.
ComplexMatrix normalize_det(const Propagator& p);

/// Same normalization for a bare matrix, using the principal N-th root.
ComplexMatrix normalize_det(const ComplexMatrix& u);

/// U / ||U||_s.
ComplexMatrix marginally_passive(const ComplexMatrix& u);

/// |det U - exp(-i * trace_integral)|.
double liouville_residual(const Propagator& p);

}  // namespace normact
