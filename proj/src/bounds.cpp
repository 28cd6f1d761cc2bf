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


#include "normact/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "normact/errors.hpp"
#include "normact/propagate.hpp"

namespace normact {

namespace {

double log_relative_norm(const ComplexMatrix& m, NormKind kind) {
  return std::log(norm(m, kind) / identity_norm(m.rows(), kind));
}

}  // namespace

double bound_basic(const ComplexMatrix& u, NormKind kind) {
  return log_relative_norm(u, kind);
}

double bound_inverse(const ComplexMatrix& u, NormKind kind) {
  return log_relative_norm(inverse(u), kind);
}

double bound_max(const ComplexMatrix& u, NormKind kind) {
  return std::max(bound_basic(u, kind), bound_inverse(u, kind));
}

double bound_geomean(const ComplexMatrix& u, NormKind kind) {
  return 0.5 * (bound_basic(u, kind) + bound_inverse(u, kind));
}

double bound_eigen(const ComplexMatrix& u) {
  return std::log(spectral_radius(u));
}

bool is_unitary_by_norm(const ComplexMatrix& u_norm, double tol) {
  require_square_finite(u_norm);
  const Complex d = det(u_norm);
  if (std::abs(d - 1.0) > 1e-6) {
    throw NotDetNormalized("|det U - 1| = " + std::to_string(std::abs(d - 1.0)) +
                           " exceeds 1e-6");
  }
  const bool unit_norm = std::abs(spectral_norm(u_norm) - 1.0) <= tol;
  if (unit_norm) {
    const auto n = u_norm.rows();
    const double deviation =
        (u_norm.adjoint() * u_norm - ComplexMatrix::Identity(n, n)).norm();
    if (deviation > 10.0 * static_cast<double>(n) * tol) {
      throw NotDetNormalized(
          "norm test passed but ||U^H U - I||_F = " + std::to_string(deviation) +
          "; determinant not close enough to one for this tolerance");
    }
  }
  return unit_norm;
}

double geometric_mean_amplification(const ComplexMatrix& u) {
  const auto sv = singular_values(u);
  double log_sum = 0.0;
  for (double s : sv) {
    if (!(s > 0.0)) return 0.0;
    log_sum += std::log(s);
  }
  return std::exp(log_sum / static_cast<double>(sv.size()));
}

double mp_tradeoff(const ComplexMatrix& u) {
  const auto sv = singular_values(u);
  if (!(sv.back() > kConditionFloor * sv.front())) {
    throw SingularMatrix("mp_tradeoff needs an invertible operator");
  }
  const double alpha_mp = geometric_mean_amplification(marginally_passive(u));
  return alpha_mp * spectral_norm(normalize_det(u));
}

NonUnitaryPart purely_nonunitary_part(const ComplexMatrix& u_norm) {
  NonUnitaryPart out;
  out.svd = svd(u_norm);
  out.singular_values = out.svd.w;
  return out;
}

BoundReport audit(const HamiltonianSpec& spec, NormKind kind, double tol) {
  BoundReport r;
  r.norm_kind = kind;
  r.action_full = norm_action(spec, kind, false, tol);
  r.action_traceless = norm_action(spec, kind, true, tol);

  const Propagator p = propagate(spec, tol);
  r.u = p.u;
  r.u_norm = p.u_norm;
  r.det_u = p.det_u;
  r.trace_integral = p.trace_integral;
  r.liouville_residual = liouville_residual(p);
  r.est_error = p.est_error;
  r.steps = p.steps;

  r.b_basic = bound_basic(p.u_norm, kind);
  if (kind == NormKind::spectral) r.b_eigen = bound_eigen(p.u_norm);
  try {
    r.b_inverse = bound_inverse(p.u_norm, kind);
    r.b_max = std::max(r.b_basic, *r.b_inverse);
    r.b_geomean = 0.5 * (r.b_basic + *r.b_inverse);
  } catch (const SingularMatrix& e) {
    r.notes.push_back(std::string("normalized propagator not invertible: ") +
                      e.what());
  }
  r.slack = r.action_traceless - r.b_max.value_or(r.b_basic);
  r.holds = r.slack >= -kSlackTolerance;

  r.b_basic_full = bound_basic(p.u, kind);
  try {
    r.b_inverse_full = bound_inverse(p.u, kind);
    r.b_max_full = std::max(r.b_basic_full, *r.b_inverse_full);
    r.b_inverse_mp = bound_inverse(marginally_passive(p.u), kind);
    r.mp_tradeoff = mp_tradeoff(p.u);
  } catch (const SingularMatrix& e) {
    r.notes.push_back(std::string("propagator not invertible: ") + e.what());
  }
  r.slack_full = r.action_full - r.b_max_full.value_or(r.b_basic_full);
  r.holds_full = r.slack_full >= -kSlackTolerance;

  r.mean_amp = geometric_mean_amplification(p.u);
  r.singular_values = singular_values(p.u_norm);
  return r;
}

}  // namespace normact
