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

#include <optional>
#include <string>
#include <vector>

#include "normact/hamspec.hpp"
#include "normact/matlin.hpp"

namespace normact {

// Lower bounds on the norm action generated by an evolution operator u.
// Every bound is measured relative to the identity, ln(||X|| / ||I||), so the
// Frobenius variants start from zero at U(0) = I like the spectral ones.

/// ln ||u||.
double bound_basic(const ComplexMatrix& u, NormKind kind = NormKind::spectral);
/// ln ||u^-1||. Throws SingularMatrix when u is numerically singular.
double bound_inverse(const ComplexMatrix& u,
                     NormKind kind = NormKind::spectral);
/// ln max{||u||, ||u^-1||}.
double bound_max(const ComplexMatrix& u, NormKind kind = NormKind::spectral);
/// ln sqrt(||u|| ||u^-1||); unchanged by rescaling u with a scalar.
double bound_geomean(const ComplexMatrix& u,
                     NormKind kind = NormKind::spectral);
/// ln of the spectral radius. Only meaningful next to the spectral norm.
double bound_eigen(const ComplexMatrix& u);

/// For det-normalized input, ||u||_s = 1 exactly when u is unitary.
/// Returns |spectral_norm(u) - 1| <= tol. Throws NotDetNormalized when
/// |det u - 1| > 1e-6, or when the norm test passes but
/// ||u^H u - I||_F > 10 N tol (the determinant is too far from one for the
/// equivalence to hold at this tol).
bool is_unitary_by_norm(const ComplexMatrix& u_norm, double tol);

/// |det u|^{1/N}: geometric mean of the amplifications of any orthonormal
/// basis.
double geometric_mean_amplification(const ComplexMatrix& u);

/// <<alpha_MP>> * ||U_norm||_s, identically one for invertible u.
double mp_tradeoff(const ComplexMatrix& u);

/// Diagonal factor W of u_norm = Q W P^H.
struct NonUnitaryPart {
  std::vector<double> singular_values;
  SvdTriple svd;

  ComplexMatrix w() const { return svd.w_matrix(); }
};

NonUnitaryPart purely_nonunitary_part(const ComplexMatrix& u_norm);

/// Slack threshold below which the resource inequality counts as violated.
inline constexpr double kSlackTolerance = 1e-6;

/// Everything one audit run learns about a spec. Bounds that need U^-1 are
/// empty when the propagator is numerically singular; `notes` says why.
struct BoundReport {
  NormKind norm_kind = NormKind::spectral;
  double action_full = 0.0;       // integral of ||H||
  double action_traceless = 0.0;  // integral of ||traceless H||

  // Bounds on the determinant-normalized propagator.
  double b_basic = 0.0;
  std::optional<double> b_inverse;
  std::optional<double> b_max;
  std::optional<double> b_geomean;
  std::optional<double> b_eigen;  // spectral norm only
  double slack = 0.0;  // action_traceless - (b_max, or b_basic if absent)
  bool holds = false;

  // Same bounds on the raw propagator, against action_full.
  double b_basic_full = 0.0;
  std::optional<double> b_inverse_full;
  std::optional<double> b_max_full;
  std::optional<double> b_inverse_mp;  // ln ||U_MP^-1||
  double slack_full = 0.0;
  bool holds_full = false;

  double mean_amp = 0.0;  // <<alpha>> of U
  std::optional<double> mp_tradeoff;
  std::vector<double> singular_values;  // of U_norm

  // Propagation diagnostics.
  ComplexMatrix u;
  ComplexMatrix u_norm;
  Complex det_u{1.0, 0.0};
  Complex trace_integral{0.0, 0.0};
  double liouville_residual = 0.0;
  double est_error = 0.0;
  std::size_t steps = 0;

  std::vector<std::string> notes;
};

/// Norm actions, propagation, normalization and every bound for one spec.
/// NonConvergence from quadrature or propagation passes through.
BoundReport audit(const HamiltonianSpec& spec, NormKind kind, double tol);

}  // namespace normact
