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

#include <Eigen/Dense>
#include <complex>
#include <string_view>
#include <vector>

namespace normact {

using Complex = std::complex<double>;

/// Dense square complex matrix. Hamiltonians carry units of hbar/time,
/// propagators are dimensionless.
using ComplexMatrix = Eigen::MatrixXcd;

/// Sub-multiplicative matrix norm used for the action and the bounds.
enum class NormKind { spectral, frobenius };

std::string_view to_string(NormKind kind);
/// Parses "spectral" / "frobenius"; throws BadParam otherwise.
NormKind parse_norm_kind(std::string_view name);

/// Singular value decomposition m = q * diag(w) * p^H.
struct SvdTriple {
  ComplexMatrix q;
  std::vector<double> w;  // descending, non-negative
  ComplexMatrix p;

  ComplexMatrix w_matrix() const;
  ComplexMatrix reconstruct() const;
};

/// Throws InvalidMatrix unless m is square, non-empty and finite.
void require_square_finite(const ComplexMatrix& m);

double spectral_norm(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m);
double norm(const ComplexMatrix& m, NormKind kind);
double max_abs_entry(const ComplexMatrix& m);

/// Norm of the identity of the same size (1 for spectral, sqrt(N) for
/// Frobenius).
double identity_norm(Eigen::Index dim, NormKind kind);

SvdTriple svd(const ComplexMatrix& m);
std::vector<double> singular_values(const ComplexMatrix& m);

Complex det(const ComplexMatrix& m);

/// Relative conditioning floor: inverse() refuses when
/// s_min <= kConditionFloor * s_max.
inline constexpr double kConditionFloor = 1e-12;

/// Throws SingularMatrix when the smallest singular value is at or below
/// kConditionFloor * spectral_norm(m).
ComplexMatrix inverse(const ComplexMatrix& m);

/// Scaling and squaring with a diagonal Pade core. Exact to roundoff on
/// nilpotent input since no eigendecomposition is involved.
ComplexMatrix matrix_exp(const ComplexMatrix& m);

std::vector<Complex> eigenvalues(const ComplexMatrix& m);
double spectral_radius(const ComplexMatrix& m);

}  // namespace normact
