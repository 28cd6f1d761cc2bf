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


#include "normact/matlin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "normact/errors.hpp"

namespace normact {

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::spectral:
      return "spectral";
    case NormKind::frobenius:
      return "frobenius";
  }
  return "spectral";
}

NormKind parse_norm_kind(std::string_view name) {
  if (name == "spectral") return NormKind::spectral;
  if (name == "frobenius") return NormKind::frobenius;
  throw BadParam("unknown norm kind '" + std::string(name) + "'");
}

ComplexMatrix SvdTriple::w_matrix() const {
  ComplexMatrix out = ComplexMatrix::Zero(q.cols(), p.cols());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = w[i];
  }
  return out;
}

ComplexMatrix SvdTriple::reconstruct() const {
  return q * w_matrix() * p.adjoint();
}

void require_square_finite(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidMatrix("matrix must be square and non-empty, got " +
                        std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw InvalidMatrix("matrix has non-finite entries");
  }
}

namespace {

Eigen::JacobiSVD<ComplexMatrix> jacobi(const ComplexMatrix& m, bool vectors) {
  require_square_finite(m);
  const unsigned flags =
      vectors ? (Eigen::ComputeFullU | Eigen::ComputeFullV) : 0U;
  return Eigen::JacobiSVD<ComplexMatrix>(m, flags);
}

}  // namespace

double spectral_norm(const ComplexMatrix& m) {
  return jacobi(m, false).singularValues()(0);
}

double frobenius_norm(const ComplexMatrix& m) {
  require_square_finite(m);
  return m.norm();
}

double norm(const ComplexMatrix& m, NormKind kind) {
  return kind == NormKind::spectral ? spectral_norm(m) : frobenius_norm(m);
}

double max_abs_entry(const ComplexMatrix& m) {
  require_square_finite(m);
  return m.cwiseAbs().maxCoeff();
}

double identity_norm(Eigen::Index dim, NormKind kind) {
  return kind == NormKind::spectral ? 1.0
                                    : std::sqrt(static_cast<double>(dim));
}

SvdTriple svd(const ComplexMatrix& m) {
  const auto dec = jacobi(m, true);
  const auto& sv = dec.singularValues();
  // Eigen returns the singular values sorted in decreasing order; the stable
  // sort pins the order of exact ties to the returned column order.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    order[static_cast<std::size_t>(i)] = i;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return sv(a) > sv(b); });

  SvdTriple out;
  out.q.resize(m.rows(), m.cols());
  out.p.resize(m.rows(), m.cols());
  out.w.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    out.q.col(col) = dec.matrixU().col(order[k]);
    out.p.col(col) = dec.matrixV().col(order[k]);
    out.w.push_back(sv(order[k]));
  }
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  const auto sv = jacobi(m, false).singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

Complex det(const ComplexMatrix& m) {
  require_square_finite(m);
  return Eigen::PartialPivLU<ComplexMatrix>(m).determinant();
}

ComplexMatrix inverse(const ComplexMatrix& m) {
  const auto sv = jacobi(m, false).singularValues();
  const double s_max = sv(0);
  const double s_min = sv(sv.size() - 1);
  if (!(s_min > kConditionFloor * s_max)) {
    throw SingularMatrix("matrix is numerically singular (s_min = " +
                         std::to_string(s_min) +
                         ", s_max = " + std::to_string(s_max) + ")");
  }
  return Eigen::FullPivLU<ComplexMatrix>(m).inverse();
}

namespace {

// Diagonal Pade approximants r_m(A) = q_m(A)^{-1} p_m(A) with p_m(-A) = q_m(A)
// and the backward-error thresholds on ||A||_1 for double precision.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0,
                                          420.0,   30.0,    1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0,
                                          277200.0,   25200.0,   1512.0,
                                          56.0,       1.0};
constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const ComplexMatrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

ComplexMatrix pade_solve(const ComplexMatrix& u, const ComplexMatrix& v) {
  return Eigen::PartialPivLU<ComplexMatrix>(v - u).solve(v + u);
}

// Degrees 3..9: accumulate even powers directly.
template <std::size_t K>
ComplexMatrix pade_low(const ComplexMatrix& a, const std::array<double, K>& b) {
  const auto n = a.rows();
  const ComplexMatrix ident = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix power = ident;
  ComplexMatrix odd = ComplexMatrix::Zero(n, n);
  ComplexMatrix even = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k + 1 < K; k += 2) {
    even += b[k] * power;
    odd += b[k + 1] * power;
    if (k + 2 < K) power = power * a2;
  }
  return pade_solve(a * odd, even);
}

ComplexMatrix pade13(const ComplexMatrix& a) {
  const auto& b = kPade13;
  const auto n = a.rows();
  const ComplexMatrix ident = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix odd_hi = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const ComplexMatrix odd =
      a * (a6 * odd_hi + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  const ComplexMatrix even_hi = b[12] * a6 + b[10] * a4 + b[8] * a2;
  const ComplexMatrix even =
      a6 * even_hi + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  return pade_solve(odd, even);
}

}  // namespace

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
  require_square_finite(m);
  const double nrm = one_norm(m);
  if (nrm <= kTheta3) return pade_low(m, kPade3);
  if (nrm <= kTheta5) return pade_low(m, kPade5);
  if (nrm <= kTheta7) return pade_low(m, kPade7);
  if (nrm <= kTheta9) return pade_low(m, kPade9);

  int squarings = 0;
  if (nrm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
  }
  ComplexMatrix result = pade13(std::ldexp(1.0, -squarings) * m);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

std::vector<Complex> eigenvalues(const ComplexMatrix& m) {
  require_square_finite(m);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("eigenvalue iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double spectral_radius(const ComplexMatrix& m) {
  double radius = 0.0;
  for (const Complex& z : eigenvalues(m)) radius = std::max(radius, std::abs(z));
  return radius;
}

}  // namespace normact
