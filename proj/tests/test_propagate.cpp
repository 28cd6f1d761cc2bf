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


#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "normact/errors.hpp"
#include "normact/propagate.hpp"
#include "normact/scenarios.hpp"
#include "oracles.hpp"

using namespace normact;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
const double kE = std::numbers::e;

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("decay propagator", "[propagate]") {
  const double tol = 1e-10;
  const auto spec = HamiltonianSpec::constant(diag2(0.0, -kI), 2.0);
  const auto p = propagate(spec, tol);
  CHECK((p.u - diag2(1.0, std::exp(-2.0))).norm() <= tol);
  CHECK((p.u_norm - diag2(kE, 1.0 / kE)).norm() <= 10 * tol);
  CHECK(std::abs(p.trace_integral - Complex(0.0, -2.0)) <= 1e-14);
  CHECK(liouville_residual(p) <= tol);
  CHECK(p.est_error <= tol);
  CHECK(p.t_final == 2.0);

  // Already marginally passive.
  CHECK((marginally_passive(p.u) - p.u).norm() <= 1e-15);
}

TEST_CASE("exceptional point propagator", "[propagate]") {
  const auto s = scenario_exceptional(1.0, 1.0);
  const auto p = propagate(s.spec, 1e-10);
  ComplexMatrix expected = ComplexMatrix::Identity(2, 2);
  expected(0, 1) = -kI;
  CHECK((p.u - expected).norm() <= 1e-10);
  CHECK((p.u_norm - expected).norm() <= 1e-10);
  CHECK(std::abs(p.det_u - 1.0) <= 1e-10);
}

TEST_CASE("cooling propagator matches closed form", "[propagate]") {
  const double tol = 1e-9;
  for (double theta : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
    const auto s = scenario_cooling(CoolingSchedule::linear(0.0, theta, 1.0), 1.0);
    const auto p = propagate(s.spec, tol);
    const ComplexMatrix& ref = s.closed.u_matrix;
    CHECK((p.u - ref).norm() <= 10 * tol * ref.norm());
    CHECK((p.u_norm - s.closed.u_norm_matrix).norm() <= 10 * tol * ref.norm());

    // Independent fixed-step product formula.
    const ComplexMatrix prod = oracle::product_formula(
        [&](double t) { return s.spec.evaluate(t); }, 0.0, 1.0, 20000);
    CHECK((p.u - prod).norm() <= 1e-6 * ref.norm());
  }
}

TEST_CASE("determinant bookkeeping", "[propagate]") {
  std::mt19937_64 rng(31);
  const double tol = 1e-8;
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    std::vector<Segment> segs;
    for (int k = 0; k < 3; ++k) {
      segs.push_back({0.4, oracle::random_matrix(rng, n, -1.0, 1.0)});
    }
    const auto spec = HamiltonianSpec::piecewise(std::move(segs));
    const auto p = propagate(spec, tol);
    CHECK(std::abs(p.det_u - det(p.u)) <= 1e-10 * std::abs(p.det_u));
    CHECK(std::abs(det(p.u_norm) - 1.0) <= 1e-8);
    CHECK(liouville_residual(p) <= 10 * p.est_error + 1e-15);
    CHECK(p.est_error <= tol);

    const ComplexMatrix principal = normalize_det(p.u);
    CHECK(std::abs(det(principal) - 1.0) <= 1e-8);
    // The two normalizations differ by an N-th root of unity.
    const Complex ratio = principal(0, 0) / p.u_norm(0, 0);
    CHECK(std::abs(std::pow(ratio, static_cast<double>(n)) - 1.0) <= 1e-8);
    CHECK((principal - ratio * p.u_norm).norm() <= 1e-8 * principal.norm());
  }
}

TEST_CASE("traceless specs keep unit determinant", "[propagate]") {
  std::mt19937_64 rng(77);
  const double tol = 1e-9;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const ComplexMatrix h = traceless(oracle::random_matrix(rng, n, -1.0, 1.0));
    const auto p = propagate(HamiltonianSpec::constant(h, 1.0), tol);
    CHECK(std::abs(p.det_u - 1.0) <= tol);
    CHECK((p.u - matrix_exp(-kI * h)).norm() <= 10 * tol * p.u.norm());
  }
}

TEST_CASE("hermitian generators give unitary evolution", "[propagate][property]") {
  std::mt19937_64 rng(55);
  const double tol = 1e-9;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const ComplexMatrix h = oracle::random_hermitian(rng, n);
    const auto p = propagate(HamiltonianSpec::constant(h, 1.5), tol);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    CHECK((p.u.adjoint() * p.u - id).norm() <= 10 * tol);
    CHECK_THAT(spectral_norm(p.u_norm), WithinAbs(1.0, 1e-8));
  }
}

TEST_CASE("composition over windows", "[propagate][property]") {
  std::mt19937_64 rng(64);
  const double tol = 1e-8;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const ComplexMatrix a = oracle::random_matrix(rng, n, -0.5, 0.5);
    const ComplexMatrix b = oracle::random_matrix(rng, n, -0.5, 0.5);
    const auto spec = HamiltonianSpec::closed_form(
        n, 2.0, [a, b](double t) -> ComplexMatrix { return a + std::sin(2.0 * t) * b; },
        "test");
    const auto whole = propagate(spec, tol);
    const auto first = propagate(spec, tol, {0.0, 1.0});
    const auto second = propagate(spec, tol, {1.0, 2.0});
    CHECK(second.t_start == 1.0);
    const ComplexMatrix joined = second.u * first.u;
    CHECK((whole.u - joined).norm() <= 10 * tol * std::max(1.0, whole.u.norm()));
    CHECK(std::abs(whole.trace_integral - first.trace_integral - second.trace_integral) <=
          10 * tol * std::max(1.0, std::abs(whole.trace_integral)));
  }
}

TEST_CASE("observer sees every accepted step", "[propagate]") {
  const auto spec = HamiltonianSpec::constant(diag2(0.0, -kI), 1.0);
  std::vector<double> times;
  const auto p = propagate(spec, 1e-8, spec.full_window(),
                           [&](double t, const ComplexMatrix& u) {
                             times.push_back(t);
                             CHECK(std::abs(u(1, 1) - std::exp(-t)) <= 1e-8);
                           });
  REQUIRE(times.size() == p.steps);
  CHECK(std::is_sorted(times.begin(), times.end()));
  CHECK(times.back() == 1.0);
}

TEST_CASE("marginally passive normalization", "[propagate]") {
  CHECK((marginally_passive(2.0 * ComplexMatrix::Identity(3, 3)) -
         ComplexMatrix::Identity(3, 3)).norm() == 0.0);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix u = oracle::random_matrix(rng, 2 + trial % 5, -3.0, 3.0);
    const ComplexMatrix mp = marginally_passive(u);
    CHECK_THAT(spectral_norm(mp), WithinAbs(1.0, 1e-10));
    // The second pass divides by a norm that is one to within roundoff.
    const double s = spectral_norm(mp);
    CHECK(std::abs(s - 1.0) <= 16 * std::numeric_limits<double>::epsilon());
    CHECK(marginally_passive(mp) == mp / s);
  }
  CHECK_THROWS_AS(marginally_passive(ComplexMatrix::Zero(2, 2)), InvalidMatrix);
}

TEST_CASE("normalize_det edge cases", "[propagate]") {
  ComplexMatrix rot(2, 2);
  rot << 0.6, -0.8, 0.8, 0.6;
  CHECK((normalize_det(rot) - rot).norm() <= 1e-15);
  CHECK((normalize_det(diag2(1.0, std::exp(-2.0))) - diag2(kE, 1.0 / kE)).norm() <= 1e-14);
  CHECK_THROWS_AS(normalize_det(diag2(1.0, 0.0)), SingularPropagator);
  CHECK_THROWS_AS(normalize_det(diag2(1e-200, 1e-200)), SingularPropagator);
}

TEST_CASE("error paths", "[propagate]") {
  const auto spec = HamiltonianSpec::constant(diag2(0.0, -kI), 1.0);
  CHECK_THROWS_AS(propagate(spec, 0.0), BadParam);
  CHECK_THROWS_AS(propagate(spec, 1e-8, {0.5, 2.0}), OutOfRange);
  // Tolerance far below roundoff of a stiff cooling run cannot be met.
  const auto stiff = scenario_cooling(CoolingSchedule::linear(0.0, 3.0, 1.0), 1.0);
  CHECK_THROWS_AS(propagate(stiff.spec, 1e-13), NonConvergence);
}
