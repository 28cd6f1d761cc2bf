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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "normact/bounds.hpp"
#include "normact/errors.hpp"
#include "normact/hamspec.hpp"
#include "normact/propagate.hpp"
#include "normact/scenarios.hpp"
#include "oracles.hpp"

using namespace normact;

namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Accumulates one criterion's outcome; the first failure message is kept.
struct Check {
  bool ok = true;
  std::string first_failure;
  double worst = 0.0;

  void expect(bool cond, const char* fmt, double a, double b) {
    if (cond || !ok) {
      if (!cond) ok = false;
      return;
    }
    ok = false;
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    first_failure = buf;
  }
  void track(double value) { worst = std::max(worst, value); }
};

// Liouville residuals of every propagation in criteria 1-5.
struct LiouvilleLog {
  std::size_t calls = 0;
  std::size_t failures = 0;
  double worst_ratio = 0.0;

  void record(const BoundReport& r, double tol) {
    ++calls;
    worst_ratio = std::max(worst_ratio, r.liouville_residual / tol);
    if (!(r.liouville_residual <= tol)) ++failures;
  }
};

int g_failed = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  if (!ok) ++g_failed;
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, title,
              detail.c_str());
  std::fflush(stdout);
}

// Runs a criterion body, turning an escaped exception into a failure.
void run(int id, const char* title, const std::function<std::string(Check&)>& body) {
  Check c;
  std::string detail;
  try {
    detail = body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.first_failure = std::string("exception: ") + e.what();
  }
  report(id, title, c.ok, c.ok ? detail : c.first_failure);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

LiouvilleLog g_liouville;
std::vector<std::pair<double, double>> g_chain_eigen;    // (b_eigen, b_basic)
std::vector<std::pair<double, double>> g_chain_geomean;  // (b_geomean, b_max)

void log_chains(const BoundReport& r) {
  if (r.b_eigen) g_chain_eigen.emplace_back(*r.b_eigen, r.b_basic);
  if (r.b_geomean && r.b_max) g_chain_geomean.emplace_back(*r.b_geomean, *r.b_max);
}

std::string criterion_decay(Check& c) {
  const double tol = 1e-10;
  double slowest = 0.0;
  for (double gamma : {0.5, 1.0, 2.0}) {
    for (double horizon : {1.0, 2.0}) {
      const auto start = Clock::now();
      const auto s = scenario_decay(gamma, horizon);
      const auto r = audit(s.spec, NormKind::spectral, tol);
      const double elapsed = seconds_since(start);
      slowest = std::max(slowest, elapsed);
      g_liouville.record(r, tol);
      log_chains(r);

      const double d1 = std::abs(r.action_traceless - r.b_basic);
      c.expect(d1 <= 1e-8, "|action_traceless - b_basic| = %.3e at gamma T = %g", d1,
               gamma * horizon);
      c.expect(r.b_inverse_mp.has_value(), "b_inverse(U_MP) missing%.0f%.0f", 0, 0);
      const double d2 = std::abs(r.action_full - r.b_inverse_mp.value_or(0.0));
      c.expect(d2 <= 1e-8, "|action_full - b_inverse(U_MP)| = %.3e at gamma T = %g", d2,
               gamma * horizon);
      c.expect(elapsed < 1.0, "run took %.3f s at gamma T = %g", elapsed, gamma * horizon);
      c.track(std::max(d1, d2));
    }
  }
  return fmt("6 runs, max deviation %.2e, slowest %.3f s", c.worst, slowest);
}

std::string criterion_cooling_headline(Check& c) {
  const double edge = kPi - 1e-12;
  const auto s = scenario_cooling(CoolingSchedule::linear(0.0, edge, 1.0), 1.0);
  const double action = s.closed.action_traceless;
  const double bound = s.closed.b_basic;
  c.expect(std::abs(action - 15.294) <= 0.02, "action %.6f, bound %.6f", action, bound);
  c.expect(std::abs(bound - 14.509) <= 0.02, "bound %.6f, action %.6f", bound, action);

  const double tol = 1e-8;
  for (double theta : {0.5, 1.0, kPi / 2, 2.0, 2.5, 3.0}) {
    const auto sc = scenario_cooling(CoolingSchedule::linear(0.0, theta, 1.0), 1.0);
    const auto r = audit(sc.spec, NormKind::spectral, tol);
    g_liouville.record(r, tol);
    log_chains(r);
    const double da = std::abs(r.action_traceless - cooling_action(theta));
    const double db = std::abs(r.b_basic - cooling_bound(theta));
    c.expect(da <= 1e-6, "quadrature off by %.3e at theta %g", da, theta);
    c.expect(db <= 1e-6, "propagated bound off by %.3e at theta %g", db, theta);
    c.track(std::max(da, db));
  }
  return fmt("action %.4f, bound %.4f; pipeline within %.2e for theta <= 3", action, bound,
             c.worst);
}

std::string criterion_cooling_slack(Check& c) {
  const double tol = 1e-9;
  for (double theta : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
    const double closed = cooling_action(theta) - cooling_bound(theta);
    const double dc = std::abs(closed - theta / 4);
    c.expect(dc <= 1e-6, "closed-form slack off by %.3e at theta %g", dc, theta);
    for (auto schedule : {CoolingSchedule::linear(0.0, theta, 1.0),
                          CoolingSchedule::smoothstep(0.0, theta, 1.0)}) {
      const auto s = scenario_cooling(schedule, 1.0);
      const auto r = audit(s.spec, NormKind::spectral, tol);
      g_liouville.record(r, tol);
      log_chains(r);
      const double dp = std::abs(r.action_traceless - r.b_basic - theta / 4);
      c.expect(dp <= 1e-6, "pipeline slack off by %.3e at theta %g", dp, theta);
      c.track(std::max(dc, dp));
    }
  }
  return fmt("3 angles, 2 schedules, max deviation %.2e", c.worst);
}

std::string criterion_exceptional(Check& c) {
  const double tol = 1e-10;
  const std::pair<double, double> cases[] = {{0.5, 1.0}, {0.5, 2.0}, {2.5, 2.0}};
  for (auto [e0, horizon] : cases) {
    const double x = e0 * horizon;
    const auto s = scenario_exceptional(e0, horizon);
    const auto r = audit(s.spec, NormKind::spectral, tol);
    g_liouville.record(r, tol);
    log_chains(r);
    const double rhs = 1.0 + 0.5 * x * (x + std::sqrt(4.0 + x * x));
    const double expected = 0.5 * std::log(rhs);

    const double da = std::abs(r.action_traceless - x);
    c.expect(da <= 1e-9, "action off by %.3e at x = %g", da, x);
    const double db = std::abs(r.b_basic - expected);
    c.expect(db <= 1e-9, "b_basic off by %.3e at x = %g", db, x);
    c.expect(r.b_eigen.has_value(), "b_eigen missing%.0f%.0f", 0, 0);
    const double de = std::abs(r.b_eigen.value_or(1.0));
    c.expect(de <= 1e-12, "|b_eigen| = %.3e at x = %g", de, x);
    c.expect(std::exp(2.0 * x) >= rhs, "exp(2x) = %.6g below %.6g", std::exp(2.0 * x), rhs);
    c.track(std::max(da, db));
  }
  return fmt("x in {0.5, 1, 5}, max deviation %.2e", c.worst);
}

HamiltonianSpec random_spec(std::mt19937_64& rng, bool piecewise) {
  std::uniform_int_distribution<int> dim(2, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Index n = dim(rng);
  const double horizon = 2.0 * (1.0 - unit(rng));  // (0, 2]
  auto draw = [&] {
    ComplexMatrix h = oracle::random_matrix(rng, n, -1.0, 1.0);
    return ComplexMatrix(h * (3.0 * unit(rng) / spectral_norm(h)));
  };
  if (!piecewise) return HamiltonianSpec::constant(draw(), horizon);
  std::vector<Segment> segs;
  for (int k = 0; k < 4; ++k) segs.push_back({horizon / 4, draw()});
  return HamiltonianSpec::piecewise(std::move(segs), horizon);
}

std::string criterion_master(Check& c) {
  const double tol = 1e-8;
  std::mt19937_64 rng(20260101);
  const auto start = Clock::now();
  double min_slack = 1e300;
  double min_slack_frob = 1e300;
  int fallbacks = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto spec = random_spec(rng, trial % 2 == 1);
    const auto r = audit(spec, NormKind::spectral, tol);
    g_liouville.record(r, tol);
    log_chains(r);
    if (!r.b_max) ++fallbacks;
    const double slack = r.action_traceless - r.b_max.value_or(r.b_basic);
    min_slack = std::min(min_slack, slack);
    c.expect(slack >= -kSlackTolerance, "spectral slack %.3e in trial %g", slack, trial);
    const double slack_full = r.action_full - r.b_max_full.value_or(r.b_basic_full);
    c.expect(slack_full >= -kSlackTolerance, "raw slack %.3e in trial %g", slack_full, trial);

    // Frobenius, reusing the propagated matrices.
    const double action_f = norm_action(spec, NormKind::frobenius, true, tol);
    const double b_f = r.b_inverse ? bound_max(r.u_norm, NormKind::frobenius)
                                   : bound_basic(r.u_norm, NormKind::frobenius);
    min_slack_frob = std::min(min_slack_frob, action_f - b_f);
    c.expect(action_f - b_f >= -kSlackTolerance, "frobenius slack %.3e in trial %g",
             action_f - b_f, trial);
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 60.0, "took %.1f s%.0f", elapsed, 0);
  return fmt("500 specs, min slack %.3e (spectral) %.3e (frobenius), %.1f s", min_slack,
             min_slack_frob, elapsed) +
         (fallbacks ? fmt(", %g without inverse", fallbacks) : std::string());
}

std::string criterion_unitarity(Check& c) {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> dim(2, 6);
  const double tol = 1e-9;
  double worst_bound = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = dim(rng);
    const ComplexMatrix h = oracle::random_hermitian(rng, n);
    const auto p = propagate(HamiltonianSpec::constant(h, 1.0), tol);
    c.expect(is_unitary_by_norm(p.u_norm, 1e-7), "hermitian trial %g reported non-unitary%.0f",
             trial, 0);
    const double bounds[] = {bound_basic(p.u_norm), bound_inverse(p.u_norm),
                             bound_max(p.u_norm), bound_geomean(p.u_norm),
                             bound_eigen(p.u_norm)};
    for (double b : bounds) {
      worst_bound = std::max(worst_bound, std::abs(b));
      c.expect(std::abs(b) <= 1e-7, "bound %.3e in hermitian trial %g", b, trial);
    }
  }

  int collected = 0;
  int drawn = 0;
  while (collected < 200) {
    ++drawn;
    const Eigen::Index n = dim(rng);
    const ComplexMatrix g = oracle::random_matrix(rng, n, -1.0, 1.0);
    const auto p = propagate(HamiltonianSpec::constant(g, 1.0), 1e-8);
    if (!(spectral_norm(p.u_norm) > 1.0 + 1e-6)) continue;
    ++collected;
    c.expect(!is_unitary_by_norm(p.u_norm, 1e-7),
             "non-hermitian draw %g with norm %.6f reported unitary", drawn,
             spectral_norm(p.u_norm));
  }
  return fmt("200 unitary (max |bound| %.2e), 200 non-unitary from %g draws", worst_bound,
             drawn);
}

std::string criterion_tradeoff(Check& c) {
  std::mt19937_64 rng(4242);
  double worst_amp = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix u = oracle::random_matrix(rng, 2 + trial % 5, -2.0, 2.0);
    const double t = mp_tradeoff(u);
    c.expect(std::abs(t - 1.0) <= 1e-9, "tradeoff %.15f in trial %g", t, trial);
    c.track(std::abs(t - 1.0));
    const double amp = geometric_mean_amplification(marginally_passive(u));
    worst_amp = std::max(worst_amp, amp);
    c.expect(amp <= 1.0 + 1e-12, "<<alpha_MP>> = %.15f in trial %g", amp, trial);
  }
  return fmt("max |tradeoff - 1| %.2e, max <<alpha_MP>> %.6f", c.worst, worst_amp);
}

std::string criterion_liouville(Check& c) {
  c.expect(g_liouville.calls > 0, "no propagations recorded%.0f%.0f", 0, 0);
  c.expect(g_liouville.failures == 0, "%g of %g residuals above tol",
           static_cast<double>(g_liouville.failures), static_cast<double>(g_liouville.calls));
  return fmt("%g propagations, max residual/tol %.2e", static_cast<double>(g_liouville.calls),
             g_liouville.worst_ratio);
}

std::string criterion_structural(Check& c) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> mag(-5.0, 5.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::size_t chains = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const ComplexMatrix u = oracle::random_matrix(rng, 2 + trial % 5, -1.0, 1.0);
    const Complex scale = std::polar(std::exp(mag(rng)), phase(rng));
    for (NormKind kind : {NormKind::spectral, NormKind::frobenius}) {
      const double drift = std::abs(bound_geomean(scale * u, kind) - bound_geomean(u, kind));
      c.expect(drift <= 1e-10, "geomean drift %.3e in trial %g", drift, trial);
      c.track(drift);
      g_chain_geomean.emplace_back(bound_geomean(u, kind), bound_max(u, kind));
    }
    g_chain_eigen.emplace_back(bound_eigen(u), bound_basic(u));
  }
  for (auto [lo, hi] : g_chain_eigen) {
    c.expect(lo <= hi + 1e-10, "b_eigen %.6g above b_basic %.6g", lo, hi);
    ++chains;
  }
  for (auto [lo, hi] : g_chain_geomean) {
    c.expect(lo <= hi + 1e-10, "b_geomean %.6g above b_max %.6g", lo, hi);
    ++chains;
  }
  return fmt("max drift %.2e, %g ordering checks", c.worst, static_cast<double>(chains));
}

}  // namespace

int main() {
  run(1, "decay equality", criterion_decay);
  run(2, "cooling headline number", criterion_cooling_headline);
  run(3, "cooling slack identity", criterion_cooling_slack);
  run(4, "exceptional point", criterion_exceptional);
  run(5, "master inequality", criterion_master);
  run(6, "unitarity iff", criterion_unitarity);
  run(7, "marginally passive tradeoff", criterion_tradeoff);
  run(8, "Liouville residual", criterion_liouville);
  run(9, "structural invariants", criterion_structural);
  std::printf("%d of 9 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
