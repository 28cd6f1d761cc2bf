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


#include "normact/hamspec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "normact/errors.hpp"

namespace normact {

namespace {

void require_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw BadParam("horizon must be a positive finite time");
  }
}

void require_dim(const ComplexMatrix& m, Eigen::Index dim) {
  require_square_finite(m);
  if (m.rows() != dim) {
    throw InvalidMatrix("schedule mixes matrix sizes " +
                        std::to_string(m.rows()) + " and " +
                        std::to_string(dim));
  }
}

// Index of the segment active at t (right-continuous).
std::size_t segment_at(const PiecewiseSchedule& s, double t) {
  double end = 0.0;
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    end += s.segments[i].duration;
    if (t < end) return i;
  }
  return s.segments.size() - 1;
}

ComplexMatrix interpolate(const SampledSchedule& s, double t) {
  const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
  if (it == s.times.begin()) return s.matrices.front();
  if (it == s.times.end()) return s.matrices.back();
  const auto hi = static_cast<std::size_t>(it - s.times.begin());
  const std::size_t lo = hi - 1;
  const double frac = (t - s.times[lo]) / (s.times[hi] - s.times[lo]);
  return (1.0 - frac) * s.matrices[lo] + frac * s.matrices[hi];
}

}  // namespace

HamiltonianSpec HamiltonianSpec::constant(ComplexMatrix h, double horizon) {
  require_square_finite(h);
  require_horizon(horizon);
  const auto dim = h.rows();
  return {dim, horizon, ConstantSchedule{std::move(h)}};
}

HamiltonianSpec HamiltonianSpec::piecewise(std::vector<Segment> segments) {
  double total = 0.0;
  for (const auto& seg : segments) total += seg.duration;
  return piecewise(std::move(segments), total);
}

HamiltonianSpec HamiltonianSpec::piecewise(std::vector<Segment> segments,
                                           double horizon) {
  if (segments.empty()) throw BadParam("piecewise schedule has no segments");
  require_horizon(horizon);
  const auto dim = segments.front().matrix.rows();
  double total = 0.0;
  for (const auto& seg : segments) {
    if (!(seg.duration > 0.0) || !std::isfinite(seg.duration)) {
      throw BadParam("segment durations must be positive and finite");
    }
    require_dim(seg.matrix, dim);
    total += seg.duration;
  }
  if (total < horizon * (1.0 - 1e-12)) {
    throw BadParam("segment durations sum to " + std::to_string(total) +
                   ", short of the horizon " + std::to_string(horizon));
  }
  return {dim, horizon, PiecewiseSchedule{std::move(segments)}};
}

HamiltonianSpec HamiltonianSpec::sampled(std::vector<double> times,
                                         std::vector<ComplexMatrix> matrices,
                                         double horizon) {
  require_horizon(horizon);
  if (times.size() < 2 || times.size() != matrices.size()) {
    throw BadParam("sampled schedule needs at least two nodes and one matrix "
                   "per node");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw BadParam("sample times must be strictly increasing");
    }
  }
  if (!std::isfinite(times.front()) || !std::isfinite(times.back()) ||
      times.front() > 0.0 || times.back() < horizon) {
    throw BadParam("sample grid must cover [0, T]");
  }
  const auto dim = matrices.front().rows();
  for (const auto& m : matrices) require_dim(m, dim);
  return {dim, horizon,
          SampledSchedule{std::move(times), std::move(matrices)}};
}

HamiltonianSpec HamiltonianSpec::closed_form(
    Eigen::Index dim, double horizon, std::function<ComplexMatrix(double)> fn,
    std::string label, std::vector<double> kinks) {
  require_horizon(horizon);
  if (dim < 1) throw BadParam("dimension must be positive");
  if (!fn) throw BadParam("closed-form schedule needs a callable");
  std::sort(kinks.begin(), kinks.end());
  return {dim, horizon,
          ClosedFormSchedule{std::move(label), std::move(fn), std::move(kinks)}};
}

ComplexMatrix HamiltonianSpec::checked(ComplexMatrix h) const {
  require_dim(h, dim_);
  return h;
}

void HamiltonianSpec::require_window(TimeWindow window) const {
  if (!(window.start >= 0.0 && window.start < window.stop &&
        window.stop <= horizon_)) {
    throw OutOfRange("time window [" + std::to_string(window.start) + ", " +
                     std::to_string(window.stop) + "] not inside [0, " +
                     std::to_string(horizon_) + "]");
  }
}

ComplexMatrix HamiltonianSpec::evaluate(double t) const {
  if (!(t >= 0.0 && t <= horizon_)) {
    throw OutOfRange("t = " + std::to_string(t) + " outside [0, " +
                     std::to_string(horizon_) + "]");
  }
  return std::visit(
      [&](const auto& s) -> ComplexMatrix {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ConstantSchedule>) {
          return s.matrix;
        } else if constexpr (std::is_same_v<S, PiecewiseSchedule>) {
          return s.segments[segment_at(s, t)].matrix;
        } else if constexpr (std::is_same_v<S, SampledSchedule>) {
          return interpolate(s, t);
        } else {
          return checked(s.fn(t));
        }
      },
      schedule_);
}

std::vector<double> HamiltonianSpec::breakpoints(TimeWindow window) const {
  std::vector<double> interior;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PiecewiseSchedule>) {
          double end = 0.0;
          for (const auto& seg : s.segments) {
            end += seg.duration;
            interior.push_back(end);
          }
        } else if constexpr (std::is_same_v<S, SampledSchedule>) {
          interior = s.times;
        } else if constexpr (std::is_same_v<S, ClosedFormSchedule>) {
          interior = s.kinks;
        }
      },
      schedule_);

  std::vector<double> out{window.start};
  const double guard = 1e-13 * window.length();
  for (double t : interior) {
    if (t > window.start + guard && t < window.stop - guard) out.push_back(t);
  }
  out.push_back(window.stop);
  return out;
}

ComplexMatrix HamiltonianSpec::evaluate_in_piece(double lo, double hi,
                                                 double t) const {
  if (const auto* pw = std::get_if<PiecewiseSchedule>(&schedule_)) {
    return pw->segments[segment_at(*pw, 0.5 * (lo + hi))].matrix;
  }
  return evaluate(std::clamp(t, lo, hi));
}

ComplexMatrix traceless(const ComplexMatrix& h) {
  require_square_finite(h);
  const auto n = h.rows();
  return h - (h.trace() / static_cast<double>(n)) *
                 ComplexMatrix::Identity(n, n);
}

namespace {

// Simpson panel with samples at the ends, quarter points and midpoint.
struct Panel {
  double a;
  double b;
  std::array<double, 5> f;
  double value;
  double error;
};

void refine_estimate(Panel& p) {
  const double w = p.b - p.a;
  const double coarse = w / 6.0 * (p.f[0] + 4.0 * p.f[2] + p.f[4]);
  const double fine = w / 12.0 * (p.f[0] + 4.0 * p.f[1] + 2.0 * p.f[2] +
                                  4.0 * p.f[3] + p.f[4]);
  p.value = fine + (fine - coarse) / 15.0;
  p.error = std::abs(fine - coarse) / 15.0;
}

bool less_error(const Panel& x, const Panel& y) { return x.error < y.error; }

}  // namespace

double norm_action(const HamiltonianSpec& spec, NormKind kind,
                   bool use_traceless, double tol) {
  return norm_action(spec, kind, use_traceless, tol, spec.full_window());
}

double norm_action(const HamiltonianSpec& spec, NormKind kind,
                   bool use_traceless, double tol, TimeWindow window) {
  if (!(tol > 0.0)) throw BadParam("quadrature tolerance must be positive");
  spec.require_window(window);

  const auto bps = spec.breakpoints(window);
  std::vector<Panel> heap;
  constexpr int kInitialPanelsPerPiece = 8;

  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    const double lo = bps[k];
    const double hi = bps[k + 1];
    auto integrand = [&](double t) {
      const ComplexMatrix h = spec.evaluate_in_piece(lo, hi, t);
      return norm(use_traceless ? traceless(h) : h, kind);
    };
    const double step = (hi - lo) / kInitialPanelsPerPiece;
    for (int i = 0; i < kInitialPanelsPerPiece; ++i) {
      const double a = lo + i * step;
      const double b = (i + 1 == kInitialPanelsPerPiece) ? hi : a + step;
      const double w = b - a;
      Panel p{a, b,
              {integrand(a), integrand(a + 0.25 * w), integrand(a + 0.5 * w),
               integrand(a + 0.75 * w), integrand(b)},
              0.0, 0.0};
      refine_estimate(p);
      heap.push_back(p);
    }
  }
  std::make_heap(heap.begin(), heap.end(), less_error);

  auto total_error = [&] {
    double e = 0.0;
    for (const auto& p : heap) e += p.error;
    return e;
  };

  double err = total_error();
  std::size_t since_resum = 0;
  while (err > tol) {
    if (heap.size() >= kMaxQuadraturePanels) {
      throw NonConvergence("norm action quadrature exhausted " +
                           std::to_string(kMaxQuadraturePanels) +
                           " panels (error estimate " + std::to_string(err) +
                           ")");
    }
    std::pop_heap(heap.begin(), heap.end(), less_error);
    const Panel worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < 0.5 * (worst.a + mid) && 0.5 * (mid + worst.b) < worst.b)) {
      throw NonConvergence("norm action quadrature panel collapsed near t = " +
                           std::to_string(worst.a));
    }
    // Piece bounds of the parent are inherited so one-sided limits stay put.
    const auto piece = std::upper_bound(bps.begin(), bps.end(), mid);
    const double lo = *(piece - 1);
    const double hi = (piece == bps.end()) ? bps.back() : *piece;
    auto integrand = [&](double t) {
      const ComplexMatrix h = spec.evaluate_in_piece(lo, hi, t);
      return norm(use_traceless ? traceless(h) : h, kind);
    };

    const double wl = mid - worst.a;
    Panel left{worst.a, mid,
               {worst.f[0], integrand(worst.a + 0.25 * wl), worst.f[1],
                integrand(worst.a + 0.75 * wl), worst.f[2]},
               0.0, 0.0};
    const double wr = worst.b - mid;
    Panel right{mid, worst.b,
                {worst.f[2], integrand(mid + 0.25 * wr), worst.f[3],
                 integrand(mid + 0.75 * wr), worst.f[4]},
                0.0, 0.0};
    refine_estimate(left);
    refine_estimate(right);
    err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), less_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), less_error);

    if (++since_resum == 1024) {
      err = total_error();
      since_resum = 0;
    }
  }

  std::sort(heap.begin(), heap.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double sum = 0.0;
  for (const auto& p : heap) sum += p.value;
  return std::max(sum, 0.0);
}

}  // namespace normact
