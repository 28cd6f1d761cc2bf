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

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "normact/matlin.hpp"

namespace normact {

/// One constant stretch of a piecewise-constant schedule.
struct Segment {
  double duration;
  ComplexMatrix matrix;
};

struct ConstantSchedule {
  ComplexMatrix matrix;
};

struct PiecewiseSchedule {
  std::vector<Segment> segments;
};

/// Matrices at strictly increasing nodes, linearly interpolated entrywise.
struct SampledSchedule {
  std::vector<double> times;
  std::vector<ComplexMatrix> matrices;
};

/// H(t) from a closure, typically one of the built-in scenarios. `kinks` lists
/// interior times where H(t) is not smooth.
struct ClosedFormSchedule {
  std::string label;
  std::function<ComplexMatrix(double)> fn;
  std::vector<double> kinks;
};

using Schedule = std::variant<ConstantSchedule, PiecewiseSchedule,
                              SampledSchedule, ClosedFormSchedule>;

/// Sub-interval [start, stop] of the horizon.
struct TimeWindow {
  double start;
  double stop;

  double length() const { return stop - start; }
};

/// A time-dependent N x N Hamiltonian on [0, T]. Immutable after
/// construction; all factories validate their input and throw BadParam or
/// InvalidMatrix.
class HamiltonianSpec {
 public:
  static HamiltonianSpec constant(ComplexMatrix h, double horizon);
  /// Horizon defaults to the sum of the durations.
  static HamiltonianSpec piecewise(std::vector<Segment> segments);
  static HamiltonianSpec piecewise(std::vector<Segment> segments,
                                   double horizon);
  static HamiltonianSpec sampled(std::vector<double> times,
                                 std::vector<ComplexMatrix> matrices,
                                 double horizon);
  static HamiltonianSpec closed_form(Eigen::Index dim, double horizon,
                                     std::function<ComplexMatrix(double)> fn,
                                     std::string label,
                                     std::vector<double> kinks = {});

  Eigen::Index dim() const { return dim_; }
  double horizon() const { return horizon_; }
  TimeWindow full_window() const { return {0.0, horizon_}; }
  const Schedule& schedule() const { return schedule_; }

  /// H(t) for t in [0, T]; throws OutOfRange otherwise. Piecewise schedules
  /// are right-continuous, except at T where the last segment applies.
  ComplexMatrix evaluate(double t) const;

  /// Sorted times in `window` where H(t) may jump or kink, including both
  /// window ends. Consecutive entries delimit the smooth pieces.
  std::vector<double> breakpoints(TimeWindow window) const;

  /// H(t) as seen from inside the piece [lo, hi]: at a jump of a
  /// piecewise-constant schedule this returns the one-sided limit belonging
  /// to that piece.
  ComplexMatrix evaluate_in_piece(double lo, double hi, double t) const;

  /// Throws OutOfRange unless 0 <= start < stop <= T.
  void require_window(TimeWindow window) const;

 private:
  HamiltonianSpec(Eigen::Index dim, double horizon, Schedule schedule)
      : dim_(dim), horizon_(horizon), schedule_(std::move(schedule)) {}

  ComplexMatrix checked(ComplexMatrix h) const;

  Eigen::Index dim_;
  double horizon_;
  Schedule schedule_;
};

/// h - (tr h / N) I.
ComplexMatrix traceless(const ComplexMatrix& h);

/// Integral of t -> ||H(t)|| (or ||traceless H(t)||) over the horizon by
/// globally adaptive composite Simpson. The returned value is within `tol`
/// (absolute) of the integral as judged by the Richardson error estimate.
/// Throws NonConvergence after 2^20 panels.
double norm_action(const HamiltonianSpec& spec, NormKind kind,
                   bool use_traceless, double tol);
double norm_action(const HamiltonianSpec& spec, NormKind kind,
                   bool use_traceless, double tol, TimeWindow window);

/// Panel budget of norm_action.
inline constexpr std::size_t kMaxQuadraturePanels = std::size_t{1} << 20;

}  // namespace normact
