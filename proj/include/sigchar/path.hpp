#pragma once

#include <span>
#include <vector>

namespace sigchar {

/// Piecewise-linear path in R^d: breakpoints joined by straight segments,
/// parametrised by strictly increasing times. A single breakpoint is a
/// constant path on a degenerate interval.
class PiecewiseLinearPath {
public:
  PiecewiseLinearPath() = default;

  // points is row-major (num_points x width); times.size() == num_points.
  PiecewiseLinearPath(int width, std::vector<double> times, std::vector<double> points);

  // Unit-spaced times 0, 1, 2, ... through the given points.
  static PiecewiseLinearPath from_points(int width, std::vector<double> points);
  // Starts at the origin at time 0 and adds one increment per unit of time.
  static PiecewiseLinearPath from_increments(int width, std::span<const double> increments);

  int width() const noexcept { return width_; }
  std::size_t num_points() const noexcept { return times_.size(); }
  std::size_t num_segments() const noexcept { return times_.empty() ? 0 : times_.size() - 1; }

  const std::vector<double> &times() const noexcept { return times_; }
  const std::vector<double> &points() const noexcept { return points_; }
  std::span<const double> point(std::size_t i) const;

  double start_time() const { return times_.front(); }
  double end_time() const { return times_.back(); }

  // Position at time t (linear interpolation); t must lie in the domain.
  std::vector<double> at(double t) const;

  // x_{j+1} - x_j.
  std::vector<double> increment(std::size_t segment) const;

  // Total l1 length (1-variation) on [s, t].
  double length(double s, double t) const;
  double length() const { return length(start_time(), end_time()); }

  // Same times, increments multiplied by lambda (start point kept).
  PiecewiseLinearPath scaled(double lambda) const;

  friend bool operator==(const PiecewiseLinearPath &, const PiecewiseLinearPath &) = default;

private:
  int width_ = 0;
  std::vector<double> times_;
  std::vector<double> points_;
};

// Time-reversal: breakpoints in reverse order, times reflected so the domain
// is unchanged.
PiecewiseLinearPath reverse(const PiecewiseLinearPath &path);

// q translated to start where p ends and run after it in time.
PiecewiseLinearPath concatenate(const PiecewiseLinearPath &p, const PiecewiseLinearPath &q);

} // namespace sigchar
