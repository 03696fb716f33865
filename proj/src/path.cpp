#include "sigchar/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sigchar/errors.hpp"

namespace sigchar {

PiecewiseLinearPath::PiecewiseLinearPath(int width, std::vector<double> times, std::vector<double> points)
    : width_(width), times_(std::move(times)), points_(std::move(points)) {
  if (width_ < 1) throw DomainError("path width must be positive");
  if (times_.empty()) throw DomainError("path needs at least one breakpoint");
  if (points_.size() != times_.size() * static_cast<std::size_t>(width_)) {
    throw DimensionError("path has " + std::to_string(points_.size()) + " coordinates, expected " +
                         std::to_string(times_.size() * static_cast<std::size_t>(width_)));
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw NumericError("path time is not finite");
    if (i > 0 && !(times_[i] > times_[i - 1])) throw ValidationError("path times must be strictly increasing");
  }
  for (double c : points_) {
    if (!std::isfinite(c)) throw NumericError("path coordinate is not finite");
  }
}

PiecewiseLinearPath PiecewiseLinearPath::from_points(int width, std::vector<double> points) {
  if (width < 1) throw DomainError("path width must be positive");
  const std::size_t n = points.size() / static_cast<std::size_t>(width);
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) times[i] = static_cast<double>(i);
  return PiecewiseLinearPath(width, std::move(times), std::move(points));
}

PiecewiseLinearPath PiecewiseLinearPath::from_increments(int width, std::span<const double> increments) {
  if (width < 1) throw DomainError("path width must be positive");
  if (increments.size() % static_cast<std::size_t>(width) != 0) throw DimensionError("increments not a multiple of width");
  const std::size_t steps = increments.size() / static_cast<std::size_t>(width);
  std::vector<double> points((steps + 1) * static_cast<std::size_t>(width), 0.0);
  for (std::size_t j = 0; j < steps; ++j) {
    for (int i = 0; i < width; ++i) {
      const std::size_t w = static_cast<std::size_t>(width);
      points[(j + 1) * w + static_cast<std::size_t>(i)] = points[j * w + static_cast<std::size_t>(i)] + increments[j * w + static_cast<std::size_t>(i)];
    }
  }
  return from_points(width, std::move(points));
}

std::span<const double> PiecewiseLinearPath::point(std::size_t i) const {
  if (i >= times_.size()) throw RangeError("breakpoint index out of range");
  return {points_.data() + i * static_cast<std::size_t>(width_), static_cast<std::size_t>(width_)};
}

std::vector<double> PiecewiseLinearPath::at(double t) const {
  if (t < start_time() || t > end_time()) throw RangeError("time outside path domain");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.end()) {
    auto p = point(times_.size() - 1);
    return {p.begin(), p.end()};
  }
  const std::size_t j = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double frac = (t - times_[j]) / (times_[j + 1] - times_[j]);
  auto a = point(j);
  auto b = point(j + 1);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + frac * (b[i] - a[i]);
  return out;
}

std::vector<double> PiecewiseLinearPath::increment(std::size_t segment) const {
  if (segment >= num_segments()) throw RangeError("segment index out of range");
  auto a = point(segment);
  auto b = point(segment + 1);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = b[i] - a[i];
  return out;
}

double PiecewiseLinearPath::length(double s, double t) const {
  if (s > t || s < start_time() || t > end_time()) throw RangeError("interval outside path domain");
  double total = 0.0;
  for (std::size_t j = 0; j < num_segments(); ++j) {
    const double lo = std::max(s, times_[j]);
    const double hi = std::min(t, times_[j + 1]);
    if (hi <= lo) continue;
    const double frac = (hi - lo) / (times_[j + 1] - times_[j]);
    double seg = 0.0;
    for (double c : increment(j)) seg += std::abs(c);
    total += frac * seg;
  }
  return total;
}

PiecewiseLinearPath PiecewiseLinearPath::scaled(double lambda) const {
  std::vector<double> pts = points_;
  const std::size_t w = static_cast<std::size_t>(width_);
  for (std::size_t j = 1; j < times_.size(); ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      pts[j * w + i] = pts[i] + lambda * (points_[j * w + i] - points_[i]);
    }
  }
  return PiecewiseLinearPath(width_, times_, std::move(pts));
}

PiecewiseLinearPath reverse(const PiecewiseLinearPath &path) {
  const std::size_t n = path.num_points();
  const std::size_t w = static_cast<std::size_t>(path.width());
  const double a = path.start_time();
  const double b = path.end_time();
  std::vector<double> times(n);
  std::vector<double> pts(n * w);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = n - 1 - i;
    times[i] = a + b - path.times()[src];
    auto p = path.point(src);
    std::copy(p.begin(), p.end(), pts.begin() + static_cast<std::ptrdiff_t>(i * w));
  }
  times.front() = a;
  times.back() = b;
  return PiecewiseLinearPath(path.width(), std::move(times), std::move(pts));
}

PiecewiseLinearPath concatenate(const PiecewiseLinearPath &p, const PiecewiseLinearPath &q) {
  if (p.width() != q.width()) throw DimensionError("concatenate: width mismatch");
  const std::size_t w = static_cast<std::size_t>(p.width());
  std::vector<double> times = p.times();
  std::vector<double> pts = p.points();
  auto end = p.point(p.num_points() - 1);
  auto q0 = q.point(0);
  const double shift = p.end_time() - q.start_time();
  for (std::size_t j = 1; j < q.num_points(); ++j) {
    times.push_back(q.times()[j] + shift);
    auto x = q.point(j);
    for (std::size_t i = 0; i < w; ++i) pts.push_back(end[i] + x[i] - q0[i]);
  }
  return PiecewiseLinearPath(p.width(), std::move(times), std::move(pts));
}

} // namespace sigchar
