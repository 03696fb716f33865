#include "sigchar/signature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sigchar/errors.hpp"

namespace sigchar {

namespace {

constexpr double kTimeTolerance = 1e-10;

double gamma_weight(int k, double p) { return std::tgamma(static_cast<double>(k) / p + 1.0); }

std::vector<int> resolve_levels(double p, int depth, const PVariationOptions &opts) {
  std::vector<int> levels = opts.levels;
  const int top = static_cast<int>(std::floor(p));
  if (levels.empty()) {
    for (int k = 1; k <= top; ++k) levels.push_back(k);
  }
  for (int k : levels) {
    if (k < 1 || k > depth) throw RangeError("p-variation level outside 1..depth");
  }
  return levels;
}

} // namespace

Tensor segment_signature(std::span<const double> v, int depth) {
  Tensor out = Tensor::unit(static_cast<int>(v.size()), depth);
  // level k = level_{k-1} (x) v / k
  for (int k = 1; k <= depth; ++k) {
    auto prev = out.level(k - 1);
    auto cur = out.level(k);
    const double inv = 1.0 / static_cast<double>(k);
    for (std::size_t a = 0; a < prev.size(); ++a) {
      const double c = prev[a] * inv;
      for (std::size_t b = 0; b < v.size(); ++b) cur[a * v.size() + b] = c * v[b];
    }
  }
  for (double c : out.data()) {
    if (!std::isfinite(c)) throw NumericError("segment signature overflow");
  }
  return out;
}

Tensor signature(const PiecewiseLinearPath &path, int depth, double s, double t) {
  if (s > t) throw RangeError("signature: s > t");
  if (s < path.start_time() || t > path.end_time()) throw RangeError("signature: interval outside path domain");
  Tensor acc = Tensor::unit(path.width(), depth);
  const auto &times = path.times();
  for (std::size_t j = 0; j < path.num_segments(); ++j) {
    const double lo = std::max(s, times[j]);
    const double hi = std::min(t, times[j + 1]);
    if (hi <= lo) continue;
    std::vector<double> v = path.increment(j);
    const double frac = (hi - lo) / (times[j + 1] - times[j]);
    if (frac != 1.0) {
      for (double &c : v) c *= frac;
    }
    acc = mul(acc, segment_signature(v, depth));
  }
  return acc;
}

Tensor signature(const PiecewiseLinearPath &path, int depth) {
  return signature(path, depth, path.start_time(), path.end_time());
}

double PVariation::control() const { return std::pow(value, p); }

PVariation p_variation(const PiecewiseLinearPath &path, double p, int depth, double s, double t,
                       const PVariationOptions &opts) {
  if (!(p >= 1.0)) throw DomainError("p-variation requires p >= 1");
  if (depth < static_cast<int>(std::floor(p))) throw DomainError("p-variation requires depth >= floor(p)");
  if (s > t || s < path.start_time() || t > path.end_time()) throw RangeError("p_variation: interval outside path domain");
  const std::vector<int> levels = resolve_levels(p, depth, opts);
  const int top = levels.empty() ? 0 : *std::max_element(levels.begin(), levels.end());

  PVariation out;
  out.p = p;
  out.per_level.assign(static_cast<std::size_t>(depth) + 1, 0.0);
  if (s == t || levels.empty()) return out;

  // Candidate partition points: s, interior breakpoints, t.
  std::vector<double> pts{s};
  for (double tj : path.times()) {
    if (tj > s && tj < t) pts.push_back(tj);
  }
  pts.push_back(t);
  const std::size_t m = pts.size();

  // norms[k][i*m + j] = ||x^k_{pts_i, pts_j}|| for i < j.
  std::vector<std::vector<double>> norms(static_cast<std::size_t>(top) + 1, std::vector<double>(m * m, 0.0));
  const bool level_one_only = (top == 1);
  if (level_one_only) {
    std::vector<std::vector<double>> pos(m);
    for (std::size_t i = 0; i < m; ++i) pos[i] = path.at(pts[i]);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        double n1 = 0.0;
        for (std::size_t c = 0; c < pos[i].size(); ++c) n1 += std::abs(pos[j][c] - pos[i][c]);
        norms[1][i * m + j] = n1;
      }
    }
  } else {
    // Segment signatures between consecutive candidate points, then running
    // products from each start point.
    std::vector<Tensor> pieces;
    pieces.reserve(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) pieces.push_back(signature(path, top, pts[i], pts[i + 1]));
    for (std::size_t i = 0; i < m; ++i) {
      Tensor acc = Tensor::unit(path.width(), top);
      for (std::size_t j = i + 1; j < m; ++j) {
        acc = mul(acc, pieces[j - 1]);
        for (int k : levels) norms[static_cast<std::size_t>(k)][i * m + j] = level_norm(acc, k);
      }
    }
  }

  for (int k : levels) {
    const double weight = gamma_weight(k, p) * opts.beta;
    const double expo = p / static_cast<double>(k);
    std::vector<double> best(m, 0.0);
    for (std::size_t j = 1; j < m; ++j) {
      double b = 0.0;
      for (std::size_t i = 0; i < j; ++i) {
        const double c = std::pow(weight * norms[static_cast<std::size_t>(k)][i * m + j], expo);
        b = std::max(b, best[i] + c);
      }
      best[j] = b;
    }
    const double term = std::pow(best[m - 1], 1.0 / p);
    out.per_level[static_cast<std::size_t>(k)] = term;
    out.value += term;
  }
  return out;
}

PVariation p_variation(const PiecewiseLinearPath &path, double p, const PVariationOptions &opts) {
  const int depth = std::max(static_cast<int>(std::floor(p)),
                             opts.levels.empty() ? 1 : *std::max_element(opts.levels.begin(), opts.levels.end()));
  return p_variation(path, p, depth, path.start_time(), path.end_time(), opts);
}

double control(const PiecewiseLinearPath &path, double p, double s, double t, const PVariationOptions &opts) {
  const int depth = std::max(static_cast<int>(std::floor(p)),
                             opts.levels.empty() ? 1 : *std::max_element(opts.levels.begin(), opts.levels.end()));
  return p_variation(path, p, depth, s, t, opts).control();
}

GreedyPartition greedy_partition(const PiecewiseLinearPath &path, double alpha, double p,
                                 const PVariationOptions &opts) {
  if (!(alpha > 0.0)) throw DomainError("greedy partition requires alpha > 0");
  if (!(p >= 1.0)) throw DomainError("greedy partition requires p >= 1");
  GreedyPartition gp;
  gp.alpha = alpha;
  gp.p = p;
  const double t0 = path.start_time();
  const double T = path.end_time();
  gp.taus.push_back(t0);
  if (T == t0) return gp;
  const double tol = kTimeTolerance * (T - t0);

  double tau = t0;
  while (tau < T) {
    double next = T;
    if (control(path, p, tau, T, opts) > alpha) {
      double lo = tau;
      double hi = T;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (control(path, p, tau, mid, opts) >= alpha) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      next = (T - hi <= tol) ? T : hi;
    }
    gp.taus.push_back(next);
    tau = next;
  }
  // taus = (tau_0, ..., tau_{N+1} = T); N counts the taus below T after tau_0.
  gp.count = gp.taus.size() - 2;
  return gp;
}

std::size_t n_p_upper_bound(const PiecewiseLinearPath &path, double p, const PVariationOptions &opts) {
  return greedy_partition(path, 1.0, p, opts).count + 1;
}

double bp_weight(const Tensor &g, double p, double beta) {
  if (!(p >= 1.0)) throw DomainError("bp_weight requires p >= 1");
  double w = 0.0;
  for (int k = 0; k <= g.depth(); ++k) w = std::max(w, beta * gamma_weight(k, p) * level_norm(g, k));
  return w;
}

std::vector<Tensor> greedy_factorization(const PiecewiseLinearPath &path, double p, int depth,
                                         const PVariationOptions &opts) {
  const GreedyPartition gp = greedy_partition(path, 1.0, p, opts);
  std::vector<Tensor> blocks;
  for (std::size_t j = 0; j + 1 < gp.taus.size(); ++j) {
    blocks.push_back(signature(path, depth, gp.taus[j], gp.taus[j + 1]));
  }
  if (blocks.empty()) blocks.push_back(Tensor::unit(path.width(), depth));
  return blocks;
}

} // namespace sigchar
