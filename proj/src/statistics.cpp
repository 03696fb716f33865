#include "sigchar/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <variant>

#include "sigchar/errors.hpp"
#include "sigchar/rng.hpp"

namespace sigchar {

namespace {

constexpr std::size_t kChunk = 256;

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

// Runs fill(lo, hi, acc) on fixed chunks in parallel, then folds the chunk
// accumulators in index order.
template <class Acc, class Make, class Fill, class Merge>
Acc chunked_reduce(std::size_t n, Make make, Fill fill, Merge merge) {
  std::vector<Acc> parts(chunk_count(n));
  parallel_for(
      parts.size(),
      [&](std::size_t c) {
        Acc acc = make();
        fill(c * kChunk, std::min(n, (c + 1) * kChunk), acc);
        parts[c] = std::move(acc);
      },
      1);
  Acc total = make();
  for (auto &p : parts) merge(total, p);
  return total;
}

double stderr_from(double s1, double s2, std::size_t n) {
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  const double var = std::max(0.0, (s2 - s1 * s1 / nn) / (nn - 1.0));
  return std::sqrt(var / nn);
}

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

struct SampleMoments {
  std::vector<double> sum;
  std::vector<double> sumsq;
  // per level: sum ||X^k||, sum ||X^k||^2, sum ||X^k||^4
  std::vector<double> n1, n2, n4;
};

SampleMoments sample_moments(const SignatureEnsemble &ens) {
  const int depth = ens.depth();
  const std::size_t size = Tensor(ens.width(), depth).size();
  auto make = [&]() {
    SampleMoments m;
    m.sum.assign(size, 0.0);
    m.sumsq.assign(size, 0.0);
    m.n1.assign(static_cast<std::size_t>(depth) + 1, 0.0);
    m.n2 = m.n1;
    m.n4 = m.n1;
    return m;
  };
  auto fill = [&](std::size_t lo, std::size_t hi, SampleMoments &m) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Tensor x = ens.sample(i);
      auto d = x.data();
      for (std::size_t j = 0; j < size; ++j) {
        m.sum[j] += d[j];
        m.sumsq[j] += d[j] * d[j];
      }
      for (int k = 0; k <= depth; ++k) {
        const double v = level_norm(x, k);
        const auto kk = static_cast<std::size_t>(k);
        m.n1[kk] += v;
        m.n2[kk] += v * v;
        m.n4[kk] += v * v * v * v;
      }
    }
  };
  auto merge = [](SampleMoments &a, const SampleMoments &b) {
    for (std::size_t j = 0; j < a.sum.size(); ++j) {
      a.sum[j] += b.sum[j];
      a.sumsq[j] += b.sumsq[j];
    }
    for (std::size_t k = 0; k < a.n1.size(); ++k) {
      a.n1[k] += b.n1[k];
      a.n2[k] += b.n2[k];
      a.n4[k] += b.n4[k];
    }
  };
  return chunked_reduce<SampleMoments>(ens.size(), make, fill, merge);
}

ExpSigEstimate estimate_from(const SignatureEnsemble &ens, const SampleMoments &m) {
  ExpSigEstimate est;
  const std::size_t n = ens.size();
  est.count = n;
  est.mean = Tensor(ens.width(), ens.depth());
  est.stderr_coeff = Tensor(ens.width(), ens.depth());
  auto mean = est.mean.data();
  auto se = est.stderr_coeff.data();
  for (std::size_t j = 0; j < mean.size(); ++j) {
    mean[j] = m.sum[j] / static_cast<double>(n);
    se[j] = stderr_from(m.sum[j], m.sumsq[j], n);
  }
  for (int k = 0; k <= ens.depth(); ++k) {
    auto lvl = est.stderr_coeff.level(k);
    est.level_stderr.push_back(*std::max_element(lvl.begin(), lvl.end()));
  }
  return est;
}

void require_samples(const SignatureEnsemble &ens) {
  if (ens.empty()) throw DomainError("ensemble is empty");
}

// Smallest L with ||x^k|| <= L^k / k! on every stored level.
double factorial_radius(const Tensor &x) {
  double r = 0.0;
  for (int k = 1; k <= x.depth(); ++k) {
    const double v = level_norm(x, k);
    if (v > 0.0) r = std::max(r, std::exp((std::log(v) + log_factorial(k)) / k));
  }
  return r;
}

struct MatrixMoments {
  Eigen::MatrixXd re, im, re2, im2;
  double tail = 0.0;
};

} // namespace

ExpSigEstimate expected_signature(const SignatureEnsemble &ens) {
  require_samples(ens);
  return estimate_from(ens, sample_moments(ens));
}

RadiusDiagnostics radius_diagnostics(const SignatureEnsemble &ens) {
  require_samples(ens);
  const SampleMoments m = sample_moments(ens);
  const ExpSigEstimate est = estimate_from(ens, m);
  const std::size_t n = ens.size();
  RadiusDiagnostics out;
  const int depth = ens.depth();
  out.root_r1.assign(static_cast<std::size_t>(depth) + 1, 0.0);
  out.root_r2 = out.root_r1;
  std::vector<double> xs, ys;
  for (int k = 0; k <= depth; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double r1 = m.n1[kk] / static_cast<double>(n);
    const double se = stderr_from(m.n1[kk], m.n2[kk], n);
    const double r2 = level_norm(est.mean, k);
    out.seq_r1.push_back(r1);
    out.seq_r1_stderr.push_back(se);
    out.seq_r2.push_back(r2);
    if (k >= 1) {
      out.root_r1[kk] = std::pow(r1, 1.0 / k);
      out.root_r2[kk] = std::pow(r2, 1.0 / k);
      if (r1 > 0.0) {
        xs.push_back(std::log(static_cast<double>(k)));
        ys.push_back((std::log(r1) + log_factorial(k)) / k);
      }
    }
    // Jensen ordering, with a relative rounding allowance for exact equality.
    if (r2 > r1 + 3.0 * se + 1e-12 * std::max(1.0, r1)) out.jensen_ok = false;
  }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.decay_slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  out.classification = out.decay_slope <= kFactorialSlopeThreshold ? "factorial-type" : "geometric-only";
  return out;
}

RadiiCheckReport radii_inequality_check(const SignatureEnsemble &ens, int max_k) {
  require_samples(ens);
  if (max_k == 0) max_k = ens.depth() / 2;
  if (max_k < 1 || 2 * max_k > ens.depth()) throw DomainError("radii check needs depth >= 2k");
  const SampleMoments m = sample_moments(ens);
  const ExpSigEstimate est = estimate_from(ens, m);
  const std::size_t n = ens.size();
  RadiiCheckReport out;
  for (int k = 1; k <= max_k; ++k) {
    RadiiCheckRow row;
    row.k = k;
    const auto kk = static_cast<std::size_t>(k);
    row.lhs = m.n2[kk] / static_cast<double>(n);
    row.lhs_stderr = stderr_from(m.n2[kk], m.n4[kk], n);
    const double factor = std::pow(static_cast<double>(ens.width()), k) * std::pow(4.0, k);
    row.rhs = factor * level_norm(est.mean, 2 * k);
    row.rhs_stderr = factor * level_norm(est.stderr_coeff, 2 * k);
    const double slack = 3.0 * std::hypot(row.lhs_stderr, row.rhs_stderr) + 1e-12 * std::max(1.0, row.rhs);
    row.violated = row.lhs > row.rhs + slack;
    if (row.violated) out.ok = false;
    out.rows.push_back(row);
  }
  return out;
}

SquareBoundReport square_bound_check(const SignatureEnsemble &ens, int max_len) {
  require_samples(ens);
  if (max_len < 1 || 2 * max_len > ens.depth()) throw DomainError("square bound check needs depth >= 2 |f|");
  std::vector<Word> words;
  for (int len = 1; len <= max_len; ++len) {
    for (std::size_t i = 0; i < word_count(ens.width(), len); ++i) words.push_back(word_from_index(ens.width(), len, i));
  }
  const std::size_t nw = words.size();
  struct Acc {
    std::vector<double> abs1, abs2, shuf;
  };
  auto make = [&]() { return Acc{std::vector<double>(nw, 0.0), std::vector<double>(nw, 0.0), std::vector<double>(nw, 0.0)}; };
  auto fill = [&](std::size_t lo, std::size_t hi, Acc &a) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Tensor x = ens.sample(i);
      for (std::size_t w = 0; w < nw; ++w) {
        const double v = std::abs(x[words[w]]);
        a.abs1[w] += v;
        a.abs2[w] += v * v;
        a.shuf[w] += shuffle_pair(words[w], words[w], x);
      }
    }
  };
  auto merge = [](Acc &a, const Acc &b) {
    for (std::size_t w = 0; w < a.abs1.size(); ++w) {
      a.abs1[w] += b.abs1[w];
      a.abs2[w] += b.abs2[w];
      a.shuf[w] += b.shuf[w];
    }
  };
  const Acc acc = chunked_reduce<Acc>(ens.size(), make, fill, merge);
  const std::size_t n = ens.size();
  SquareBoundReport out;
  for (std::size_t w = 0; w < nw; ++w) {
    SquareBoundRow row;
    row.word = words[w];
    row.mean_abs = acc.abs1[w] / static_cast<double>(n);
    row.mean_abs_stderr = stderr_from(acc.abs1[w], acc.abs2[w], n);
    row.root_mean_shuffle = std::sqrt(std::max(0.0, acc.shuf[w] / static_cast<double>(n)));
    row.violated = row.mean_abs > row.root_mean_shuffle + 3.0 * row.mean_abs_stderr + 1e-12 * std::max(1.0, row.mean_abs);
    if (row.violated) out.ok = false;
    out.rows.push_back(row);
  }
  return out;
}

CharFnEstimate char_fn(const SignatureEnsemble &ens, const LinearRep &rep) {
  require_samples(ens);
  if (rep.width() != ens.width()) throw DimensionError("char_fn: representation width does not match ensemble");
  const int h = rep.dim();
  const bool exact = ens.exact();
  std::vector<ComplexMatrix> lie_images;
  for (const auto &f : ens.lie_generators()) lie_images.push_back(evaluate_truncated(rep, f));
  const double rep_norm = exact ? 0.0 : rep.norm();

  auto make = [&]() {
    MatrixMoments m;
    m.re = Eigen::MatrixXd::Zero(h, h);
    m.im = m.re;
    m.re2 = m.re;
    m.im2 = m.re;
    return m;
  };
  auto fill = [&](std::size_t lo, std::size_t hi, MatrixMoments &m) {
    ExpCache cache(rep);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto &src = ens.source(i);
      ComplexMatrix u;
      if (const auto *p = std::get_if<PiecewiseLinearPath>(&src)) {
        u = cache.develop(*p);
      } else if (const auto *s = std::get_if<LieSample>(&src)) {
        u = mat_exp(s->scale * lie_images[static_cast<std::size_t>(s->generator)]);
      } else {
        const Tensor &x = std::get<Tensor>(src);
        u = evaluate_truncated(rep, x);
        m.tail += truncation_tail_bound(rep_norm, factorial_radius(x), x.depth());
      }
      const Eigen::MatrixXd re = u.real();
      const Eigen::MatrixXd im = u.imag();
      m.re += re;
      m.im += im;
      m.re2 += re.cwiseProduct(re);
      m.im2 += im.cwiseProduct(im);
    }
  };
  auto merge = [](MatrixMoments &a, const MatrixMoments &b) {
    a.re += b.re;
    a.im += b.im;
    a.re2 += b.re2;
    a.im2 += b.im2;
    a.tail += b.tail;
  };
  const MatrixMoments m = chunked_reduce<MatrixMoments>(ens.size(), make, fill, merge);

  const std::size_t n = ens.size();
  const double nn = static_cast<double>(n);
  CharFnEstimate out;
  out.count = n;
  out.exact = exact;
  out.tail_bound = m.tail / nn;
  out.mean = ComplexMatrix(h, h);
  out.stderr_re = Eigen::MatrixXd(h, h);
  out.stderr_im = Eigen::MatrixXd(h, h);
  out.stderr_abs = Eigen::MatrixXd(h, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < h; ++c) {
      out.mean(r, c) = Complex(m.re(r, c) / nn, m.im(r, c) / nn);
      out.stderr_re(r, c) = stderr_from(m.re(r, c), m.re2(r, c), n);
      out.stderr_im(r, c) = stderr_from(m.im(r, c), m.im2(r, c), n);
      out.stderr_abs(r, c) = std::hypot(out.stderr_re(r, c), out.stderr_im(r, c));
    }
  }
  return out;
}

ExpSigCharFn char_fn_from_expsig(const ExpSigEstimate &est, const LinearRep &rep, double lambda) {
  ExpSigCharFn out;
  out.value = evaluate_truncated(rep.scaled(lambda), est.mean);
  out.tail_bound = truncation_tail_bound(std::abs(lambda) * rep.norm(), factorial_radius(est.mean), est.mean.depth());
  if (out.tail_bound > 1e-3) {
    out.warning = "lambda ||M|| is outside the regime where the truncated series is reliable (tail bound " +
                  std::to_string(out.tail_bound) + ")";
  }
  return out;
}

PhiCurve phi_lambda_curve(const SignatureEnsemble &ens, const LinearRep &rep, const std::vector<double> &lambdas) {
  PhiCurve out;
  out.lambdas = lambdas;
  for (double l : lambdas) out.values.push_back(char_fn(ens.dilated(l), rep));
  const std::size_t n = lambdas.size();
  out.second_difference.assign(n, 0.0);
  if (n >= 3) {
    const double spacing = (lambdas.back() - lambdas.front()) / static_cast<double>(n - 1);
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const ComplexMatrix d2 = out.values[j + 1].mean - 2.0 * out.values[j].mean + out.values[j - 1].mean;
      out.second_difference[j] = max_abs(d2) / (spacing * spacing);
      out.max_second_difference = std::max(out.max_second_difference, out.second_difference[j]);
    }
  }
  return out;
}

DistanceReport char_fn_distance_report(const SignatureEnsemble &a, const SignatureEnsemble &b,
                                       const std::vector<LinearRep> &reps) {
  if (reps.empty()) throw DomainError("char_fn_distance needs at least one representation");
  if (a.width() != b.width()) throw DimensionError("char_fn_distance: ensembles differ in width");
  DistanceReport out;
  for (const auto &rep : reps) {
    const CharFnEstimate ea = char_fn(a, rep);
    const CharFnEstimate eb = char_fn(b, rep);
    const double d = operator_norm(ea.mean - eb.mean);
    const Eigen::MatrixXd err = 3.0 * (ea.stderr_abs.array().square() + eb.stderr_abs.array().square()).sqrt().matrix();
    out.per_rep.push_back(d);
    out.per_rep_error.push_back(operator_norm(err.cast<Complex>()));
    out.value = std::max(out.value, d);
  }
  return out;
}

double char_fn_distance(const SignatureEnsemble &a, const SignatureEnsemble &b, const std::vector<LinearRep> &reps) {
  return char_fn_distance_report(a, b, reps).value;
}

TailReport tail_diagnostic(const std::vector<PiecewiseLinearPath> &paths, double p, double alpha,
                           const PVariationOptions &opts) {
  if (paths.size() < 10) throw DomainError("tail_diagnostic needs at least 10 samples");
  if (!(p >= 1.0)) throw DomainError("tail_diagnostic requires p >= 1");
  TailReport out;
  out.p = p;
  out.alpha = alpha;
  out.counts.assign(paths.size(), 0);
  parallel_for(paths.size(), [&](std::size_t i) { out.counts[i] = greedy_partition(paths[i], alpha, p, opts).count + 1; }, 8);

  std::vector<std::size_t> sorted = out.counts;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    out.support.push_back(sorted[i]);
    out.survival.push_back(static_cast<double>(sorted.size() - j) / n);
    i = j;
  }
  out.interpretation =
      "Exponential decay of the survival function of N+1 is consistent with exponential tails of the "
      "factorisation length, the hypothesis under which the characteristic function extends analytically. "
      "This is a finite-sample diagnostic and certifies nothing.";
  if (out.support.size() == 1) {
    out.label = "degenerate";
    out.slope = -std::numeric_limits<double>::infinity();
    return out;
  }

  const double median = static_cast<double>(sorted[sorted.size() / 2]);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < out.support.size(); ++i) {
    if (static_cast<double>(out.support[i]) >= median && out.survival[i] > 0.0) {
      xs.push_back(static_cast<double>(out.support[i]));
      ys.push_back(std::log(out.survival[i]));
    }
  }
  out.fit_points = xs.size();
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
      syy += (ys[i] - my) * (ys[i] - my);
    }
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    out.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  }
  if (xs.size() >= 3 && out.slope < 0.0 && out.r_squared >= 0.9) {
    out.label = "exponential-tail-consistent";
  } else if (xs.size() < 3) {
    out.label = "bounded-support";
  } else {
    out.label = "inconclusive";
  }
  return out;
}

MomentsTable method_of_moments_experiment(const std::vector<SignatureEnsemble> &family,
                                          const std::vector<LinearRep> &reps) {
  if (family.size() < 2) throw DomainError("method of moments needs at least two models");
  MomentsTable out;
  for (const auto &ens : family) out.estimates.push_back(expected_signature(ens));
  for (std::size_t i = 0; i + 1 < family.size(); ++i) {
    MomentsRow row;
    row.index = i;
    const Tensor &a = out.estimates[i].mean;
    const Tensor &b = out.estimates[i + 1].mean;
    if (!a.same_shape(b)) throw DimensionError("method of moments: models differ in width or depth");
    row.expsig_diff = max_abs_diff(a, b);
    for (int k = 0; k <= a.depth(); ++k) row.expsig_level_diff.push_back(level_norm(a - b, k));
    const DistanceReport d = char_fn_distance_report(family[i], family[i + 1], reps);
    row.distance = d.value;
    row.distance_per_rep = d.per_rep;
    out.rows.push_back(row);
  }
  out.distance_decreasing = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (!(out.rows[i].distance < out.rows[i - 1].distance)) out.distance_decreasing = false;
  }
  return out;
}

std::vector<LinearRep> random_rep_panel(int width, std::size_t count, std::uint64_t seed, const std::vector<int> &dims,
                                        double scale) {
  if (dims.empty()) throw DomainError("random_rep_panel needs at least one dimension");
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<LinearRep> panel;
  for (std::size_t r = 0; r < count; ++r) {
    const int h = dims[r % dims.size()];
    std::vector<ComplexMatrix> gens;
    for (int i = 0; i < width; ++i) {
      ComplexMatrix g(h, h);
      for (int a = 0; a < h; ++a) {
        for (int b = 0; b < h; ++b) {
          const double re = normal(rng);
          const double im = normal(rng);
          g(a, b) = Complex(re, im);
        }
      }
      gens.push_back(0.5 * (g - g.adjoint()) * (scale / std::sqrt(static_cast<double>(h))));
    }
    panel.emplace_back(std::move(gens));
  }
  return panel;
}

} // namespace sigchar
