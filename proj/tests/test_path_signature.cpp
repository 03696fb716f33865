#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "sigchar/errors.hpp"
#include "sigchar/hopf.hpp"
#include "sigchar/signature.hpp"

using namespace sigchar;

namespace {

PiecewiseLinearPath l_path() { return PiecewiseLinearPath(2, {0.0, 1.0, 2.0}, {0.0, 0.0, 1.0, 0.0, 1.0, 1.0}); }

PiecewiseLinearPath random_path(std::mt19937_64 &rng, int width, int segments) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> dt(0.1, 1.0);
  std::vector<double> times{0.0}, pts;
  for (int i = 0; i < width; ++i) pts.push_back(g(rng));
  for (int j = 0; j < segments; ++j) {
    times.push_back(times.back() + dt(rng));
    for (int i = 0; i < width; ++i) pts.push_back(g(rng));
  }
  return PiecewiseLinearPath(width, times, pts);
}

double fact(int k) { return std::tgamma(k + 1.0); }

// Iterated integrals of a piecewise-linear path up to level 3, from the
// closed form sum over ordered segment tuples.
double iterated_integral(const PiecewiseLinearPath &p, const Word &w) {
  const std::size_t m = p.num_segments();
  std::vector<std::vector<double>> inc;
  for (std::size_t j = 0; j < m; ++j) inc.push_back(p.increment(j));
  auto d = [&](std::size_t seg, int letter) { return inc[seg][static_cast<std::size_t>(letter)]; };
  if (w.size() == 1) {
    double s = 0.0;
    for (std::size_t a = 0; a < m; ++a) s += d(a, w[0]);
    return s;
  }
  if (w.size() == 2) {
    double s = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) s += d(a, w[0]) * d(b, w[1]);
      s += d(a, w[0]) * d(a, w[1]) / 2.0;
    }
    return s;
  }
  double s = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      for (std::size_t c = b; c < m; ++c) {
        const double prod = d(a, w[0]) * d(b, w[1]) * d(c, w[2]);
        if (a < b && b < c) s += prod;
        else if (a == b && b < c) s += prod / 2.0;
        else if (a < b && b == c) s += prod / 2.0;
        else if (a == b && b == c) s += prod / 6.0;
      }
    }
  }
  return s;
}

// Brute force p-variation of a 1-d path over all subsets of breakpoints.
double brute_pvar_level1(const std::vector<double> &x, double p) {
  const std::size_t inner = x.size() - 2;
  const double w = std::tgamma(1.0 / p + 1.0);
  double best = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << inner); ++mask) {
    std::size_t prev = 0;
    double s = 0.0;
    for (std::size_t j = 1; j < x.size(); ++j) {
      if (j < x.size() - 1 && !((mask >> (j - 1)) & 1)) continue;
      s += std::pow(w * std::abs(x[j] - x[prev]), p);
      prev = j;
    }
    best = std::max(best, s);
  }
  return std::pow(best, 1.0 / p);
}

} // namespace

TEST_CASE("path validation") {
  CHECK_THROWS_AS(PiecewiseLinearPath(2, {0.0, 0.0}, {0, 0, 1, 1}), ValidationError);
  CHECK_THROWS_AS(PiecewiseLinearPath(2, {0.0, 1.0}, {0, 0, 1}), DimensionError);
  CHECK_THROWS_AS(PiecewiseLinearPath(1, {0.0, 1.0}, {0, INFINITY}), NumericError);
  const auto p = l_path();
  CHECK(p.at(0.5) == std::vector<double>{0.5, 0.0});
  CHECK(p.at(1.5) == std::vector<double>{1.0, 0.5});
  CHECK(p.length() == 2.0);
  CHECK(p.length(0.5, 1.5) == 1.0);
  CHECK_THROWS_AS(p.at(2.5), RangeError);
}

TEST_CASE("segment_signature") {
  CHECK(segment_signature(std::vector<double>{0.0, 0.0}, 4) == Tensor::unit(2, 4));
  const double a = -1.3;
  const Tensor s = segment_signature(std::vector<double>{a}, 8);
  for (int k = 0; k <= 8; ++k) CHECK(s.level(k)[0] == doctest::Approx(std::pow(a, k) / fact(k)).epsilon(1e-14));
  const Tensor t = segment_signature(std::vector<double>{1.0, 1.0}, 2);
  for (double c : t.level(2)) CHECK(c == 0.5);
  const std::vector<double> v{0.4, -0.2, 1.1};
  CHECK(max_abs_diff(segment_signature(v, 5), exp(Tensor::vector(5, v))) <= 1e-15);
  CHECK(is_group_like(segment_signature(v, 5)).group_like);
}

TEST_CASE("signature of the L-path") {
  const Tensor s = signature(l_path(), 2);
  CHECK(s.level(1)[0] == 1.0);
  CHECK(s.level(1)[1] == 1.0);
  CHECK(s[parse_word("11")] == 0.5);
  CHECK(s[parse_word("12")] == 1.0);
  CHECK(s[parse_word("21")] == 0.0);
  CHECK(s[parse_word("22")] == 0.5);
}

TEST_CASE("signature matches iterated integrals through level 3") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_path(rng, 2, 1 + t % 7);
    const Tensor s = signature(p, 3);
    for (int k = 1; k <= 3; ++k) {
      for (std::size_t i = 0; i < word_count(2, k); ++i) {
        const Word w = word_from_index(2, k, i);
        CHECK(s[w] == doctest::Approx(iterated_integral(p, w)).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("signature on sub-intervals") {
  const auto p = l_path();
  CHECK(signature(p, 4, 1.3, 1.3) == Tensor::unit(2, 4));
  CHECK_THROWS_AS(signature(p, 3, 1.5, 1.0), RangeError);
  CHECK_THROWS_AS(signature(p, 3, -0.1, 1.0), RangeError);
  CHECK_THROWS_AS(signature(p, 3, 0.0, 2.1), RangeError);
  // half of the first segment then the whole second one
  const Tensor s = signature(p, 3, 0.5, 2.0);
  const Tensor expect = mul(exp(Tensor::letter(2, 3, 0, 0.5)), exp(Tensor::letter(2, 3, 1)));
  CHECK(max_abs_diff(s, expect) <= 1e-15);
}

TEST_CASE("collinear breakpoints do not change the signature") {
  const PiecewiseLinearPath a(2, {0.0, 1.0}, {0.0, 0.0, 2.0, -1.0});
  const PiecewiseLinearPath b(2, {0.0, 0.2, 0.7, 1.0}, {0.0, 0.0, 0.4, -0.2, 1.4, -0.7, 2.0, -1.0});
  CHECK(max_abs_diff(signature(a, 6), signature(b, 6)) <= 1e-14);
}

TEST_CASE("Chen identity, group-likeness and factorial decay on random paths") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_path(rng, 1 + t % 3, 1 + t % 20);
    const double T0 = p.start_time(), T1 = p.end_time();
    double s = T0 + (T1 - T0) * u(rng), tm = T0 + (T1 - T0) * u(rng), e = T0 + (T1 - T0) * u(rng);
    if (s > tm) std::swap(s, tm);
    if (tm > e) std::swap(tm, e);
    if (s > tm) std::swap(s, tm);
    const Tensor whole = signature(p, 6, s, e);
    CHECK(max_abs_diff(whole, mul(signature(p, 6, s, tm), signature(p, 6, tm, e))) <= 1e-11);
    const Tensor full = signature(p, 6);
    CHECK(is_group_like(full, 1e-10).group_like);
    const double len = p.length();
    for (int k = 1; k <= 6; ++k) CHECK(level_norm(full, k) <= std::pow(len, k) / fact(k) * (1.0 + 1e-12));
  }
}

TEST_CASE("reverse") {
  const PiecewiseLinearPath seg(2, {0.0, 1.0}, {0.0, 0.0, 1.0, 2.0});
  const auto r = reverse(seg);
  CHECK(r.increment(0) == std::vector<double>{-1.0, -2.0});
  const auto l = l_path();
  CHECK(max_abs_diff(mul(signature(l, 5), signature(reverse(l), 5)), Tensor::unit(2, 5)) <= 1e-15);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_path(rng, 3, 1 + t % 10);
    const auto rp = reverse(p);
    CHECK(rp.start_time() == p.start_time());
    CHECK(rp.end_time() == p.end_time());
    const auto rr = reverse(rp);
    CHECK(rr.points() == p.points());
    for (std::size_t i = 0; i < p.num_points(); ++i) CHECK(rr.times()[i] == doctest::Approx(p.times()[i]).epsilon(1e-14));
    const Tensor sig = signature(p, 6);
    CHECK(max_abs_diff(signature(rp, 6), antipode(sig)) <= 1e-10);
    CHECK(max_abs_diff(mul(sig, antipode(sig)), Tensor::unit(3, 6)) <= 1e-10);
  }
}

TEST_CASE("concatenate") {
  std::mt19937_64 rng(4);
  const auto p = random_path(rng, 2, 3);
  const auto q = random_path(rng, 2, 4);
  const auto pq = concatenate(p, q);
  CHECK(pq.num_segments() == 7);
  CHECK(max_abs_diff(signature(pq, 5), mul(signature(p, 5), signature(q, 5))) <= 1e-12);
}

TEST_CASE("p-variation: level-1 values") {
  const PiecewiseLinearPath line(2, {0.0, 1.0}, {0.0, 0.0, 1.5, 1.0});
  CHECK(p_variation(line, 1.0).value == doctest::Approx(2.5));
  const PiecewiseLinearPath two(1, {0.0, 1.0, 3.0}, {0.0, 1.0, -2.0});
  CHECK(p_variation(two, 1.0).value == doctest::Approx(4.0));
  CHECK_THROWS_AS(p_variation(two, 0.5), DomainError);
}

TEST_CASE("p-variation: monotone and random 1-d paths against brute force") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> step(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (double p : {1.0, 1.5, 2.5, 3.7}) {
    for (int t = 0; t < 5; ++t) {
      std::vector<double> mono{0.0}, wild{0.0};
      for (int j = 0; j < 9; ++j) {
        mono.push_back(mono.back() + step(rng));
        wild.push_back(wild.back() + g(rng));
      }
      const auto pm = PiecewiseLinearPath::from_points(1, mono);
      const auto pw = PiecewiseLinearPath::from_points(1, wild);
      PVariationOptions level1;
      level1.levels = {1};
      const double wgt = std::tgamma(1.0 / p + 1.0);
      CHECK(p_variation(pm, p, level1).per_level[1] == doctest::Approx(wgt * mono.back()).epsilon(1e-12));
      CHECK(p_variation(pm, p, level1).per_level[1] == doctest::Approx(brute_pvar_level1(mono, p)).epsilon(1e-12));
      CHECK(p_variation(pw, p, level1).per_level[1] == doctest::Approx(brute_pvar_level1(wild, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("p-variation: default levels and beta") {
  std::mt19937_64 rng(6);
  const auto path = random_path(rng, 2, 6);
  const PVariation pv = p_variation(path, 2.5, 3, path.start_time(), path.end_time());
  CHECK(pv.per_level[1] > 0.0);
  CHECK(pv.per_level[2] > 0.0);
  CHECK(pv.per_level[3] == 0.0);
  CHECK(pv.value == doctest::Approx(pv.per_level[1] + pv.per_level[2]));
  PVariationOptions b2;
  b2.beta = 2.0;
  CHECK(p_variation(path, 1.0, b2).value == doctest::Approx(2.0 * p_variation(path, 1.0).value));
  PVariationOptions bad;
  bad.levels = {4};
  CHECK_THROWS_AS(p_variation(path, 2.0, 3, path.start_time(), path.end_time(), bad), RangeError);
}

TEST_CASE("greedy partition on a constant-speed line") {
  const PiecewiseLinearPath line(1, {0.0, 1.0}, {0.0, 1.0});
  const GreedyPartition gp = greedy_partition(line, 0.3, 1.0);
  const std::vector<double> expect{0.0, 0.3, 0.6, 0.9, 1.0};
  REQUIRE(gp.taus.size() == expect.size());
  for (std::size_t j = 0; j < expect.size(); ++j) CHECK(gp.taus[j] == doctest::Approx(expect[j]).epsilon(1e-9));
  CHECK(gp.count == 3);

  const GreedyPartition whole = greedy_partition(line, 1.0, 1.0);
  CHECK(whole.taus == std::vector<double>{0.0, 1.0});
  CHECK(whole.count == 0);

  for (double alpha : {0.7, 0.33, 0.21, 0.09}) {
    const auto a = greedy_partition(line, alpha, 1.0);
    const auto h = greedy_partition(line, alpha / 2.0, 1.0);
    CHECK(h.count + 1 <= 2 * (a.count + 1));
  }
}

TEST_CASE("n_p upper bound and B_p factorisation") {
  const PiecewiseLinearPath shortp(1, {0.0, 1.0}, {0.0, 0.8});
  CHECK(n_p_upper_bound(shortp, 1.0) == 1);
  const PiecewiseLinearPath line(1, {0.0, 1.0}, {0.0, 3.3});
  CHECK(greedy_partition(line, 1.0, 1.0).count == 3);
  CHECK(n_p_upper_bound(line, 1.0) == 4);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 5; ++t) {
    const auto p = random_path(rng, 2, 5);
    const auto blocks = greedy_factorization(p, 1.0, 5);
    Tensor prod = Tensor::unit(2, 5);
    for (const auto &b : blocks) {
      CHECK(bp_weight(b, 1.0) <= 1.0 + 1e-8);
      prod = mul(prod, b);
    }
    CHECK(max_abs_diff(prod, signature(p, 5)) <= 1e-11);
    CHECK(blocks.size() == n_p_upper_bound(p, 1.0));
  }
}

TEST_CASE("greedy partition consistency on random paths") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    const auto p = random_path(rng, 2, 6);
    for (double pp : {1.0, 2.0}) {
      const double alpha = 0.5;
      const auto gp = greedy_partition(p, alpha, pp);
      const double tol = 1e-10 * (p.end_time() - p.start_time());
      for (std::size_t j = 0; j + 1 < gp.taus.size(); ++j) {
        const double w = control(p, pp, gp.taus[j], gp.taus[j + 1]);
        if (j + 2 < gp.taus.size()) {
          // omega(tau_j, tau_{j+1}) = alpha up to the time tolerance
          CHECK(w >= alpha * (1.0 - 1e-12));
          CHECK(control(p, pp, gp.taus[j], gp.taus[j + 1] - tol) <= alpha);
        } else {
          CHECK(w <= alpha + 1e-8);
        }
      }
    }
  }
}

TEST_CASE("degenerate single-point path") {
  const PiecewiseLinearPath pt(2, {0.0}, {1.0, 2.0});
  CHECK(signature(pt, 3) == Tensor::unit(2, 3));
  CHECK(p_variation(pt, 1.0).value == 0.0);
  CHECK(greedy_partition(pt, 1.0, 1.0).count == 0);
}
