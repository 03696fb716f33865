#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sigchar/errors.hpp"
#include "sigchar/separation.hpp"

using namespace sigchar;

namespace {

Tensor random_homogeneous(std::mt19937_64 &rng, int width, int depth, int k) {
  std::normal_distribution<double> g(0.0, 1.0);
  Tensor x(width, depth);
  auto lvl = x.level(k);
  for (double &c : lvl) c = g(rng);
  return x;
}

} // namespace

TEST_CASE("the bracket [e1, e2] is seen by the su(2) example") {
  const Tensor x = lie_bracket(Tensor::letter(2, 2, 0), Tensor::letter(2, 2, 1));
  const auto u = su2_basis();
  const LinearRep rep({u[0], u[1]});
  CHECK(max_abs(evaluate_truncated(rep, x) - u[2]) <= 1e-15);

  const auto res = separation_search(x, 10, 1);
  CHECK(res.found);
  REQUIRE(res.rep.has_value());
  CHECK(res.level == 2);
  CHECK(res.m == 1);
  CHECK(res.rep->m() == 1);
  CHECK(res.witness_norm > res.threshold);
  CHECK(max_abs(evaluate_truncated(res.rep->rep(), x)) > 0.0);
}

TEST_CASE("a single letter is separated") {
  const auto res = separation_search(Tensor::letter(3, 4, 2), 10, 7);
  CHECK(res.found);
  CHECK(res.level == 1);
  CHECK(res.m == 1);
  CHECK(res.attempts >= 1);
}

TEST_CASE("random homogeneous tensors are separated within ten attempts") {
  std::mt19937_64 rng(11);
  int found = 0;
  for (int t = 0; t < 100; ++t) {
    const int d = 1 + t % 3;
    const int k = 1 + (t / 3) % 6;
    const Tensor x = random_homogeneous(rng, d, k, k);
    const auto res = separation_search(x, 10, static_cast<std::uint64_t>(t));
    CHECK(res.m == (k + 2) / 3);
    if (res.found) {
      ++found;
      REQUIRE(res.rep.has_value());
      CHECK(res.rep->m() == res.m);
      for (const auto &a : res.rep->rep().generators()) CHECK(in_sp(a));
      CHECK(static_cast<int>(res.attempt_norms.size()) == res.attempts);
      CHECK(res.attempt_norms.back() == res.witness_norm);
    }
  }
  CHECK(found == 100);
}

TEST_CASE("mixed-level tensors use the lowest non-zero level") {
  std::mt19937_64 rng(12);
  Tensor x = random_homogeneous(rng, 2, 5, 4);
  x += random_homogeneous(rng, 2, 5, 5);
  x.data()[0] = 3.0;
  const auto res = separation_search(x, 10, 3);
  CHECK(res.level == 4);
  CHECK(res.m == 2);
  CHECK(res.found);
}

TEST_CASE("errors and determinism") {
  CHECK_THROWS_AS(separation_search(Tensor(2, 3), 10, 1), DomainError);
  CHECK_THROWS_AS(separation_search(Tensor::unit(2, 3), 10, 1), DomainError);
  CHECK_THROWS_AS(separation_search(Tensor::letter(2, 3, 0), 0, 1), DomainError);
  std::mt19937_64 rng(13);
  const Tensor x = random_homogeneous(rng, 3, 3, 3);
  const auto a = separation_search(x, 10, 99);
  const auto b = separation_search(x, 10, 99);
  REQUIRE(a.rep.has_value());
  REQUIRE(b.rep.has_value());
  CHECK(a.attempt_norms == b.attempt_norms);
  CHECK(a.epsilon == b.epsilon);
  for (int i = 0; i < 3; ++i) CHECK(a.rep->rep().generator(i) == b.rep->rep().generator(i));
}
