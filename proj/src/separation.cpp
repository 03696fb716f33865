#include "sigchar/separation.hpp"

#include <cmath>

#include "sigchar/errors.hpp"
#include "sigchar/rng.hpp"

namespace sigchar {

SeparationResult separation_search(const Tensor &x, int retries, std::uint64_t seed) {
  if (retries < 1) throw DomainError("separation_search needs at least one attempt");
  double total = 0.0;
  for (int k = 1; k <= x.depth(); ++k) total += level_norm(x, k);
  if (total == 0.0) throw DomainError("separation_search: tensor has no non-zero level k >= 1");

  SeparationResult out;
  for (int k = 1; k <= x.depth(); ++k) {
    if (level_norm(x, k) > 1e-9 * total) {
      out.level = k;
      break;
    }
  }
  if (out.level == 0) throw DomainError("separation_search: every level is below the non-zero tolerance");
  out.m = (out.level + 2) / 3;

  double radius = 0.0;
  for (int k = 1; k <= x.depth(); ++k) radius = std::max(radius, std::pow(level_norm(x, k), 1.0 / k));

  // The scalar part maps to a multiple of I under every representation and
  // separates nothing, so the witness is computed on x - x^0.
  Tensor y = x;
  y.data()[0] = 0.0;

  const std::vector<ComplexMatrix> basis = sp_basis(out.m);
  const int h = 2 * out.m;
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (int attempt = 1; attempt <= retries; ++attempt) {
    out.attempts = attempt;
    std::vector<ComplexMatrix> gens;
    for (int i = 0; i < x.width(); ++i) {
      ComplexMatrix a = ComplexMatrix::Zero(h, h);
      for (const auto &b : basis) a += normal(rng) * b;
      gens.push_back(std::move(a));
    }
    const LinearRep raw(std::move(gens), 1e-10);
    const double norm = raw.norm();
    if (norm == 0.0) {
      out.attempt_norms.push_back(0.0);
      continue;
    }
    double eps = 1.0 / (2.0 * norm * (radius + 1.0));
    ComplexMatrix value;
    for (int halvings = 0;; ++halvings) {
      value = evaluate_truncated(raw.scaled(eps), y);
      if (value.allFinite()) break;
      if (halvings == 60) throw NumericError("separation_search: evaluation overflows at every scale");
      eps *= 0.5;
    }
    const double witness = value.norm();
    const double threshold = 1e-9 * total * std::pow(eps * norm, out.level);
    out.attempt_norms.push_back(witness);
    if (witness > threshold) {
      out.found = true;
      out.rep = SymplecticRep(raw.scaled(eps), 1e-9);
      out.epsilon = eps;
      out.witness_norm = witness;
      out.threshold = threshold;
      return out;
    }
    out.threshold = threshold;
  }
  return out;
}

} // namespace sigchar
