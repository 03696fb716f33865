#include "sigchar/models.hpp"

#include <cmath>
#include <numeric>

#include "sigchar/errors.hpp"
#include "sigchar/rng.hpp"

namespace sigchar {

namespace {

constexpr Complex kI{0.0, 1.0};

// Cumulative weights for inverse-CDF sampling of N.
std::vector<double> cumulative(const std::vector<double> &p) {
  std::vector<double> c(p.size());
  std::partial_sum(p.begin(), p.end(), c.begin());
  return c;
}

int draw_index(const std::vector<double> &cdf, double u) {
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (u < cdf[i]) return static_cast<int>(i);
  }
  // u beyond the last cumulative weight (rounding): last supported index.
  for (std::size_t i = cdf.size(); i-- > 0;) {
    if (i == 0 || cdf[i] > cdf[i - 1]) return static_cast<int>(i);
  }
  return 0;
}

void check_multiples_of_four(const std::vector<double> &pn) {
  for (std::size_t n = 0; n < pn.size(); ++n) {
    if (pn[n] != 0.0 && n % 4 != 0) throw DomainError("closed form requires pn supported on multiples of 4");
  }
}

} // namespace

void LieExpModelParams::validate() const {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0, 1)");
  if (width < 2) throw DomainError("Lie exponential model needs width >= 2");
  if (pn.empty()) throw DomainError("pn is empty");
  double total = 0.0;
  for (double p : pn) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("pn must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("pn must sum to 1");
  if (depth < max_support() + 1) throw DomainError("depth must be at least max support of N plus 1");
}

int LieExpModelParams::max_support() const {
  for (std::size_t n = pn.size(); n-- > 0;) {
    if (pn[n] > 0.0) return static_cast<int>(n);
  }
  return 0;
}

std::vector<double> default_pn(int terms, double c) {
  if (terms < 1 || !(c > 0.0 && c < 1.0)) throw DomainError("default_pn needs terms >= 1 and c in (0, 1)");
  std::vector<double> pn(static_cast<std::size_t>(4 * (terms - 1) + 1), 0.0);
  double total = 0.0;
  for (int m = 0; m < terms; ++m) total += std::pow(c, m * m);
  for (int m = 0; m < terms; ++m) pn[static_cast<std::size_t>(4 * m)] = std::pow(c, m * m) / total;
  return pn;
}

Tensor lie_generator(int width, int depth, int n) {
  if (width < 2) throw DomainError("f_N needs width >= 2");
  if (n < 0 || depth < n + 1) throw DomainError("f_N lives at level N + 1, beyond the depth");
  Tensor f = Tensor::letter(width, depth, 1);
  const Tensor e1 = Tensor::letter(width, depth, 0);
  for (int j = 0; j < n; ++j) f = lie_bracket(e1, f);
  return f;
}

SignatureEnsemble sample_lie_exponential(const LieExpModelParams &params, std::uint64_t seed, std::size_t count) {
  params.validate();
  SignatureEnsemble ens(params.width, params.depth, seed);
  std::vector<Tensor> gens;
  for (std::size_t n = 0; n < params.pn.size(); ++n) {
    gens.push_back(params.pn[n] > 0.0 ? lie_generator(params.width, params.depth, static_cast<int>(n))
                                      : Tensor(params.width, params.depth));
  }
  ens.set_lie_generators(std::move(gens));
  const std::vector<double> cdf = cumulative(params.pn);
  std::vector<LieSample> samples(count);
  parallel_for(count, [&](std::size_t i) {
    Rng rng = make_rng(ens.seed_of(i));
    std::geometric_distribution<int> geom(1.0 - params.q);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int s = geom(rng);
    samples[i] = LieSample{static_cast<double>(s), draw_index(cdf, unif(rng))};
  });
  for (const auto &s : samples) ens.add(s);
  return ens;
}

Complex phi_s(double q, double lambda) { return (1.0 - q) / (1.0 - q * std::exp(kI * lambda)); }

LinearRep example_rep(int width) {
  if (width < 2) throw DomainError("example_rep needs width >= 2");
  const auto u = su2_basis();
  std::vector<ComplexMatrix> gens{u[0], u[1]};
  for (int i = 2; i < width; ++i) gens.push_back(ComplexMatrix::Zero(2, 2));
  return LinearRep(std::move(gens));
}

ComplexMatrix u2_eigenbasis() {
  ComplexMatrix w(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  w << s, s, -kI * s, kI * s;
  return w;
}

ComplexMatrix closed_form_phi(const LieExpModelParams &params, double r) {
  params.validate();
  check_multiples_of_four(params.pn);
  if (r == 0.0) return ComplexMatrix::Identity(2, 2);
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  for (std::size_t n = 0; n < params.pn.size(); n += 4) {
    const double p = params.pn[n];
    if (p < 1e-15) continue;
    const double t = std::pow(r, static_cast<double>(n));
    out(0, 0) += p * phi_s(params.q, t / 2.0);
    out(1, 1) += p * phi_s(params.q, -t / 2.0);
  }
  return out;
}

ComplexMatrix exact_phi(const LieExpModelParams &params, double r) {
  params.validate();
  check_multiples_of_four(params.pn);
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  for (std::size_t n = 0; n < params.pn.size(); n += 4) {
    const double p = params.pn[n];
    if (p == 0.0) continue;
    const double t = std::pow(r, static_cast<double>(n + 1));
    out(0, 0) += p * phi_s(params.q, t / 2.0);
    out(1, 1) += p * phi_s(params.q, -t / 2.0);
  }
  return out;
}

ComplexMatrix exact_phi_standard_basis(const LieExpModelParams &params, double r) {
  const ComplexMatrix w = u2_eigenbasis();
  return w * exact_phi(params, r) * w.adjoint();
}

StepLaw parse_step_law(const std::string &name) {
  if (name == "rademacher" || name == "pm1") return StepLaw::Rademacher;
  if (name == "gaussian" || name == "normal") return StepLaw::Gaussian;
  throw ValidationError("unknown step law '" + name + "'");
}

std::string step_law_name(StepLaw law) { return law == StepLaw::Rademacher ? "rademacher" : "gaussian"; }

double RandomWalkModelParams::effective_scale() const {
  return scale > 0.0 ? scale : 1.0 / std::sqrt(static_cast<double>(n_steps));
}

void RandomWalkModelParams::validate() const {
  if (n_steps < 1) throw DomainError("n_steps must be at least 1");
  if (width < 1) throw DomainError("width must be positive");
  if (depth < 0) throw DomainError("depth must be non-negative");
  if (!std::isfinite(scale)) throw DomainError("scale must be finite");
  if (!(length_q >= 0.0 && length_q < 1.0)) throw DomainError("length_q must lie in [0, 1)");
}

std::vector<PiecewiseLinearPath> sample_random_walk_paths(const RandomWalkModelParams &params, std::uint64_t seed,
                                                          std::size_t count) {
  params.validate();
  const double scale = params.effective_scale();
  std::vector<PiecewiseLinearPath> paths(count);
  parallel_for(count, [&](std::size_t i) {
    Rng rng = make_rng(sample_seed(seed, i));
    std::size_t steps = params.n_steps;
    if (params.length_q > 0.0) {
      std::geometric_distribution<int> geom(1.0 - params.length_q);
      steps = 1 + static_cast<std::size_t>(geom(rng));
    }
    std::vector<double> inc(steps * static_cast<std::size_t>(params.width));
    if (params.law == StepLaw::Rademacher) {
      std::bernoulli_distribution coin(0.5);
      for (double &v : inc) v = coin(rng) ? scale : -scale;
    } else {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (double &v : inc) v = scale * normal(rng);
    }
    paths[i] = PiecewiseLinearPath::from_increments(params.width, inc);
  });
  return paths;
}

SignatureEnsemble random_walk_ensemble(const RandomWalkModelParams &params, std::uint64_t seed, std::size_t count) {
  return SignatureEnsemble::from_paths(sample_random_walk_paths(params, seed, count), params.depth, seed);
}

EndpointLaw parse_endpoint_law(const std::string &name, double value) {
  if (name == "constant") return {EndpointKind::Constant, value};
  if (name == "normal" || name == "gaussian") return {EndpointKind::Normal, value};
  if (name == "rademacher" || name == "pm1") return {EndpointKind::Rademacher, value};
  throw ValidationError("unknown endpoint law '" + name + "'");
}

SignatureEnsemble one_d_moment_model(const EndpointLaw &law, int depth, std::uint64_t seed, std::size_t count) {
  if (count == 0) throw DomainError("one_d_moment_model needs count >= 1");
  std::vector<PiecewiseLinearPath> paths(count);
  parallel_for(count, [&](std::size_t i) {
    Rng rng = make_rng(sample_seed(seed, i));
    double a = law.value;
    if (law.kind == EndpointKind::Normal) {
      std::normal_distribution<double> normal(0.0, law.value);
      a = normal(rng);
    } else if (law.kind == EndpointKind::Rademacher) {
      std::bernoulli_distribution coin(0.5);
      a = coin(rng) ? law.value : -law.value;
    }
    paths[i] = PiecewiseLinearPath(1, {0.0, 1.0}, {0.0, a});
  });
  return SignatureEnsemble::from_paths(std::move(paths), depth, seed);
}

} // namespace sigchar
