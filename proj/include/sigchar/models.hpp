#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigchar/ensemble.hpp"
#include "sigchar/path.hpp"
#include "sigchar/tensor.hpp"
#include "sigchar/unitary.hpp"

namespace sigchar {

/// X = exp(s f_N) with s geometric on {0, 1, 2, ...} (P[s = j] = (1-q) q^j)
/// and N ~ pn independent of s; f_N = [e1, [e1, ..., [e1, e2]...]] with e1
/// appearing N times, a homogeneous Lie element of degree N + 1.
struct LieExpModelParams {
  double q = 0.5;
  // pn[N] = P[N = N]; must sum to 1.
  std::vector<double> pn{1.0};
  int width = 2;
  int depth = 2;

  // Throws DomainError unless q in (0,1), pn is a probability vector, width
  // >= 2 and depth >= max support + 1.
  void validate() const;
  int max_support() const;
};

// pn proportional to c^(m^2) at N = 4m for m = 0..terms-1.
std::vector<double> default_pn(int terms = 3, double c = 0.5);

// f_N in T^depth(R^width).
Tensor lie_generator(int width, int depth, int n);

SignatureEnsemble sample_lie_exponential(const LieExpModelParams &params, std::uint64_t seed, std::size_t count);

// Characteristic function of s: (1-q) / (1 - q e^{i lambda}).
Complex phi_s(double q, double lambda);

// e1 -> u1, e2 -> u2, remaining generators 0.
LinearRep example_rep(int width);

// Unitary W with W* u2 W = u3; its columns are eigenvectors of u2.
ComplexMatrix u2_eigenbasis();

// sum_n p_{4n} diag(phi_s(r^{4n}/2), phi_s(-r^{4n}/2)), the series displayed
// for E[(rM)(X)] in the counterexample; r = 0 returns I. Requires pn
// supported on multiples of 4.
ComplexMatrix closed_form_phi(const LieExpModelParams &params, double r);

// E[(rM)(X)] written in the eigenbasis of u2, i.e. for the representation
// W* M W: sum_n p_{4n} diag(phi_s(r^{4n+1}/2), phi_s(-r^{4n+1}/2)).
ComplexMatrix exact_phi(const LieExpModelParams &params, double r);
// The same expectation for M itself: W exact_phi W*.
ComplexMatrix exact_phi_standard_basis(const LieExpModelParams &params, double r);

enum class StepLaw { Rademacher, Gaussian };

StepLaw parse_step_law(const std::string &name);
std::string step_law_name(StepLaw law);

struct RandomWalkModelParams {
  std::size_t n_steps = 1;
  StepLaw law = StepLaw::Rademacher;
  // <= 0 selects n_steps^(-1/2).
  double scale = 0.0;
  int width = 2;
  int depth = 2;
  // When in (0,1) the number of steps is 1 + G with G geometric on {0,1,...}
  // of parameter 1 - length_q, instead of n_steps.
  double length_q = 0.0;

  double effective_scale() const;
  void validate() const;
};

// Paths starting at the origin at unit time spacing; every coordinate of every
// step is an independent +-1 sign (or standard normal) times the scale.
std::vector<PiecewiseLinearPath> sample_random_walk_paths(const RandomWalkModelParams &params, std::uint64_t seed,
                                                          std::size_t count);
SignatureEnsemble random_walk_ensemble(const RandomWalkModelParams &params, std::uint64_t seed, std::size_t count);

enum class EndpointKind { Constant, Normal, Rademacher };

struct EndpointLaw {
  EndpointKind kind = EndpointKind::Normal;
  // Constant value, or standard deviation / magnitude for the random laws.
  double value = 1.0;
};

EndpointLaw parse_endpoint_law(const std::string &name, double value);

// Samples exp(a_i e1) in d = 1, stored as the segment from 0 to a_i.
SignatureEnsemble one_d_moment_model(const EndpointLaw &law, int depth, std::uint64_t seed, std::size_t count);

} // namespace sigchar
