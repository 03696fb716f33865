#pragma once

#include <string>
#include <vector>

#include "sigchar/ensemble.hpp"
#include "sigchar/hopf.hpp"
#include "sigchar/signature.hpp"
#include "sigchar/unitary.hpp"

namespace sigchar {

struct ExpSigEstimate {
  Tensor mean;
  // Standard error of every coefficient (sample standard deviation / sqrt N).
  Tensor stderr_coeff;
  // Largest coefficient standard error on each level.
  std::vector<double> level_stderr;
  std::size_t count = 0;
};

ExpSigEstimate expected_signature(const SignatureEnsemble &ens);

struct RadiusDiagnostics {
  // seq_r1[k] = mean ||X^k||, seq_r2[k] = ||mean X^k||, k = 0..n.
  std::vector<double> seq_r1;
  std::vector<double> seq_r1_stderr;
  std::vector<double> seq_r2;
  // seq^(1/k) for k >= 1; entry 0 unused.
  std::vector<double> root_r1;
  std::vector<double> root_r2;
  // Least-squares slope of log((seq_r1[k] k!)^(1/k)) against log k. Close to
  // 0 when seq_r1[k] behaves like L^k / k!, close to 1 for geometric decay.
  double decay_slope = 0.0;
  // "factorial-type" or "geometric-only"; a heuristic label only.
  std::string classification;
  // seq_r2[k] <= seq_r1[k] + 3 stderr at every level.
  bool jensen_ok = true;
};

inline constexpr double kFactorialSlopeThreshold = 0.35;

RadiusDiagnostics radius_diagnostics(const SignatureEnsemble &ens);

struct RadiiCheckRow {
  int k = 0;
  // mean ||X^k||^2 and its standard error.
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  // d^k 4^k ||mean X^(2k)|| and a standard error bound.
  double rhs = 0.0;
  double rhs_stderr = 0.0;
  bool violated = false;
};

struct RadiiCheckReport {
  std::vector<RadiiCheckRow> rows;
  bool ok = true;
};

// E||X^k||^2 <= d^k 2^(2k) ||E X^(2k)|| for 1 <= k <= max_k, flagged as a
// violation only beyond 3 combined standard errors. max_k = 0 means n / 2.
RadiiCheckReport radii_inequality_check(const SignatureEnsemble &ens, int max_k = 0);

struct SquareBoundRow {
  Word word;
  double mean_abs = 0.0;
  double mean_abs_stderr = 0.0;
  // sqrt(mean <f ш f, X>).
  double root_mean_shuffle = 0.0;
  bool violated = false;
};

struct SquareBoundReport {
  std::vector<SquareBoundRow> rows;
  bool ok = true;
};

// mean |<f, X>| <= sqrt(mean <f ш f, X>) + 3 stderr for every word f with
// 1 <= |f| <= max_len; requires 2 max_len <= depth.
SquareBoundReport square_bound_check(const SignatureEnsemble &ens, int max_len);

struct CharFnEstimate {
  ComplexMatrix mean;
  // Entrywise standard errors of the real and imaginary parts, and of the
  // complex entry (sqrt(var re + var im) / sqrt N).
  Eigen::MatrixXd stderr_re;
  Eigen::MatrixXd stderr_im;
  Eigen::MatrixXd stderr_abs;
  std::size_t count = 0;
  // false when samples were evaluated through the truncated series.
  bool exact = true;
  // Mean of the per-sample tail bounds in truncated mode, 0 in exact mode.
  double tail_bound = 0.0;
};

// Entrywise mean of M(X_i). Exact development when every sample has a path or
// Lie source; otherwise the truncated series with a tail bound computed from
// L_i = max_k (k! ||X_i^k||)^(1/k).
CharFnEstimate char_fn(const SignatureEnsemble &ens, const LinearRep &rep);

struct ExpSigCharFn {
  ComplexMatrix value;
  // Tail bound sum_{k>n} (lambda ||M|| R)^k / k! with R the factorial radius
  // of the mean tensor.
  double tail_bound = 0.0;
  // Non-empty when the tail bound exceeds 1e-3.
  std::string warning;
};

// evaluate_truncated(lambda M, mean tensor).
ExpSigCharFn char_fn_from_expsig(const ExpSigEstimate &est, const LinearRep &rep, double lambda);

struct PhiCurve {
  std::vector<double> lambdas;
  std::vector<CharFnEstimate> values;
  // max entry modulus of the second difference at each interior grid point,
  // divided by the squared mean spacing; entries 0 and last are 0.
  std::vector<double> second_difference;
  double max_second_difference = 0.0;
};

PhiCurve phi_lambda_curve(const SignatureEnsemble &ens, const LinearRep &rep, const std::vector<double> &lambdas);

struct DistanceReport {
  double value = 0.0;
  std::vector<double> per_rep;
  // Operator norm of the 3-sigma entrywise error matrices of both estimates.
  std::vector<double> per_rep_error;
};

DistanceReport char_fn_distance_report(const SignatureEnsemble &a, const SignatureEnsemble &b,
                                       const std::vector<LinearRep> &reps);
// max over reps of ||char_fn(a) - char_fn(b)||_op.
double char_fn_distance(const SignatureEnsemble &a, const SignatureEnsemble &b, const std::vector<LinearRep> &reps);

struct TailReport {
  double p = 1.0;
  double alpha = 1.0;
  // N_{alpha,[0,T],p} + 1 per sample.
  std::vector<std::size_t> counts;
  // Distinct values v and P[count > v].
  std::vector<std::size_t> support;
  std::vector<double> survival;
  // Fit of log P[count > v] = intercept + slope v beyond the median.
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t fit_points = 0;
  // "degenerate", "bounded-support", "exponential-tail-consistent" or
  // "inconclusive".
  std::string label;
  std::string interpretation;
};

// Refuses (DomainError) fewer than 10 paths.
TailReport tail_diagnostic(const std::vector<PiecewiseLinearPath> &paths, double p, double alpha,
                           const PVariationOptions &opts = {});

struct MomentsRow {
  // Index of the first model of the consecutive pair (i, i + 1).
  std::size_t index = 0;
  // max |mean X_i - mean X_{i+1}| over coefficients, and per level.
  double expsig_diff = 0.0;
  std::vector<double> expsig_level_diff;
  double distance = 0.0;
  std::vector<double> distance_per_rep;
};

struct MomentsTable {
  std::vector<MomentsRow> rows;
  std::vector<ExpSigEstimate> estimates;
  bool distance_decreasing = false;
};

MomentsTable method_of_moments_experiment(const std::vector<SignatureEnsemble> &family,
                                          const std::vector<LinearRep> &reps);

// count random anti-Hermitian reps (G - G*) / 2 * scale / sqrt(h) with
// complex Gaussian G, dimension cycling through dims.
std::vector<LinearRep> random_rep_panel(int width, std::size_t count, std::uint64_t seed,
                                        const std::vector<int> &dims = {2, 4}, double scale = 1.0);

} // namespace sigchar
