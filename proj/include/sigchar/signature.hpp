#pragma once

#include <span>
#include <vector>

#include "sigchar/path.hpp"
#include "sigchar/tensor.hpp"

namespace sigchar {

// Signature of a straight segment with increment v: exp(v) in T^n.
Tensor segment_signature(std::span<const double> v, int depth);

// Signature of the path restricted to [s, t]: ordered product of the segment
// signatures of the (partial) increments inside the interval.
Tensor signature(const PiecewiseLinearPath &path, int depth, double s, double t);
Tensor signature(const PiecewiseLinearPath &path, int depth);

struct PVariationOptions {
  // beta_p in the factorial weighting (k/p)! beta_p ||x^k||.
  double beta = 1.0;
  // Levels entering the functional; empty means 1..floor(p).
  std::vector<int> levels;
};

struct PVariation {
  double p = 1.0;
  // per_level[k] = (sup_D sum_j ((k/p)! beta ||x^k_{t_j,t_{j+1}}||)^(p/k))^(1/p);
  // entry 0 is unused.
  std::vector<double> per_level;
  // Sum of per_level: the p-variation of the lift on [s, t].
  double value = 0.0;

  double control() const;
};

/**
 * p-variation of the signature lift on [s, t].
 *
 * Partitions are restricted to breakpoint times plus the endpoints, and the
 * supremum is found by dynamic programming over sub-partitions. For level 1
 * this is the exact p-variation of a piecewise-linear path; higher levels are
 * a lower bound used consistently wherever the control is needed.
 */
PVariation p_variation(const PiecewiseLinearPath &path, double p, int depth, double s, double t,
                       const PVariationOptions &opts = {});
PVariation p_variation(const PiecewiseLinearPath &path, double p, const PVariationOptions &opts = {});

// omega(s, t) = ||x||^p_{p-var;[s,t]}.
double control(const PiecewiseLinearPath &path, double p, double s, double t, const PVariationOptions &opts = {});

struct GreedyPartition {
  double alpha = 0.0;
  double p = 1.0;
  // tau_0 = start time, ..., last entry = end time.
  std::vector<double> taus;
  // N = sup{ j : tau_j < T }.
  std::size_t count = 0;
};

// Greedy times tau_{j+1} = inf{ t > tau_j : omega(tau_j, t) >= alpha } ^ T,
// each located by bisection to an absolute time tolerance of 1e-10 * (T - t0).
GreedyPartition greedy_partition(const PiecewiseLinearPath &path, double alpha, double p,
                                 const PVariationOptions &opts = {});

// Upper bound N_{1,[0,T],p} + 1 for the length n_p of a factorisation of the
// signature into elements of B_p.
std::size_t n_p_upper_bound(const PiecewiseLinearPath &path, double p, const PVariationOptions &opts = {});

// sup_{k <= n} beta (k/p)! ||g^k||; g lies in (the truncation of) B_p iff this
// is at most 1.
double bp_weight(const Tensor &g, double p, double beta = 1.0);

// Signatures of the blocks [tau_j, tau_{j+1}] of the greedy partition with
// alpha = 1; their ordered product is the signature of the whole path.
std::vector<Tensor> greedy_factorization(const PiecewiseLinearPath &path, double p, int depth,
                                         const PVariationOptions &opts = {});

} // namespace sigchar
