#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sigchar/tensor.hpp"
#include "sigchar/unitary.hpp"

namespace sigchar {

struct SeparationResult {
  bool found = false;
  // Witness representation, already multiplied by epsilon.
  std::optional<SymplecticRep> rep;
  double epsilon = 0.0;
  // ||evaluate_truncated(rep, x)||_F for the witness.
  double witness_norm = 0.0;
  int attempts = 0;
  // Lowest non-zero level k and m = ceil(k / 3).
  int level = 0;
  int m = 0;
  // Threshold the witness norm had to exceed.
  double threshold = 0.0;
  // Witness norm of every attempt, in order.
  std::vector<double> attempt_norms;
};

/**
 * Randomised search for M in L(R^d, sp(m)) with M(x) != 0.
 *
 * Generators are i.i.d. standard normal combinations of sp_basis(m), rescaled
 * by epsilon = 1 / (2 ||M|| (R + 1)) with R = max_k ||x^k||^(1/k). An attempt
 * succeeds when ||M_eps(x)||_F exceeds 1e-9 ||x|| (eps ||M||)^k, i.e. the
 * relative non-zero tolerance carried through the dilation of level k.
 * Throws DomainError when x has no non-zero level k >= 1.
 */
SeparationResult separation_search(const Tensor &x, int retries, std::uint64_t seed);

} // namespace sigchar
