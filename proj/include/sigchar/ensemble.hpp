#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "sigchar/path.hpp"
#include "sigchar/tensor.hpp"
#include "sigchar/unitary.hpp"

namespace sigchar {

// Sample exp(scale * f) with f the ensemble's Lie generator number `generator`.
struct LieSample {
  double scale = 0.0;
  int generator = 0;
};

/**
 * Finite sample of a G(R^d)-valued random variable, truncated at depth n.
 *
 * Each sample is stored in the cheapest exact form available: the source
 * path, the Lie logarithm s * f, or the signature tensor itself. sample(i)
 * materialises the truncated tensor. Samples with a path or Lie source can be
 * developed exactly into a unitary group.
 */
class SignatureEnsemble {
public:
  using Source = std::variant<Tensor, PiecewiseLinearPath, LieSample>;

  SignatureEnsemble() = default;
  SignatureEnsemble(int width, int depth, std::uint64_t master_seed = 0);

  static SignatureEnsemble from_tensors(std::vector<Tensor> tensors, std::uint64_t master_seed = 0);
  static SignatureEnsemble from_paths(std::vector<PiecewiseLinearPath> paths, int depth, std::uint64_t master_seed = 0);

  void add(Tensor x);
  void add(PiecewiseLinearPath path);
  void add(LieSample s);

  // Lie generators f_j referenced by LieSample; each must have zero scalar part.
  void set_lie_generators(std::vector<Tensor> generators);
  const std::vector<Tensor> &lie_generators() const noexcept { return lie_generators_; }

  int width() const noexcept { return width_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return sources_.size(); }
  bool empty() const noexcept { return sources_.empty(); }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t seed_of(std::size_t i) const;

  const Source &source(std::size_t i) const { return sources_.at(i); }
  Tensor sample(std::size_t i) const;

  // True when every sample has a path or Lie source.
  bool exact() const;

  // Unitary development of sample i; throws DomainError for a tensor source.
  ComplexMatrix develop(std::size_t i, const LinearRep &rep) const;

  // Same law pushed through delta_lambda: paths are scaled, Lie generators
  // and tensors dilated.
  SignatureEnsemble dilated(double lambda) const;

  // Throws ValidationError naming the first sample that fails is_group_like.
  void validate(double tol = 1e-8) const;

private:
  void check_tensor(const Tensor &x) const;

  int width_ = 0;
  int depth_ = 0;
  std::uint64_t master_seed_ = 0;
  std::vector<Source> sources_;
  std::vector<Tensor> lie_generators_;
};

} // namespace sigchar
