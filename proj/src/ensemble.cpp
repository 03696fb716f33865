#include "sigchar/ensemble.hpp"

#include <cmath>
#include <string>

#include "sigchar/errors.hpp"
#include "sigchar/hopf.hpp"
#include "sigchar/rng.hpp"
#include "sigchar/signature.hpp"

namespace sigchar {

SignatureEnsemble::SignatureEnsemble(int width, int depth, std::uint64_t master_seed)
    : width_(width), depth_(depth), master_seed_(master_seed) {
  if (width < 1) throw DomainError("ensemble width must be positive");
  if (depth < 0) throw DomainError("ensemble depth must be non-negative");
}

SignatureEnsemble SignatureEnsemble::from_tensors(std::vector<Tensor> tensors, std::uint64_t master_seed) {
  if (tensors.empty()) throw DomainError("ensemble needs at least one sample");
  SignatureEnsemble ens(tensors.front().width(), tensors.front().depth(), master_seed);
  for (auto &x : tensors) ens.add(std::move(x));
  return ens;
}

SignatureEnsemble SignatureEnsemble::from_paths(std::vector<PiecewiseLinearPath> paths, int depth,
                                                std::uint64_t master_seed) {
  if (paths.empty()) throw DomainError("ensemble needs at least one sample");
  SignatureEnsemble ens(paths.front().width(), depth, master_seed);
  for (auto &p : paths) ens.add(std::move(p));
  return ens;
}

void SignatureEnsemble::check_tensor(const Tensor &x) const {
  if (x.width() != width_ || x.depth() != depth_) throw DimensionError("ensemble sample has the wrong width or depth");
}

void SignatureEnsemble::add(Tensor x) {
  check_tensor(x);
  sources_.emplace_back(std::move(x));
}

void SignatureEnsemble::add(PiecewiseLinearPath path) {
  if (path.width() != width_) throw DimensionError("ensemble path has the wrong width");
  sources_.emplace_back(std::move(path));
}

void SignatureEnsemble::add(LieSample s) {
  if (s.generator < 0 || static_cast<std::size_t>(s.generator) >= lie_generators_.size()) {
    throw RangeError("Lie sample refers to an unknown generator");
  }
  if (!std::isfinite(s.scale)) throw NumericError("Lie sample scale is not finite");
  sources_.emplace_back(s);
}

void SignatureEnsemble::set_lie_generators(std::vector<Tensor> generators) {
  for (const auto &f : generators) {
    check_tensor(f);
    if (f.scalar() != 0.0) throw DomainError("Lie generator must have zero scalar part");
  }
  lie_generators_ = std::move(generators);
}

std::uint64_t SignatureEnsemble::seed_of(std::size_t i) const { return sample_seed(master_seed_, i); }

Tensor SignatureEnsemble::sample(std::size_t i) const {
  const Source &src = source(i);
  if (const auto *x = std::get_if<Tensor>(&src)) return *x;
  if (const auto *p = std::get_if<PiecewiseLinearPath>(&src)) return signature(*p, depth_);
  const auto &s = std::get<LieSample>(src);
  return exp(s.scale * lie_generators_[static_cast<std::size_t>(s.generator)]);
}

bool SignatureEnsemble::exact() const {
  for (const auto &src : sources_) {
    if (std::holds_alternative<Tensor>(src)) return false;
  }
  return true;
}

ComplexMatrix SignatureEnsemble::develop(std::size_t i, const LinearRep &rep) const {
  if (rep.width() != width_) throw DimensionError("representation width does not match ensemble");
  const Source &src = source(i);
  if (const auto *p = std::get_if<PiecewiseLinearPath>(&src)) return sigchar::develop(*p, rep);
  if (const auto *s = std::get_if<LieSample>(&src)) {
    return mat_exp(s->scale * evaluate_truncated(rep, lie_generators_[static_cast<std::size_t>(s->generator)]));
  }
  throw DomainError("sample " + std::to_string(i) + " has no path or Lie source to develop");
}

SignatureEnsemble SignatureEnsemble::dilated(double lambda) const {
  SignatureEnsemble out(width_, depth_, master_seed_);
  std::vector<Tensor> gens;
  for (const auto &f : lie_generators_) gens.push_back(dilate(lambda, f));
  out.lie_generators_ = std::move(gens);
  out.sources_.reserve(sources_.size());
  for (const auto &src : sources_) {
    if (const auto *x = std::get_if<Tensor>(&src)) {
      out.sources_.emplace_back(dilate(lambda, *x));
    } else if (const auto *p = std::get_if<PiecewiseLinearPath>(&src)) {
      out.sources_.emplace_back(p->scaled(lambda));
    } else {
      out.sources_.emplace_back(std::get<LieSample>(src));
    }
  }
  return out;
}

void SignatureEnsemble::validate(double tol) const {
  for (std::size_t i = 0; i < size(); ++i) {
    const auto cert = is_group_like(sample(i), tol);
    if (!cert.group_like) {
      throw ValidationError("sample " + std::to_string(i) + " is not group-like (residual " +
                            std::to_string(cert.worst_residual) + ")");
    }
  }
}

} // namespace sigchar
