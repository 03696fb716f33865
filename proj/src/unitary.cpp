#include "sigchar/unitary.hpp"

#include <cmath>
#include <string>

#include "sigchar/errors.hpp"

namespace sigchar {

namespace {

constexpr Complex kI{0.0, 1.0};

bool is_anti_hermitian(const ComplexMatrix &a, double tol) {
  return a.rows() == a.cols() && max_abs(a + a.adjoint()) <= tol;
}

void check_finite(const ComplexMatrix &a) {
  if (!a.allFinite()) throw NumericError("matrix has non-finite entries");
}

ComplexMatrix exp_scaling_squaring(const ComplexMatrix &a) {
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const ComplexMatrix b = a / std::ldexp(1.0, squarings);
  const auto n = a.rows();
  ComplexMatrix result = ComplexMatrix::Identity(n, n);
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * b / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-17 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

} // namespace

LinearRep::LinearRep(std::vector<ComplexMatrix> generators, double tol) : generators_(std::move(generators)) {
  if (generators_.empty()) throw DomainError("representation needs at least one generator");
  const auto h = generators_.front().rows();
  if (h < 1) throw DomainError("representation dimension must be positive");
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const auto &a = generators_[i];
    if (a.rows() != h || a.cols() != h) throw DimensionError("generators must share one square shape");
    check_finite(a);
    if (!is_anti_hermitian(a, tol)) {
      throw DomainError("generator " + std::to_string(i + 1) + " is not anti-Hermitian");
    }
  }
}

double LinearRep::norm() const {
  double n = 0.0;
  for (const auto &a : generators_) n = std::max(n, operator_norm(a));
  return n;
}

LinearRep LinearRep::scaled(double lambda) const {
  std::vector<ComplexMatrix> g;
  g.reserve(generators_.size());
  for (const auto &a : generators_) g.push_back(lambda * a);
  return LinearRep(std::move(g));
}

LinearRep LinearRep::conjugated(const ComplexMatrix &w) const {
  if (w.rows() != dim() || w.cols() != dim()) throw DimensionError("conjugated: matrix size does not match");
  if (unitarity_defect(w) > 1e-10) throw DomainError("conjugated: matrix is not unitary");
  std::vector<ComplexMatrix> g;
  g.reserve(generators_.size());
  for (const auto &a : generators_) g.push_back(w.adjoint() * a * w);
  return LinearRep(std::move(g), 1e-10);
}

SymplecticRep::SymplecticRep(LinearRep rep, double tol) : rep_(std::move(rep)) {
  if (rep_.dim() % 2 != 0) throw DimensionError("symplectic representation needs even dimension");
  for (const auto &a : rep_.generators()) {
    if (!in_sp(a, tol)) throw DomainError("generator is not in sp(m)");
  }
}

ComplexMatrix symplectic_form(int m) {
  ComplexMatrix j = ComplexMatrix::Zero(2 * m, 2 * m);
  j.topRightCorner(m, m).setIdentity();
  j.bottomLeftCorner(m, m) = -ComplexMatrix::Identity(m, m);
  return j;
}

ComplexMatrix symplectic_involution(const ComplexMatrix &u) {
  if (u.rows() % 2 != 0) throw DimensionError("symplectic involution needs even dimension");
  const ComplexMatrix j = symplectic_form(static_cast<int>(u.rows() / 2));
  return j.transpose() * u.transpose() * j;
}

bool in_sp(const ComplexMatrix &u, double tol) {
  if (u.rows() != u.cols() || u.rows() % 2 != 0) return false;
  return max_abs(u + u.adjoint()) <= tol && max_abs(symplectic_involution(u) + u) <= tol;
}

std::array<ComplexMatrix, 3> su2_basis() {
  ComplexMatrix u1(2, 2), u2(2, 2), u3(2, 2);
  u1 << 0.0, 0.5 * kI, 0.5 * kI, 0.0;
  u2 << 0.0, -0.5, 0.5, 0.0;
  u3 << 0.5 * kI, 0.0, 0.0, -0.5 * kI;
  return {u1, u2, u3};
}

std::vector<ComplexMatrix> sp_basis(int m) {
  if (m < 1) throw DomainError("sp(m) requires m >= 1");
  std::vector<ComplexMatrix> basis;
  auto block = [m](const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix u(2 * m, 2 * m);
    u.topLeftCorner(m, m) = a;
    u.topRightCorner(m, m) = b;
    u.bottomLeftCorner(m, m) = -b.conjugate();
    u.bottomRightCorner(m, m) = a.conjugate();
    return u;
  };
  const ComplexMatrix zero = ComplexMatrix::Zero(m, m);
  // A: anti-Hermitian part, m^2 real dimensions.
  for (int p = 0; p < m; ++p) {
    ComplexMatrix a = zero;
    a(p, p) = kI;
    basis.push_back(block(a, zero));
  }
  for (int p = 0; p < m; ++p) {
    for (int q = p + 1; q < m; ++q) {
      ComplexMatrix a = zero;
      a(p, q) = 1.0;
      a(q, p) = -1.0;
      basis.push_back(block(a, zero));
      a(p, q) = kI;
      a(q, p) = kI;
      basis.push_back(block(a, zero));
    }
  }
  // B: complex symmetric part, m(m+1) real dimensions.
  for (int p = 0; p < m; ++p) {
    for (int q = p; q < m; ++q) {
      ComplexMatrix b = zero;
      b(p, q) = 1.0;
      b(q, p) = 1.0;
      basis.push_back(block(zero, b));
      b(p, q) = kI;
      b(q, p) = kI;
      basis.push_back(block(zero, b));
    }
  }
  return basis;
}

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) { return a * b - b * a; }

HermitianEigen hermitian_eigen(const ComplexMatrix &h_in) {
  if (h_in.rows() != h_in.cols()) throw DimensionError("eigensolver needs a square matrix");
  check_finite(h_in);
  const auto n = h_in.rows();
  ComplexMatrix h = 0.5 * (h_in + h_in.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double scale = h.norm();
  HermitianEigen out;
  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = 0; q < n; ++q) {
        if (p != q) s += std::norm(h(p, q));
      }
    }
    return std::sqrt(s);
  };
  const double threshold = 1e-13 * scale;
  while (off_norm() > threshold) {
    if (++out.sweeps > 100) throw NumericError("Jacobi eigensolver did not converge");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex c = h(p, q);
        const double mag = std::abs(c);
        if (mag == 0.0) continue;
        // J = D R with D = diag(1, e^{-i phi}) making the (p,q) entry real and
        // R a real Givens rotation zeroing it.
        const Complex phase = c / mag;
        const double a = h(p, p).real();
        const double b = h(q, q).real();
        const double theta = (b - a) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        const Complex jpp = cs;
        const Complex jpq = sn;
        const Complex jqp = -sn * std::conj(phase);
        const Complex jqq = cs * std::conj(phase);
        // h <- h J
        for (Eigen::Index r = 0; r < n; ++r) {
          const Complex hp = h(r, p);
          const Complex hq = h(r, q);
          h(r, p) = hp * jpp + hq * jqp;
          h(r, q) = hp * jpq + hq * jqq;
        }
        // h <- J^* h
        for (Eigen::Index r = 0; r < n; ++r) {
          const Complex hp = h(p, r);
          const Complex hq = h(q, r);
          h(p, r) = std::conj(jpp) * hp + std::conj(jqp) * hq;
          h(q, r) = std::conj(jpq) * hp + std::conj(jqq) * hq;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        h(p, p) = h(p, p).real();
        h(q, q) = h(q, q).real();
        for (Eigen::Index r = 0; r < n; ++r) {
          const Complex vp = v(r, p);
          const Complex vq = v(r, q);
          v(r, p) = vp * jpp + vq * jqp;
          v(r, q) = vp * jpq + vq * jqq;
        }
      }
    }
  }
  out.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.values(i) = h(i, i).real();
  out.vectors = std::move(v);
  return out;
}

ComplexMatrix mat_exp(const ComplexMatrix &a) {
  if (a.rows() != a.cols()) throw DimensionError("mat_exp needs a square matrix");
  check_finite(a);
  const auto n = a.rows();
  if (n == 0) return a;
  const double scale = std::max(1.0, max_abs(a));
  if (is_anti_hermitian(a, 1e-12 * scale)) {
    // A = -i H with H = iA Hermitian, so exp(A) = V diag(e^{-i lambda}) V^*.
    const HermitianEigen eig = hermitian_eigen(kI * a);
    Eigen::VectorXcd phases(n);
    for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::exp(-kI * eig.values(i));
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  }
  return exp_scaling_squaring(a);
}

double operator_norm(const ComplexMatrix &a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

double max_abs(const ComplexMatrix &a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double unitarity_defect(const ComplexMatrix &u) {
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

ComplexMatrix apply(const LinearRep &rep, std::span<const double> v) {
  if (static_cast<int>(v.size()) != rep.width()) throw DimensionError("apply: vector width does not match representation");
  ComplexMatrix out = ComplexMatrix::Zero(rep.dim(), rep.dim());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) out += v[i] * rep.generators()[i];
  }
  return out;
}

namespace {

struct TruncatedWalk {
  const LinearRep &rep;
  const Tensor &x;
  // live[k][i]: some coefficient at or below word i of level k is non-zero
  std::vector<std::vector<char>> live;
  std::vector<ComplexMatrix> stack;
  ComplexMatrix out;

  void visit(int level, std::size_t idx) {
    const int d = x.width();
    for (int a = 0; a < d; ++a) {
      const std::size_t child = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(a);
      if (!live[static_cast<std::size_t>(level + 1)][child]) continue;
      auto &p = stack[static_cast<std::size_t>(level + 1)];
      p.noalias() = stack[static_cast<std::size_t>(level)] * rep.generators()[static_cast<std::size_t>(a)];
      const double c = x.level(level + 1)[child];
      if (c != 0.0) out += c * p;
      if (level + 1 < x.depth()) visit(level + 1, child);
    }
  }
};

} // namespace

ComplexMatrix evaluate_truncated(const LinearRep &rep, const Tensor &x) {
  if (x.width() != rep.width()) throw DimensionError("evaluate_truncated: tensor width does not match representation");
  const int h = rep.dim();
  const int n = x.depth();
  const auto d = static_cast<std::size_t>(x.width());
  TruncatedWalk walk{rep, x, {}, {}, x.scalar() * ComplexMatrix::Identity(h, h)};
  if (n == 0) return walk.out;
  walk.live.resize(static_cast<std::size_t>(n) + 1);
  for (int k = n; k >= 1; --k) {
    auto lvl = x.level(k);
    auto &mask = walk.live[static_cast<std::size_t>(k)];
    mask.assign(lvl.size(), 0);
    for (std::size_t i = 0; i < lvl.size(); ++i) {
      bool nz = lvl[i] != 0.0;
      if (!nz && k < n) {
        const auto &below = walk.live[static_cast<std::size_t>(k) + 1];
        for (std::size_t b = 0; b < d && !nz; ++b) nz = below[i * d + b] != 0;
      }
      mask[i] = nz ? 1 : 0;
    }
  }
  walk.stack.assign(static_cast<std::size_t>(n) + 1, ComplexMatrix::Identity(h, h));
  walk.visit(0, 0);
  return walk.out;
}

ComplexMatrix develop(const PiecewiseLinearPath &path, const LinearRep &rep) {
  if (path.width() != rep.width()) throw DimensionError("develop: path width does not match representation");
  ComplexMatrix u = ComplexMatrix::Identity(rep.dim(), rep.dim());
  for (std::size_t j = 0; j < path.num_segments(); ++j) {
    const std::vector<double> dx = path.increment(j);
    u = u * mat_exp(sigchar::apply(rep, dx));
  }
  return u;
}

ComplexMatrix ExpCache::exp_of(std::span<const double> v) {
  std::vector<double> key(v.begin(), v.end());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  ComplexMatrix e = mat_exp(sigchar::apply(*rep_, v));
  if (cache_.size() < capacity_) cache_.emplace(std::move(key), e);
  return e;
}

ComplexMatrix ExpCache::develop(const PiecewiseLinearPath &path) {
  if (path.width() != rep_->width()) throw DimensionError("develop: path width does not match representation");
  ComplexMatrix u = ComplexMatrix::Identity(rep_->dim(), rep_->dim());
  for (std::size_t j = 0; j < path.num_segments(); ++j) {
    const std::vector<double> dx = path.increment(j);
    u = u * exp_of(dx);
  }
  return u;
}

Complex matrix_coefficient(const LinearRep &rep, const ComplexVector &u, const ComplexVector &v, const Tensor &x) {
  if (u.size() != rep.dim() || v.size() != rep.dim()) throw DimensionError("matrix_coefficient: vector size does not match");
  if (!u.allFinite() || !v.allFinite()) throw NumericError("matrix_coefficient: non-finite vector");
  return v.dot(evaluate_truncated(rep, x) * u);
}

double truncation_tail_bound(double rep_norm, double length, int depth) {
  const double z = rep_norm * length;
  // sum_{k>n} z^k/k! = e^z - sum_{k<=n} z^k/k!, summed directly to avoid
  // cancellation.
  double term = 1.0;
  for (int k = 1; k <= depth; ++k) term *= z / k;
  double tail = 0.0;
  for (int k = depth + 1; k < depth + 400; ++k) {
    term *= z / k;
    tail += term;
    if (term <= 1e-18 * tail) break;
  }
  return tail;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

LinearRep tensor_product(const LinearRep &a, const LinearRep &b) {
  if (a.width() != b.width()) throw DimensionError("tensor_product: width mismatch");
  const auto ia = ComplexMatrix::Identity(a.dim(), a.dim());
  const auto ib = ComplexMatrix::Identity(b.dim(), b.dim());
  std::vector<ComplexMatrix> g;
  for (int i = 0; i < a.width(); ++i) g.push_back(kron(a.generator(i), ib) + kron(ia, b.generator(i)));
  return LinearRep(std::move(g));
}

LinearRep dual(const LinearRep &rep) {
  std::vector<ComplexMatrix> g;
  for (const auto &a : rep.generators()) g.push_back(a.conjugate());
  return LinearRep(std::move(g));
}

} // namespace sigchar
