#pragma once

#include <array>
#include <complex>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sigchar/path.hpp"
#include "sigchar/tensor.hpp"

namespace sigchar {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/**
 * Linear map M : R^d -> u(H) given by anti-Hermitian generators A_1..A_d.
 *
 * The extension of M to an algebra homomorphism on tensors sends the word
 * e_{i1}...e_{ik} to A_{i1}...A_{ik}.
 */
class LinearRep {
public:
  LinearRep() = default;
  // Throws DomainError unless every generator is square, of a common size and
  // satisfies max|A + A*| <= tol.
  explicit LinearRep(std::vector<ComplexMatrix> generators, double tol = 1e-12);

  int width() const noexcept { return static_cast<int>(generators_.size()); }
  int dim() const noexcept { return generators_.empty() ? 0 : static_cast<int>(generators_.front().rows()); }
  const std::vector<ComplexMatrix> &generators() const noexcept { return generators_; }
  const ComplexMatrix &generator(int i) const { return generators_.at(static_cast<std::size_t>(i)); }

  // max_i ||A_i||_op.
  double norm() const;

  LinearRep scaled(double lambda) const;
  // Generators W* A_i W for a unitary W.
  LinearRep conjugated(const ComplexMatrix &w) const;

private:
  std::vector<ComplexMatrix> generators_;
};

/// A LinearRep whose generators lie in sp(m) = { u in u(C^2m) : u^s + u = 0 },
/// u^s = J^T u^T J with J = [[0, I_m], [-I_m, 0]].
class SymplecticRep {
public:
  explicit SymplecticRep(LinearRep rep, double tol = 1e-10);

  int m() const noexcept { return rep_.dim() / 2; }
  const LinearRep &rep() const noexcept { return rep_; }

private:
  LinearRep rep_;
};

// Symplectic form J = [[0, I], [-I, 0]] of size 2m.
ComplexMatrix symplectic_form(int m);
// u^s = J^T u^T J.
ComplexMatrix symplectic_involution(const ComplexMatrix &u);
bool in_sp(const ComplexMatrix &u, double tol = 1e-10);

// u1 = (i/2) sigma_1, u2 = -(i/2) sigma_2, u3 = (i/2) sigma_3, so that
// [u1,u2] = u3, [u2,u3] = u1, [u3,u1] = u2 and exp(t u3) = diag(e^{it/2}, e^{-it/2}).
std::array<ComplexMatrix, 3> su2_basis();

// Real basis of sp(m), m(2m+1) elements of the block form
// [[A, B], [-conj(B), conj(A)]], A anti-Hermitian, B complex symmetric.
std::vector<ComplexMatrix> sp_basis(int m);

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b);

struct HermitianEigen {
  Eigen::VectorXd values;
  ComplexMatrix vectors; // columns, unitary
  int sweeps = 0;
};

// Cyclic complex Jacobi. Stops once the off-diagonal Frobenius norm is at
// most 1e-13 ||H||_F; throws NumericError if that fails within 100 sweeps.
HermitianEigen hermitian_eigen(const ComplexMatrix &h);

// Matrix exponential. Anti-Hermitian input goes through the eigensolver on
// iA and the result is unitary; other input uses scaling and squaring.
ComplexMatrix mat_exp(const ComplexMatrix &a);

// Spectral norm.
double operator_norm(const ComplexMatrix &a);
double max_abs(const ComplexMatrix &a);
double unitarity_defect(const ComplexMatrix &u);

// sum_i v_i A_i. Call as sigchar::apply when the argument is a std:: type,
// otherwise std::apply is found by argument-dependent lookup.
ComplexMatrix apply(const LinearRep &rep, std::span<const double> v);

// sum_{k<=n} sum_{|w|=k} x_w A_{w1}...A_{wk}.
ComplexMatrix evaluate_truncated(const LinearRep &rep, const Tensor &x);

// Cartan development: ordered product of exp(M(dx_j)) over the segments.
ComplexMatrix develop(const PiecewiseLinearPath &path, const LinearRep &rep);

// Memoises exp(M(v)) by increment, for paths that reuse a few step vectors.
// Cached and freshly computed exponentials are bit-identical.
class ExpCache {
public:
  explicit ExpCache(const LinearRep &rep, std::size_t capacity = 1024) : rep_(&rep), capacity_(capacity) {}

  ComplexMatrix exp_of(std::span<const double> v);
  ComplexMatrix develop(const PiecewiseLinearPath &path);

private:
  const LinearRep *rep_;
  std::size_t capacity_;
  std::map<std::vector<double>, ComplexMatrix> cache_;
};

// <M(x) u, v> = v^* M(x) u.
Complex matrix_coefficient(const LinearRep &rep, const ComplexVector &u, const ComplexVector &v, const Tensor &x);

// Bound sum_{k>n} (||M|| L)^k / k! on ||develop - evaluate_truncated(depth n)||.
double truncation_tail_bound(double rep_norm, double length, int depth);

// Tensor product representation with generators A (x) I + I (x) B.
LinearRep tensor_product(const LinearRep &a, const LinearRep &b);
// Dual (contragredient) representation with generators conj(A).
LinearRep dual(const LinearRep &rep);

// Kronecker product of two matrices.
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

} // namespace sigchar
