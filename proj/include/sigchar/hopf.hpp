#pragma once

#include <map>
#include <string>

#include "sigchar/tensor.hpp"

namespace sigchar {

/// Finitely supported linear functional on the word basis, i.e. a
/// non-commutative polynomial. Zero coefficients are never stored.
class WordPolynomial {
public:
  explicit WordPolynomial(int width) : width_(width) {}

  static WordPolynomial word(int width, const Word &w, double c = 1.0);
  // Empty word: the functional x -> x^0.
  static WordPolynomial unit(int width) { return word(width, Word{}); }

  int width() const noexcept { return width_; }
  const std::map<Word, double> &terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  double coefficient(const Word &w) const;
  void add(const Word &w, double c);

  // Longest word carrying a non-zero coefficient, or -1 for zero.
  int degree() const;

  WordPolynomial &operator+=(const WordPolynomial &rhs);
  WordPolynomial &operator*=(double s);

  friend bool operator==(const WordPolynomial &, const WordPolynomial &) = default;

private:
  int width_;
  std::map<Word, double> terms_;
};

WordPolynomial operator+(WordPolynomial a, const WordPolynomial &b);
WordPolynomial operator*(double s, WordPolynomial a);

// Bilinear extension of the riffle shuffle of words.
WordPolynomial shuffle(const WordPolynomial &f, const WordPolynomial &h);
WordPolynomial shuffle(int width, const Word &u, const Word &v);

// <f, x> = sum_w f_w x_w. Throws RangeError for a word longer than depth(x).
double pair(const WordPolynomial &f, const Tensor &x);

// <u ш v, x> without materialising the shuffle.
double shuffle_pair(const Word &u, const Word &v, const Tensor &x);

struct GroupLikeCertificate {
  bool group_like = false;
  // Worst residual |<u ш v, g> - <u, g><v, g>| over all tested pairs; for a
  // scalar part different from 1 this is |g^0 - 1| and the words are empty.
  double worst_residual = 0.0;
  Word worst_left;
  Word worst_right;
  std::size_t pairs_tested = 0;
};

/// Shuffle-pair test of Delta(g) = g (x) g at finite depth: g^0 must be 1 and
/// every pair of non-empty words with |u| <= |v| and |u| + |v| <= depth must
/// satisfy the character identity to within `tol`.
GroupLikeCertificate is_group_like(const Tensor &g, double tol = 1e-10);

// l1 norm of Delta(x^k) in the basis (e_u (x) e_v), computed through the
// shuffle dual: the (u, v) coefficient is <u ш v, x^k>.
double coproduct_level_norm(const Tensor &x, int k);

} // namespace sigchar
