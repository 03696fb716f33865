#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sigchar {

// A word in the alphabet {0..d-1}. Letters are stored zero-based; the text
// form used in files and on the command line is one-based ("12" = e1 e2).
using Word = std::vector<int>;

Word parse_word(std::string_view text);
std::string format_word(const Word &w);

// Number of words of length k over d letters, d^k.
std::size_t word_count(int width, int length);

// Canonical index of w among words of its length: sum_j w_j d^(k-1-j).
std::size_t word_index(int width, const Word &w);
Word word_from_index(int width, int length, std::size_t index);

/**
 * Element of the truncated tensor algebra T^n(R^d).
 *
 * Level k holds d^k coefficients in canonical word order; all levels live in
 * one contiguous buffer. Width and depth are fixed at construction and every
 * binary operation requires them to match.
 */
class Tensor {
public:
  Tensor() = default;

  // The zero element of T^n(R^d).
  Tensor(int width, int depth);

  // Builds from explicit levels; levels.size() must be depth + 1 and level k
  // must have d^k finite entries.
  static Tensor from_levels(int width, const std::vector<std::vector<double>> &levels);

  static Tensor zero(int width, int depth) { return Tensor(width, depth); }
  static Tensor unit(int width, int depth);
  // c * e_letter (letter is zero-based).
  static Tensor letter(int width, int depth, int letter, double c = 1.0);
  // c * e_w for an arbitrary word of length <= depth.
  static Tensor word(int width, int depth, const Word &w, double c = 1.0);
  // sum_i v_i e_i.
  static Tensor vector(int depth, std::span<const double> v);

  int width() const noexcept { return width_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const double> level(int k) const;
  std::span<double> level(int k);
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  double operator[](const Word &w) const;
  double &operator[](const Word &w);

  // Coefficient of the empty word.
  double scalar() const noexcept { return data_.empty() ? 0.0 : data_[0]; }

  bool same_shape(const Tensor &other) const noexcept {
    return width_ == other.width_ && depth_ == other.depth_;
  }

  // Same coefficients, truncated or zero-padded to a new depth.
  Tensor with_depth(int depth) const;

  // Keeps only level k (other levels zero).
  Tensor homogeneous_part(int k) const;

  Tensor &operator+=(const Tensor &rhs);
  Tensor &operator-=(const Tensor &rhs);
  Tensor &operator*=(double s);

  friend bool operator==(const Tensor &a, const Tensor &b) = default;

private:
  std::size_t offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }
  void check_finite() const;

  int width_ = 0;
  int depth_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<double> data_;
};

Tensor operator+(Tensor a, const Tensor &b);
Tensor operator-(Tensor a, const Tensor &b);
Tensor operator-(Tensor a);
Tensor operator*(double s, Tensor a);
Tensor operator*(Tensor a, double s);

// Truncated product: level k of the result is sum_{i+j=k} a^i (x) b^j.
Tensor mul(const Tensor &a, const Tensor &b);
Tensor operator*(const Tensor &a, const Tensor &b);

// Truncated exponential; requires x^0 == 0.
Tensor exp(const Tensor &x);
// Truncated logarithm; requires g^0 == 1.
Tensor log(const Tensor &g);

// Word reversal with sign (-1)^|w|.
Tensor antipode(const Tensor &x);

// Multiplicative inverse by Neumann series; requires x^0 != 0.
Tensor inverse(const Tensor &x);

// Level k scaled by lambda^k.
Tensor dilate(double lambda, const Tensor &x);

// ab - ba.
Tensor lie_bracket(const Tensor &a, const Tensor &b);

// Largest absolute coefficient difference.
double max_abs_diff(const Tensor &a, const Tensor &b);

// l1 norm of level k, which is the projective norm for an l1 base norm.
double level_norm(const Tensor &x, int k);

struct LevelNormProfile {
  double scale = 1.0;
  // lambda^k * ||x^k||_1 for k = 0..n.
  std::vector<double> levels;
  // Running sums of `levels`; the last entry is the truncated exp(gamma)(x).
  std::vector<double> partial_sums;
  // levels[k]^(1/k) for k >= 1 (entry 0 is unused and set to 0). The
  // reciprocal of the limsup of this sequence is the radius R(x).
  std::vector<double> roots;

  double total() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
};

LevelNormProfile norm_profile(const Tensor &x, double lambda = 1.0);

} // namespace sigchar
