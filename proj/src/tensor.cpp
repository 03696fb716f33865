#include "sigchar/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sigchar/errors.hpp"

namespace sigchar {

namespace {

void require_same_shape(const Tensor &a, const Tensor &b, const char *op) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch (width " + std::to_string(a.width()) +
                         ", depth " + std::to_string(a.depth()) + ") vs (width " +
                         std::to_string(b.width()) + ", depth " + std::to_string(b.depth()) + ")");
  }
}

// out^k += a^i (x) b^j for every i + j = k, k <= depth.
void accumulate_product(const Tensor &a, const Tensor &b, Tensor &out) {
  const int n = out.depth();
  for (int k = 0; k <= n; ++k) {
    auto dst = out.level(k);
    for (int i = 0; i <= k; ++i) {
      const int j = k - i;
      auto lhs = a.level(i);
      auto rhs = b.level(j);
      const std::size_t block = rhs.size();
      for (std::size_t p = 0; p < lhs.size(); ++p) {
        const double c = lhs[p];
        if (c == 0.0) continue;
        double *row = dst.data() + p * block;
        for (std::size_t q = 0; q < block; ++q) row[q] += c * rhs[q];
      }
    }
  }
}

} // namespace

Word parse_word(std::string_view text) {
  Word w;
  w.reserve(text.size());
  for (char ch : text) {
    if (ch < '1' || ch > '9') throw ValidationError("invalid word letter '" + std::string(1, ch) + "'");
    w.push_back(ch - '1');
  }
  return w;
}

std::string format_word(const Word &w) {
  std::string s;
  s.reserve(w.size());
  for (int letter : w) {
    if (letter < 0 || letter > 8) throw RangeError("letter cannot be written as a single digit");
    s.push_back(static_cast<char>('1' + letter));
  }
  return s;
}

std::size_t word_count(int width, int length) {
  std::size_t n = 1;
  for (int i = 0; i < length; ++i) n *= static_cast<std::size_t>(width);
  return n;
}

std::size_t word_index(int width, const Word &w) {
  std::size_t idx = 0;
  for (int letter : w) {
    if (letter < 0 || letter >= width) throw RangeError("letter outside alphabet");
    idx = idx * static_cast<std::size_t>(width) + static_cast<std::size_t>(letter);
  }
  return idx;
}

Word word_from_index(int width, int length, std::size_t index) {
  Word w(static_cast<std::size_t>(length));
  for (int j = length - 1; j >= 0; --j) {
    w[static_cast<std::size_t>(j)] = static_cast<int>(index % static_cast<std::size_t>(width));
    index /= static_cast<std::size_t>(width);
  }
  return w;
}

Tensor::Tensor(int width, int depth) : width_(width), depth_(depth) {
  if (width < 1) throw DomainError("tensor width must be positive");
  if (depth < 0) throw DomainError("tensor depth must be non-negative");
  offsets_.resize(static_cast<std::size_t>(depth) + 2);
  offsets_[0] = 0;
  for (int k = 0; k <= depth; ++k) {
    offsets_[static_cast<std::size_t>(k) + 1] = offsets_[static_cast<std::size_t>(k)] + word_count(width, k);
  }
  data_.assign(offsets_.back(), 0.0);
}

Tensor Tensor::from_levels(int width, const std::vector<std::vector<double>> &levels) {
  if (levels.empty()) throw DimensionError("tensor needs at least level 0");
  Tensor t(width, static_cast<int>(levels.size()) - 1);
  for (int k = 0; k <= t.depth(); ++k) {
    const auto &src = levels[static_cast<std::size_t>(k)];
    auto dst = t.level(k);
    if (src.size() != dst.size()) {
      throw DimensionError("level " + std::to_string(k) + " has " + std::to_string(src.size()) +
                           " entries, expected " + std::to_string(dst.size()));
    }
    std::copy(src.begin(), src.end(), dst.begin());
  }
  t.check_finite();
  return t;
}

Tensor Tensor::unit(int width, int depth) {
  Tensor t(width, depth);
  t.data_[0] = 1.0;
  return t;
}

Tensor Tensor::letter(int width, int depth, int letter, double c) {
  return word(width, depth, Word{letter}, c);
}

Tensor Tensor::word(int width, int depth, const Word &w, double c) {
  Tensor t(width, depth);
  t[w] = c;
  return t;
}

Tensor Tensor::vector(int depth, std::span<const double> v) {
  Tensor t(static_cast<int>(v.size()), depth);
  if (depth >= 1) std::copy(v.begin(), v.end(), t.level(1).begin());
  t.check_finite();
  return t;
}

std::span<const double> Tensor::level(int k) const {
  if (k < 0 || k > depth_) throw RangeError("level " + std::to_string(k) + " outside depth");
  return {data_.data() + offset(k), offset(k + 1) - offset(k)};
}

std::span<double> Tensor::level(int k) {
  if (k < 0 || k > depth_) throw RangeError("level " + std::to_string(k) + " outside depth");
  return {data_.data() + offset(k), offset(k + 1) - offset(k)};
}

double Tensor::operator[](const Word &w) const {
  const int k = static_cast<int>(w.size());
  if (k > depth_) throw RangeError("word longer than tensor depth");
  return data_[offset(k) + word_index(width_, w)];
}

double &Tensor::operator[](const Word &w) {
  const int k = static_cast<int>(w.size());
  if (k > depth_) throw RangeError("word longer than tensor depth");
  return data_[offset(k) + word_index(width_, w)];
}

Tensor Tensor::with_depth(int depth) const {
  Tensor t(width_, depth);
  const std::size_t n = std::min(t.data_.size(), data_.size());
  std::copy_n(data_.begin(), n, t.data_.begin());
  return t;
}

Tensor Tensor::homogeneous_part(int k) const {
  Tensor t(width_, depth_);
  auto src = level(k);
  std::copy(src.begin(), src.end(), t.level(k).begin());
  return t;
}

Tensor &Tensor::operator+=(const Tensor &rhs) {
  require_same_shape(*this, rhs, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Tensor &Tensor::operator-=(const Tensor &rhs) {
  require_same_shape(*this, rhs, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Tensor &Tensor::operator*=(double s) {
  for (double &c : data_) c *= s;
  return *this;
}

void Tensor::check_finite() const {
  for (double c : data_) {
    if (!std::isfinite(c)) throw NumericError("tensor coefficient is not finite");
  }
}

Tensor operator+(Tensor a, const Tensor &b) { return a += b; }
Tensor operator-(Tensor a, const Tensor &b) { return a -= b; }
Tensor operator-(Tensor a) { return a *= -1.0; }
Tensor operator*(double s, Tensor a) { return a *= s; }
Tensor operator*(Tensor a, double s) { return a *= s; }

Tensor mul(const Tensor &a, const Tensor &b) {
  require_same_shape(a, b, "mul");
  Tensor out(a.width(), a.depth());
  accumulate_product(a, b, out);
  return out;
}

Tensor operator*(const Tensor &a, const Tensor &b) { return mul(a, b); }

Tensor exp(const Tensor &x) {
  if (x.scalar() != 0.0) throw DomainError("exp requires a zero scalar part");
  const int n = x.depth();
  // Horner: 1 + x(1 + x/2(1 + x/3(...)))
  Tensor result = Tensor::unit(x.width(), n);
  for (int k = n; k >= 1; --k) {
    Tensor next = mul(x, result);
    next *= 1.0 / static_cast<double>(k);
    next.data()[0] += 1.0;
    result = std::move(next);
  }
  return result;
}

Tensor log(const Tensor &g) {
  if (std::abs(g.scalar() - 1.0) > 1e-12) throw DomainError("log requires scalar part 1");
  const int n = g.depth();
  Tensor y = g;
  y.data()[0] = 0.0;
  if (n == 0) return Tensor(g.width(), 0);
  // sum_{k=1..n} c_k y^k with c_k = (-1)^(k+1)/k, as y(c_1 + y(c_2 + ... y c_n)).
  auto coeff = [](int k) { return (k % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(k); };
  Tensor result = Tensor::unit(g.width(), n) * coeff(n);
  for (int k = n - 1; k >= 1; --k) {
    Tensor next = mul(y, result);
    next.data()[0] += coeff(k);
    result = std::move(next);
  }
  return mul(y, result);
}

Tensor antipode(const Tensor &x) {
  Tensor out(x.width(), x.depth());
  const int d = x.width();
  for (int k = 0; k <= x.depth(); ++k) {
    auto src = x.level(k);
    auto dst = out.level(k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t idx = 0; idx < src.size(); ++idx) {
      // reverse the base-d digits of idx
      std::size_t rest = idx;
      std::size_t rev = 0;
      for (int j = 0; j < k; ++j) {
        rev = rev * static_cast<std::size_t>(d) + rest % static_cast<std::size_t>(d);
        rest /= static_cast<std::size_t>(d);
      }
      dst[rev] = sign * src[idx];
    }
  }
  return out;
}

Tensor inverse(const Tensor &x) {
  const double x0 = x.scalar();
  if (x0 == 0.0) throw DomainError("tensor with zero scalar part is not invertible");
  const int n = x.depth();
  // x = x0 (1 + y) with y^0 = 0, so x^-1 = x0^-1 sum_k (-y)^k.
  Tensor minus_y = x * (-1.0 / x0);
  minus_y.data()[0] = 0.0;
  Tensor result = Tensor::unit(x.width(), n);
  for (int k = 0; k < n; ++k) {
    Tensor next = mul(minus_y, result);
    next.data()[0] += 1.0;
    result = std::move(next);
  }
  result *= 1.0 / x0;
  return result;
}

Tensor dilate(double lambda, const Tensor &x) {
  Tensor out = x;
  double factor = 1.0;
  for (int k = 0; k <= x.depth(); ++k) {
    for (double &c : out.level(k)) c *= factor;
    factor *= lambda;
  }
  return out;
}

Tensor lie_bracket(const Tensor &a, const Tensor &b) {
  require_same_shape(a, b, "lie_bracket");
  Tensor out = mul(a, b);
  out -= mul(b, a);
  return out;
}

double max_abs_diff(const Tensor &a, const Tensor &b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
  return m;
}

double level_norm(const Tensor &x, int k) {
  double s = 0.0;
  for (double c : x.level(k)) s += std::abs(c);
  return s;
}

LevelNormProfile norm_profile(const Tensor &x, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("norm_profile requires lambda >= 0");
  LevelNormProfile p;
  p.scale = lambda;
  const int n = x.depth();
  p.levels.resize(static_cast<std::size_t>(n) + 1);
  p.partial_sums.resize(static_cast<std::size_t>(n) + 1);
  p.roots.assign(static_cast<std::size_t>(n) + 1, 0.0);
  double factor = 1.0;
  double running = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double v = factor * level_norm(x, k);
    p.levels[static_cast<std::size_t>(k)] = v;
    running += v;
    p.partial_sums[static_cast<std::size_t>(k)] = running;
    if (k >= 1) p.roots[static_cast<std::size_t>(k)] = std::pow(v, 1.0 / k);
    factor *= lambda;
  }
  return p;
}

} // namespace sigchar
