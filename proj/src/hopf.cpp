#include "sigchar/hopf.hpp"

#include <algorithm>
#include <cmath>

#include "sigchar/errors.hpp"

namespace sigchar {

namespace {

// Calls visit(index) once per interleaving of u and v, where index is the
// canonical level-(|u|+|v|) index of the interleaved word.
template <class Visit>
void for_each_shuffle(const Word &u, const Word &v, int width, std::size_t i, std::size_t j,
                      std::size_t prefix, Visit &&visit) {
  const auto d = static_cast<std::size_t>(width);
  if (i == u.size() && j == v.size()) {
    visit(prefix);
    return;
  }
  if (i < u.size()) for_each_shuffle(u, v, width, i + 1, j, prefix * d + static_cast<std::size_t>(u[i]), visit);
  if (j < v.size()) for_each_shuffle(u, v, width, i, j + 1, prefix * d + static_cast<std::size_t>(v[j]), visit);
}

void check_letters(int width, const Word &w) {
  for (int l : w) {
    if (l < 0 || l >= width) throw RangeError("letter outside alphabet");
  }
}

} // namespace

WordPolynomial WordPolynomial::word(int width, const Word &w, double c) {
  WordPolynomial p(width);
  p.add(w, c);
  return p;
}

double WordPolynomial::coefficient(const Word &w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0.0 : it->second;
}

void WordPolynomial::add(const Word &w, double c) {
  check_letters(width_, w);
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int WordPolynomial::degree() const {
  int deg = -1;
  for (const auto &[w, c] : terms_) deg = std::max(deg, static_cast<int>(w.size()));
  return deg;
}

WordPolynomial &WordPolynomial::operator+=(const WordPolynomial &rhs) {
  if (rhs.width_ != width_) throw DimensionError("word polynomial width mismatch");
  for (const auto &[w, c] : rhs.terms_) add(w, c);
  return *this;
}

WordPolynomial &WordPolynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto &[w, c] : terms_) c *= s;
  return *this;
}

WordPolynomial operator+(WordPolynomial a, const WordPolynomial &b) { return a += b; }
WordPolynomial operator*(double s, WordPolynomial a) { return a *= s; }

WordPolynomial shuffle(int width, const Word &u, const Word &v) {
  check_letters(width, u);
  check_letters(width, v);
  WordPolynomial out(width);
  const int len = static_cast<int>(u.size() + v.size());
  for_each_shuffle(u, v, width, 0, 0, 0, [&](std::size_t idx) {
    out.add(word_from_index(width, len, idx), 1.0);
  });
  return out;
}

WordPolynomial shuffle(const WordPolynomial &f, const WordPolynomial &h) {
  if (f.width() != h.width()) throw DimensionError("shuffle: width mismatch");
  WordPolynomial out(f.width());
  for (const auto &[u, a] : f.terms()) {
    for (const auto &[v, b] : h.terms()) {
      WordPolynomial s = shuffle(f.width(), u, v);
      s *= a * b;
      out += s;
    }
  }
  return out;
}

double pair(const WordPolynomial &f, const Tensor &x) {
  if (f.width() != x.width()) throw DimensionError("pair: width mismatch");
  double s = 0.0;
  for (const auto &[w, c] : f.terms()) {
    if (static_cast<int>(w.size()) > x.depth()) {
      throw RangeError("pair: word '" + format_word(w) + "' is longer than the tensor depth");
    }
    s += c * x[w];
  }
  return s;
}

double shuffle_pair(const Word &u, const Word &v, const Tensor &x) {
  const int len = static_cast<int>(u.size() + v.size());
  if (len > x.depth()) throw RangeError("shuffle_pair: combined length exceeds depth");
  check_letters(x.width(), u);
  check_letters(x.width(), v);
  auto lvl = x.level(len);
  double s = 0.0;
  for_each_shuffle(u, v, x.width(), 0, 0, 0, [&](std::size_t idx) { s += lvl[idx]; });
  return s;
}

GroupLikeCertificate is_group_like(const Tensor &g, double tol) {
  GroupLikeCertificate cert;
  const double scalar_residual = std::abs(g.scalar() - 1.0);
  cert.worst_residual = scalar_residual;
  if (!(scalar_residual <= tol)) return cert;
  const int d = g.width();
  const int n = g.depth();
  for (int a = 1; 2 * a <= n; ++a) {
    auto lvl_a = g.level(a);
    for (int b = a; a + b <= n; ++b) {
      auto lvl_b = g.level(b);
      for (std::size_t iu = 0; iu < lvl_a.size(); ++iu) {
        const Word u = word_from_index(d, a, iu);
        // For a == b the pair (u, v) and (v, u) give the same identity.
        const std::size_t v_start = (a == b) ? iu : 0;
        for (std::size_t iv = v_start; iv < lvl_b.size(); ++iv) {
          const Word v = word_from_index(d, b, iv);
          const double r = std::abs(shuffle_pair(u, v, g) - lvl_a[iu] * lvl_b[iv]);
          ++cert.pairs_tested;
          if (r > cert.worst_residual) {
            cert.worst_residual = r;
            cert.worst_left = u;
            cert.worst_right = v;
          }
        }
      }
    }
  }
  cert.group_like = cert.worst_residual <= tol;
  return cert;
}

double coproduct_level_norm(const Tensor &x, int k) {
  if (k < 0 || k > x.depth()) throw RangeError("coproduct_level_norm: level outside depth");
  const int d = x.width();
  double total = 0.0;
  for (int a = 0; a <= k; ++a) {
    const int b = k - a;
    const std::size_t nu = word_count(d, a);
    const std::size_t nv = word_count(d, b);
    for (std::size_t iu = 0; iu < nu; ++iu) {
      const Word u = word_from_index(d, a, iu);
      for (std::size_t iv = 0; iv < nv; ++iv) {
        total += std::abs(shuffle_pair(u, word_from_index(d, b, iv), x));
      }
    }
  }
  return total;
}

} // namespace sigchar
