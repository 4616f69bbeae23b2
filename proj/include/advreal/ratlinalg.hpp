#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "advreal/poly.hpp"
#include "advreal/rational.hpp"

namespace advreal {


struct RatMatrix {
  int rows = 0, cols = 0;
  std::vector<Rational> a;  // row-major

  RatMatrix() = default;
  RatMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, Rational(0)) {}
  static RatMatrix identity(int n) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  Rational& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Rational& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  bool is_symmetric() const {
    if (rows != cols) return false;
    for (int i = 0; i < rows; ++i)
      for (int j = i + 1; j < cols; ++j)
        if (at(i, j) != at(j, i)) return false;
    return true;
  }

  Rational max_abs_entry() const {
    Rational m(0);
    for (const auto& q : a) m = std::max(m, abs_rat(q));
    return m;
  }

  RatMatrix transpose() const {
    RatMatrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix product shape mismatch");
    RatMatrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k) {
        const Rational& v = x.at(i, k);
        if (v == 0) continue;
        for (int j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
      }
    return r;
  }
  friend RatMatrix operator+(const RatMatrix& x, const RatMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix sum shape");
    RatMatrix r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
  }
  friend RatMatrix operator-(const RatMatrix& x, const RatMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix diff shape");
    RatMatrix r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
  }
  friend RatMatrix operator*(const Rational& s, const RatMatrix& x) {
    RatMatrix r = x;
    for (auto& q : r.a) q *= s;
    return r;
  }
  friend bool operator==(const RatMatrix& x, const RatMatrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }

  RatVector apply(const RatVector& v) const {
    if (static_cast<int>(v.size()) != cols) throw std::invalid_argument("matvec shape");
    RatVector r(rows, Rational(0));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) r[i] += at(i, j) * v[j];
    return r;
  }
};

inline Rational dot(const RatVector& x, const RatVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot shape");
  Rational s(0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline Rational max_abs(const RatVector& v) {
  Rational m(0);
  for (const auto& q : v) m = std::max(m, abs_rat(q));
  return m;
}

struct RankCertificate {
  int rank = 0;
  std::vector<int> pivot_rows, pivot_cols;
};

// Fraction-free (Bareiss) elimination on a denominator-cleared copy; keeps
// intermediate growth polynomial instead of exponential.
inline RankCertificate rank_exact(const RatMatrix& m) {
  int n = m.rows, c = m.cols;
  std::vector<std::vector<BigInt>> b(n, std::vector<BigInt>(c));
  for (int i = 0; i < n; ++i) {
    BigInt l(1);
    for (int j = 0; j < c; ++j) l = lcm(l, denominator(m.at(i, j)));
    for (int j = 0; j < c; ++j)
      b[i][j] = numerator(m.at(i, j)) * (l / denominator(m.at(i, j)));
  }
  RankCertificate cert;
  std::vector<int> row_of(n);
  std::iota(row_of.begin(), row_of.end(), 0);
  BigInt prev(1);
  int r = 0;
  for (int col = 0; col < c && r < n; ++col) {
    int piv = -1;
    for (int i = r; i < n; ++i)
      if (b[i][col] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(b[r], b[piv]);
    std::swap(row_of[r], row_of[piv]);
    for (int i = r + 1; i < n; ++i) {
      for (int j = col + 1; j < c; ++j)
        b[i][j] = (b[r][col] * b[i][j] - b[i][col] * b[r][j]) / prev;
      b[i][col] = 0;
    }
    prev = b[r][col];
    cert.pivot_rows.push_back(row_of[r]);
    cert.pivot_cols.push_back(col);
    ++r;
  }
  cert.rank = r;
  return cert;
}

inline Rational det_exact(const RatMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("det of non-square matrix");
  int n = m.rows;
  RatMatrix b = m;
  Rational det(1);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (b.at(i, col) != 0) { piv = i; break; }
    if (piv < 0) return Rational(0);
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(b.at(col, j), b.at(piv, j));
      det = -det;
    }
    det *= b.at(col, col);
    for (int i = col + 1; i < n; ++i) {
      Rational f = b.at(i, col) / b.at(col, col);
      if (f == 0) continue;
      for (int j = col; j < n; ++j) b.at(i, j) -= f * b.at(col, j);
    }
  }
  return det;
}

// Exact kernel basis; pivots are the leftmost columns of the reduced echelon
// form, each remaining (free) column contributes one basis vector with its
// own coordinate set to 1 and the other free coordinates 0.
inline std::vector<RatVector> kernel_exact(const RatMatrix& m) {
  int n = m.rows, c = m.cols;
  RatMatrix b = m;
  std::vector<int> pivot_col_of_row;
  int r = 0;
  for (int col = 0; col < c && r < n; ++col) {
    int piv = -1;
    for (int i = r; i < n; ++i)
      if (b.at(i, col) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < c; ++j) std::swap(b.at(r, j), b.at(piv, j));
    Rational inv = Rational(1) / b.at(r, col);
    for (int j = col; j < c; ++j) b.at(r, j) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == r || b.at(i, col) == 0) continue;
      Rational f = b.at(i, col);
      for (int j = col; j < c; ++j) b.at(i, j) -= f * b.at(r, j);
    }
    pivot_col_of_row.push_back(col);
    ++r;
  }
  std::vector<bool> is_pivot(c, false);
  for (int pc : pivot_col_of_row) is_pivot[pc] = true;
  std::vector<RatVector> basis;
  for (int f = 0; f < c; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(c, Rational(0));
    v[f] = 1;
    for (int i = 0; i < r; ++i) v[pivot_col_of_row[i]] = -b.at(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Characteristic polynomial det(x I - A) by the Faddeev-LeVerrier recursion.
inline RatPoly charpoly_exact(const RatMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("charpoly of non-square matrix");
  int n = m.rows;
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1, Rational(0));
  c[n] = 1;
  RatMatrix mk(n, n);  // zero
  for (int k = 1; k <= n; ++k) {
    // M_k = A * (M_{k-1} + c_{n-k+1} I)
    if (k == 1) {
      mk = m;
    } else {
      for (int i = 0; i < n; ++i) mk.at(i, i) += c[n - k + 1];
      mk = m * mk;
    }
    Rational tr(0);
    for (int i = 0; i < n; ++i) tr += mk.at(i, i);
    c[n - k] = -tr / k;
  }
  return RatPoly(std::move(c));
}

// Indices (0-based) of the extreme points of the planar convex hull, sorted.
// Collinear non-vertex points are excluded. Points must be pairwise distinct.
inline std::vector<int> hull2d_exact(const std::vector<RatVector>& pts) {
  for (const auto& p : pts)
    if (p.size() != 2) throw std::invalid_argument("hull2d_exact expects 2-dimensional points");
  int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (pts[i] == pts[j]) throw std::invalid_argument("hull2d_exact: duplicate points");
  if (n <= 2) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    return pts[i][0] != pts[j][0] ? pts[i][0] < pts[j][0] : pts[i][1] < pts[j][1];
  });
  auto cross = [&](int o, int p, int q) {
    return (pts[p][0] - pts[o][0]) * (pts[q][1] - pts[o][1]) -
           (pts[p][1] - pts[o][1]) * (pts[q][0] - pts[o][0]);
  };
  auto build = [&](auto begin, auto end) {
    std::vector<int> h;
    for (auto it = begin; it != end; ++it) {
      while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), *it) <= 0) h.pop_back();
      h.push_back(*it);
    }
    return h;
  };
  std::vector<int> lower = build(idx.begin(), idx.end());
  std::vector<int> upper = build(idx.rbegin(), idx.rend());
  std::vector<int> hull(lower.begin(), lower.end() - 1);
  hull.insert(hull.end(), upper.begin(), upper.end() - 1);
  std::sort(hull.begin(), hull.end());
  hull.erase(std::unique(hull.begin(), hull.end()), hull.end());
  return hull;
}

}  // namespace advreal
