#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "advreal/interval.hpp"
#include "advreal/names.hpp"
#include "advreal/poly.hpp"
#include "advreal/ratlinalg.hpp"
#include "advreal/rational.hpp"
#include "advreal/rootfind.hpp"

// Adversarial fixture generators: families of points that converge in stages
// (flags) plus minimal perturbations that break a promised invariant. Tests
// feed these to the advice algorithms to confirm that wrong advice is caught
// and truthful advice converges.

namespace advreal {

// (1/n1, 1/n1+1/n2, ..., 0, ..., 0): a point whose coordinate multiset has
// exactly len(nbar)+1 distinct values, converging to the origin stagewise.
inline VectorName card_flag(int d, const std::vector<long>& nbar) {
  if (d < 1 || static_cast<int>(nbar.size()) > d - 1)
    throw std::invalid_argument("card_flag: need 0 <= len(nbar) <= d-1");
  RatVector p(d, Rational(0));
  Rational acc(0);
  for (std::size_t i = 0; i < nbar.size(); ++i) {
    if (nbar[i] < 1) throw std::invalid_argument("card_flag: indices must be >= 1");
    acc += Rational(1, nbar[i]);
    p[i] = acc;
  }
  return VectorName::exact(p);
}

// Sum of partial identities E_j / n_j; E_j has ones on the first j diagonal
// cells, so the result is diagonal with the suffix sums of 1/n_j and has
// rank exactly len(nbar).
inline RatMatrix rank_flag(int rows, int cols, const std::vector<long>& nbar) {
  if (rows < 1 || cols < 1 || static_cast<int>(nbar.size()) > std::min(rows, cols))
    throw std::invalid_argument("rank_flag: need len(nbar) <= min(rows, cols)");
  RatMatrix m(rows, cols);
  Rational suffix(0);
  for (std::size_t i = nbar.size(); i-- > 0;) {
    if (nbar[i] < 1) throw std::invalid_argument("rank_flag: indices must be >= 1");
    suffix += Rational(1, nbar[i]);
    m.at(i, i) = suffix;
  }
  return m;
}

// The stagewise-constant name of 1/2 + s1 2^-N1 + s2 2^-N2 + ... with
// N_s = n1+...+ns: query j answers the stage-s partial sum for
// N_s <= j < N_{s+1}. Valid since stage lengths >= 2 keep the remaining
// corrections under 2^-j at every query.
inline RealName adic_flag_name(const std::vector<int>& signs, const std::vector<long>& nbar) {
  if (signs.size() != nbar.size())
    throw std::invalid_argument("adic name: one sign per stage length");
  std::vector<long> boundary;   // N_1, N_2, ...
  std::vector<Rational> value;  // partial sums v_0 = 1/2, v_1, ...
  value.push_back(Rational(1, 2));
  long n_total = 0;
  for (std::size_t s = 0; s < nbar.size(); ++s) {
    if (nbar[s] < 2) throw std::invalid_argument("adic name: stage lengths must be >= 2");
    if (signs[s] != 1 && signs[s] != -1)
      throw std::invalid_argument("adic name: signs must be +1 or -1");
    n_total += nbar[s];
    boundary.push_back(n_total);
    value.push_back(value.back() + Rational(signs[s]) * pow2(-n_total));
  }
  return RealName([boundary, value](long j) {
    std::size_t s = 0;
    while (s < boundary.size() && boundary[s] <= j) ++s;
    return value[s];
  });
}

namespace detail {

// Scale a nonzero rational vector to integer entries with gcd 1.
inline RatVector primitive_scale(const RatVector& v) {
  BigInt l(1), g(0);
  for (const auto& q : v) l = boost::multiprecision::lcm(l, denominator(q));
  std::vector<BigInt> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = numerator(v[i]) * (l / denominator(v[i]));
    g = boost::multiprecision::gcd(g, w[i]);
  }
  if (g == 0) throw std::invalid_argument("primitive_scale: zero vector");
  RatVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(w[i] / g);
  return out;
}

inline Rational max_abs_entry(const RatVector& v) {
  Rational m(0);
  for (const auto& q : v) m = std::max(m, abs_rat(q));
  return m;
}

// Exact Gram-Schmidt without normalization.
inline std::vector<RatVector> orthogonalize(const std::vector<RatVector>& in) {
  std::vector<RatVector> out;
  for (const auto& v : in) {
    RatVector u = v;
    for (const auto& z : out) {
      Rational f = dot(v, z) / dot(z, z);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] -= f * z[i];
    }
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace detail

// For A of rank r < min(rows, cols): the cols-r matrices A + d' w z_i^T with
// {z_i} an exact orthogonal kernel basis and w outside range(A). Each has
// rank r+1, sits within delta of A entrywise, and kernel(A^(i)) =
// kernel(A) cut by z_i^perp, so the kernels meet only in 0.
inline std::vector<RatMatrix> lineq_perturb(const RatMatrix& a, const Rational& delta) {
  if (!(delta > 0)) throw std::invalid_argument("lineq_perturb: delta must be positive");
  long r = rank_exact(a).rank;
  if (r >= std::min(a.rows, a.cols))
    throw std::invalid_argument("lineq_perturb: matrix must have rank below min dimension");

  auto basis = detail::orthogonalize(kernel_exact(a));
  for (auto& z : basis) z = detail::primitive_scale(z);

  RatVector w(a.rows, Rational(0));
  for (int i = 0; i < a.rows; ++i) {
    RatMatrix aug(a.rows, a.cols + 1);
    for (int p = 0; p < a.rows; ++p)
      for (int q = 0; q < a.cols; ++q) aug.at(p, q) = a.at(p, q);
    aug.at(i, a.cols) = 1;
    if (rank_exact(aug).rank > r) {
      w[i] = 1;
      break;
    }
  }

  std::vector<RatMatrix> out;
  for (const auto& z : basis) {
    Rational scale = delta / (detail::max_abs_entry(w) * detail::max_abs_entry(z));
    RatMatrix m = a;
    for (int p = 0; p < a.rows; ++p)
      for (int q = 0; q < a.cols; ++q) m.at(p, q) += scale * w[p] * z[q];
    out.push_back(std::move(m));
  }
  return out;
}

// A + eps w w^T / (w^T w): shifts the eigenvalue along w from lambda to
// lambda+eps while fixing w^perp, splitting w off its old eigenspace.
inline RatMatrix diag_break(const RatMatrix& a, const Rational& lambda, const RatVector& w,
                            const Rational& eps) {
  if (!a.is_symmetric()) throw std::invalid_argument("diag_break: matrix must be symmetric");
  if (static_cast<int>(w.size()) != a.cols)
    throw std::invalid_argument("diag_break: vector size mismatch");
  if (!(eps > 0)) throw std::invalid_argument("diag_break: eps must be positive");
  Rational norm2 = dot(w, w);
  if (norm2 == 0) throw std::invalid_argument("diag_break: vector must be nonzero");
  RatVector aw = a.apply(w);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (aw[i] != lambda * w[i])
      throw std::invalid_argument("diag_break: (lambda, w) is not an exact eigenpair");
  RatMatrix m = a;
  for (int p = 0; p < a.rows; ++p)
    for (int q = 0; q < a.cols; ++q) m.at(p, q) += eps * w[p] * w[q] / norm2;
  return m;
}

// Nested subspace family of R^(2^d). Level s halves the space two ways: the
// coordinate split (jbar[s]=0) keeps the first or second half of the current
// orthogonal basis; the diagonal split (jbar[s]=1) takes sums or differences
// of paired basis vectors. ibar[s] picks base (0) or complement (1). Both
// splits keep the basis orthogonal with all squared norms equal, which is
// what makes every choice at every level a genuine orthogonal decomposition.
inline std::vector<RatVector> evec_subspaces(int d, const std::vector<int>& jbar,
                                             const std::vector<int>& ibar) {
  if (d < 0 || d > 12) throw std::invalid_argument("subspaces: dimension 2^d out of range");
  if (jbar.size() != ibar.size() || static_cast<int>(jbar.size()) > d)
    throw std::invalid_argument("subspaces: need len(jbar) = len(ibar) <= d");
  std::size_t dim = std::size_t(1) << d;
  std::vector<RatVector> basis(dim, RatVector(dim, Rational(0)));
  for (std::size_t i = 0; i < dim; ++i) basis[i][i] = 1;

  for (std::size_t s = 0; s < jbar.size(); ++s) {
    if ((jbar[s] != 0 && jbar[s] != 1) || (ibar[s] != 0 && ibar[s] != 1))
      throw std::invalid_argument("subspaces: labels must be 0/1 bits");
    std::size_t m = basis.size() / 2;
    std::vector<RatVector> next(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (jbar[s] == 0) {
        next[i] = basis[ibar[s] == 0 ? i : m + i];
      } else {
        next[i] = basis[i];
        for (std::size_t t = 0; t < next[i].size(); ++t)
          next[i][t] += (ibar[s] == 0 ? basis[m + i][t] : -basis[m + i][t]);
      }
    }
    basis = std::move(next);
  }
  return basis;
}

// Symmetric matrix whose eigenspaces, read off level by level, are exactly
// the evec_subspaces family under the split pattern jbar: sum over levels s
// and labels i1..is of (is+1) b_s P[subspace], b_s = 1/(4^s n_1...n_s).
// The b_s decay fast enough that all 2^k eigenvalues stay distinct.
inline RatMatrix evec_break(int d, const std::vector<int>& jbar, const std::vector<long>& nbar) {
  if (d < 0 || d > 12) throw std::invalid_argument("evec_break: dimension 2^d out of range");
  if (jbar.size() != nbar.size())
    throw std::invalid_argument("evec_break: need len(jbar) = len(nbar)");
  int dim = 1 << d;
  RatMatrix out(dim, dim);
  Rational beta(1);
  std::vector<int> jprefix;
  for (std::size_t s = 0; s < jbar.size(); ++s) {
    if (nbar[s] < 1) throw std::invalid_argument("evec_break: indices must be >= 1");
    jprefix.push_back(jbar[s]);
    beta /= Rational(4 * nbar[s]);
    for (std::size_t mask = 0; mask < (std::size_t(1) << (s + 1)); ++mask) {
      std::vector<int> ibar(s + 1);
      for (std::size_t t = 0; t <= s; ++t) ibar[t] = (mask >> t) & 1;
      auto basis = evec_subspaces(d, jprefix, ibar);
      Rational coeff = Rational(ibar[s] + 1) * beta / dot(basis[0], basis[0]);
      for (const auto& w : basis)
        for (int p = 0; p < dim; ++p)
          for (int q = 0; q < dim; ++q) out.at(p, q) += coeff * w[p] * w[q];
    }
  }
  return out;
}

namespace detail {

inline Rational pwl_eval(const std::vector<std::pair<Rational, Rational>>& pts,
                         const Rational& x) {
  std::size_t i = 1;
  while (i + 1 < pts.size() && pts[i].first < x) ++i;
  const auto& [x0, y0] = pts[i - 1];
  const auto& [x1, y1] = pts[i];
  return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
}

inline std::vector<std::pair<Rational, Rational>> pwl_add(
    const std::vector<std::pair<Rational, Rational>>& a,
    const std::vector<std::pair<Rational, Rational>>& b) {
  std::set<Rational> xs;
  for (const auto& p : a) xs.insert(p.first);
  for (const auto& p : b) xs.insert(p.first);
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& x : xs) out.emplace_back(x, pwl_eval(a, x) + pwl_eval(b, x));
  return out;
}

}  // namespace detail

// A piecewise-linear function on [0,1] together with its zero plateau.
struct IntermedPoint {
  std::vector<std::pair<Rational, Rational>> breakpoints;
  Interval zero;  // exact zero set [lo, hi]
  FuncName f;
};

// Base function: -1 at 0, a zero plateau on [1/3, 2/3], +1 at 1. Each level
// keeps an outer third of the plateau: ibar[s]=0 keeps the left third by
// adding a positive bump over the rest, ibar[s]=1 keeps the right third with
// a negative bump. Plateau at depth k has length 3^-(k+1); sibling plateaus
// stay a full third apart. Bump heights 1/(4^s n_s) shrink the sup distance
// of the diagonal subsequence below 2/m.
inline IntermedPoint intermed_flag(const std::vector<int>& ibar, const std::vector<long>& nbar) {
  if (ibar.size() != nbar.size())
    throw std::invalid_argument("intermed_flag: need len(ibar) = len(nbar)");
  std::vector<std::pair<Rational, Rational>> pts = {
      {Rational(0), Rational(-1)},
      {Rational(1, 3), Rational(0)},
      {Rational(2, 3), Rational(0)},
      {Rational(1), Rational(1)},
  };
  Rational lo(1, 3), hi(2, 3), len(1, 3);
  Rational height(1, 4);
  for (std::size_t s = 0; s < ibar.size(); ++s) {
    if (nbar[s] < 1) throw std::invalid_argument("intermed_flag: indices must be >= 1");
    if (ibar[s] != 0 && ibar[s] != 1)
      throw std::invalid_argument("intermed_flag: path labels must be 0/1 bits");
    Rational step = len / 3;
    Rational h = height / Rational(nbar[s]);
    std::vector<std::pair<Rational, Rational>> bump;
    if (ibar[s] == 0) {
      bump = {{Rational(0), Rational(0)},
              {lo + step, Rational(0)},
              {hi, h},
              {hi + step, Rational(0)},
              {Rational(1), Rational(0)}};
      hi = lo + step;
    } else {
      bump = {{Rational(0), Rational(0)},
              {lo - step, Rational(0)},
              {lo, -h},
              {hi - step, Rational(0)},
              {Rational(1), Rational(0)}};
      lo = hi - step;
    }
    pts = detail::pwl_add(pts, bump);
    len = step;
    height /= 4;
  }
  return IntermedPoint{pts, Interval{lo, hi}, piecewise_linear_funcname(pts)};
}

// Bijective pairing <x,y> = 2^x (1+2y) of N0 x N0 onto N>=1.
inline BigInt borel_pair(long x, long y) {
  if (x < 0 || y < 0) throw std::invalid_argument("borel_pair: arguments must be >= 0");
  return (BigInt(1) << x) * (2 * BigInt(y) + 1);
}

// Encodes a tuple as the dyadic rational with one binary digit per pair
// <i, n_i>, i = 1..k.
inline Rational borel_encode(const std::vector<long>& nbar) {
  Rational x(0);
  for (std::size_t i = 0; i < nbar.size(); ++i) {
    if (nbar[i] < 0) throw std::invalid_argument("borel_encode: entries must be >= 0");
    BigInt pos = borel_pair(static_cast<long>(i) + 1, nbar[i]);
    if (pos > 4096) throw std::invalid_argument("borel_encode: tuple too large to encode");
    x += Rational(BigInt(1), BigInt(1) << pos.convert_to<unsigned>());
  }
  return x;
}

// Total decode: 1/k on valid codes of length-k tuples, 0 everywhere else
// (including 0 itself and every non-dyadic or out-of-range input).
inline Rational borel_f(const Rational& x) {
  if (x <= 0 || x >= 1) return Rational(0);
  BigInt den = denominator(x);
  if (den == 0 || (den & (den - 1)) != 0) return Rational(0);  // not dyadic
  unsigned e = boost::multiprecision::lsb(den);
  BigInt num = numerator(x);
  std::set<long> firsts;
  long count = 0;
  for (unsigned b = 0; b <= boost::multiprecision::msb(num); ++b) {
    if (!boost::multiprecision::bit_test(num, b)) continue;
    long pos = static_cast<long>(e) - static_cast<long>(b);  // digit position of this bit
    long i = 0;
    while ((pos & 1) == 0) {
      pos >>= 1;
      ++i;
    }
    if (i == 0) return Rational(0);  // position is odd: no pair has first part 0
    firsts.insert(i);
    ++count;
  }
  for (long i = 1; i <= count; ++i)
    if (!firsts.count(i)) return Rational(0);  // firsts must be exactly 1..k
  return Rational(1, count);
}

enum class CommonEigVerdict { CommonBasisPossible, Impossible };

namespace detail {

inline std::vector<BigInt> divisors(BigInt n) {
  if (n < 0) n = -n;
  std::vector<BigInt> out;
  for (BigInt d(1); d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d * d != n) out.push_back(n / d);
  }
  return out;
}

// All rational roots, by the rational root theorem on the primitive part.
inline std::vector<Rational> rational_roots(const RatPoly& p) {
  std::vector<Rational> out;
  if (p.is_zero() || p.degree() == 0) return out;
  RatPoly q = p.primitive();
  std::size_t t = 0;
  while (t < q.coeffs().size() && q[t] == 0) ++t;
  if (t > 0) out.push_back(Rational(0));
  std::vector<Rational> tail(q.coeffs().begin() + t, q.coeffs().end());
  RatPoly r{std::move(tail)};
  if (r.degree() < 1) return out;
  for (const auto& a : divisors(numerator(r[0])))
    for (const auto& b : divisors(numerator(r.leading())))
      for (int sgn : {1, -1}) {
        Rational cand(sgn * a, b);
        if (r.eval(cand) == 0 && std::find(out.begin(), out.end(), cand) == out.end())
          out.push_back(cand);
      }
  return out;
}

// Eigenvectors of simple rational eigenvalues, as primitive directions.
inline std::vector<RatVector> simple_rational_eigvecs(const RatMatrix& m) {
  RatPoly p = charpoly_exact(m);
  RatPoly dp = p.derivative();
  std::vector<RatVector> out;
  for (const auto& lam : rational_roots(p)) {
    if (dp.eval(lam) == 0) continue;  // repeated root
    RatMatrix shifted = m;
    for (int i = 0; i < m.rows; ++i) shifted.at(i, i) -= lam;
    for (const auto& v : kernel_exact(shifted)) out.push_back(primitive_scale(v));
  }
  return out;
}

inline bool collinear(const RatVector& v, const RatVector& w) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] * w[j] != v[j] * w[i]) return false;
  return true;
}

}  // namespace detail

// Certificate that two symmetric matrices cannot share an orthogonal
// eigenbasis: an eigenvector of a simple eigenvalue of B that is neither
// collinear nor orthogonal to one of C. Only rational simple eigenvalues
// are searched; the fixtures keep spectra rational.
inline CommonEigVerdict common_eigvec_check(const RatMatrix& b, const RatMatrix& c) {
  if (!b.is_symmetric() || !c.is_symmetric())
    throw std::invalid_argument("common eigvec check: matrices must be symmetric");
  auto vb = detail::simple_rational_eigvecs(b);
  auto vc = detail::simple_rational_eigvecs(c);
  if (vb.empty() || vc.empty())
    throw std::invalid_argument("common eigvec check: no simple rational eigenvalue found");
  for (const auto& v : vb)
    for (const auto& w : vc)
      if (!detail::collinear(v, w) && dot(v, w) != 0) return CommonEigVerdict::Impossible;
  return CommonEigVerdict::CommonBasisPossible;
}

}  // namespace advreal
