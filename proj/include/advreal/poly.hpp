#pragma once

#include <utility>
#include <vector>

#include "advreal/interval.hpp"
#include "advreal/outcome.hpp"
#include "advreal/rational.hpp"

namespace advreal {

// Univariate polynomial with exact rational coefficients, ascending order.
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  static RatPoly constant(const Rational& q) { return RatPoly({q}); }
  static RatPoly x() { return RatPoly({Rational(0), Rational(1)}); }

  long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& operator[](std::size_t i) const { return c_[i]; }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational eval(const Rational& x) const {
    Rational r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  RatPoly derivative() const {
    if (c_.size() <= 1) return RatPoly();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = Rational(i) * c_[i];
    return RatPoly(std::move(d));
  }

  friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return RatPoly(std::move(r));
  }
  friend RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + (Rational(-1) * b); }
  friend RatPoly operator*(const Rational& s, const RatPoly& a) {
    std::vector<Rational> r = a.c_;
    for (auto& q : r) q *= s;
    return RatPoly(std::move(r));
  }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return RatPoly();
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return RatPoly(std::move(r));
  }

  // Euclidean division; exact over the rationals.
  std::pair<RatPoly, RatPoly> divrem(const RatPoly& d) const {
    if (d.is_zero()) throw std::domain_error("RatPoly division by zero");
    std::vector<Rational> rem = c_;
    std::vector<Rational> quo;
    long dd = d.degree();
    while (static_cast<long>(rem.size()) - 1 >= dd) {
      Rational f = rem.back() / d.leading();
      long shift = static_cast<long>(rem.size()) - 1 - dd;
      if (static_cast<long>(quo.size()) < shift + 1) quo.resize(shift + 1, Rational(0));
      quo[shift] = f;
      for (long i = 0; i <= dd; ++i) rem[shift + i] -= f * d.c_[i];
      while (!rem.empty() && rem.back() == 0) rem.pop_back();
      if (rem.empty()) break;
    }
    return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
  }

  // Scales to integer coefficients with content 1, keeping the sign.
  RatPoly primitive() const {
    if (is_zero()) return RatPoly();
    BigInt l(1);
    for (const auto& q : c_) l = lcm(l, denominator(q));
    BigInt g(0);
    for (const auto& q : c_) g = gcd(g, numerator(q) * (l / denominator(q)));
    std::vector<Rational> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] * Rational(l, g);
    return RatPoly(std::move(r));
  }

  RatPoly monic() const {
    if (is_zero()) return RatPoly();
    return Rational(1) / leading() * *this;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

inline RatPoly poly_gcd(RatPoly a, RatPoly b) {
  a = a.primitive();
  b = b.primitive();
  while (!b.is_zero()) {
    RatPoly r = a.divrem(b).second;
    a = std::move(b);
    b = r.primitive();
  }
  if (a.is_zero()) return a;
  RatPoly m = a.monic().primitive();
  return m.leading() < 0 ? Rational(-1) * m : m;
}

// Yun decomposition: p = lead * prod f_i^i with the f_i squarefree, pairwise
// coprime, monic. Returns (f_i, i) for the nontrivial factors.
inline std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& p) {
  std::vector<std::pair<RatPoly, int>> out;
  if (p.degree() <= 0) return out;
  RatPoly a = p.monic();
  RatPoly g = poly_gcd(a, a.derivative()).monic();
  if (g.degree() == 0) {
    out.emplace_back(a, 1);
    return out;
  }
  RatPoly w = a.divrem(g).first;
  RatPoly y = a.derivative().divrem(g).first;
  RatPoly z = y - w.derivative();
  int i = 1;
  while (!(w.degree() == 0)) {
    RatPoly f = poly_gcd(w, z).monic();
    if (f.degree() > 0) out.emplace_back(f, i);
    w = w.divrem(f).first;
    y = z.divrem(f).first;
    z = y - w.derivative();
    ++i;
  }
  return out;
}

// Sturm chain of a squarefree polynomial, primitive-normalized per step.
inline std::vector<RatPoly> sturm_chain(const RatPoly& p) {
  std::vector<RatPoly> chain;
  if (p.is_zero()) return chain;
  chain.push_back(p.primitive());
  RatPoly d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(d.primitive());
  while (true) {
    const RatPoly& a = chain[chain.size() - 2];
    const RatPoly& b = chain[chain.size() - 1];
    RatPoly r = a.divrem(b).second;
    if (r.is_zero()) break;
    chain.push_back((Rational(-1) * r).primitive());
  }
  return chain;
}

inline int sign_of(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

inline int sturm_sign_changes(const std::vector<RatPoly>& chain, const Rational& x) {
  int changes = 0, prev = 0;
  for (const auto& f : chain) {
    int s = sign_of(f.eval(x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

// Distinct real roots of a squarefree p in the half-open interval (a, b].
inline long sturm_count(const std::vector<RatPoly>& chain, const Rational& a, const Rational& b) {
  return sturm_sign_changes(chain, a) - sturm_sign_changes(chain, b);
}

inline Rational cauchy_root_bound(const RatPoly& p) {
  Rational m(0);
  long d = p.degree();
  for (long i = 0; i < d; ++i) m = std::max(m, abs_rat(p[i] / p.leading()));
  return m + 1;
}

struct IsolatedRoot {
  Interval iv;       // contains exactly one real root of the polynomial
  int multiplicity;
};

namespace detail {

// Bisection point inside (a,b) where g does not vanish; g has finitely many
// roots so a dyadic offset from the midpoint works within deg(g)+2 tries.
inline Rational nonroot_split(const RatPoly& g, const Rational& a, const Rational& b) {
  Rational m = (a + b) / 2;
  if (g.eval(m) != 0) return m;
  Rational step = (b - a) / 4;
  for (int j = 0; j < g.degree() + 2; ++j) {
    Rational cand = m + step;
    if (cand < b && g.eval(cand) != 0) return cand;
    step /= 2;
  }
  throw std::logic_error("nonroot_split: no split point found");
}

inline void isolate_squarefree(const RatPoly& g, const std::vector<RatPoly>& chain,
                               const Rational& a, const Rational& b, long count,
                               std::vector<Interval>& out) {
  if (count == 0) return;
  if (count == 1) {
    out.emplace_back(a, b);
    return;
  }
  Rational m = nonroot_split(g, a, b);
  long left = sturm_count(chain, a, m);
  isolate_squarefree(g, chain, a, m, left, out);
  isolate_squarefree(g, chain, m, b, count - left, out);
}

}  // namespace detail

// Halves a bracket around the single root of squarefree g inside iv.
// Endpoints stay nonroots unless the root itself is rational, in which case
// the interval collapses to a point.
inline Interval refine_bracket(const RatPoly& g, Interval iv, const Rational& target_width) {
  if (iv.width() == 0) return iv;
  int sa = sign_of(g.eval(iv.lo));
  while (iv.width() > target_width) {
    Rational m = iv.mid();
    int sm = sign_of(g.eval(m));
    if (sm == 0) return Interval::point(m);
    if (sm == sa) {
      iv = Interval(m, iv.hi);
    } else {
      iv = Interval(iv.lo, m);
    }
  }
  return iv;
}

// Isolated root with the squarefree factor owning it, so callers can refine.
struct RefinedRoot {
  RatPoly factor;
  Interval iv;
  int multiplicity;
};

// All real roots with multiplicities, in disjoint intervals sorted in
// increasing order. PreconditionViolated when p has non-real roots (callers
// feed characteristic polynomials of symmetric matrices, which never do).
inline Outcome<std::vector<RefinedRoot>> isolate_real_roots(const RatPoly& p) {
  using Out = Outcome<std::vector<RefinedRoot>>;
  if (p.degree() < 1) {
    if (p.is_zero()) return Out::fail(FailKind::PreconditionViolated, "zero polynomial");
    return std::vector<RefinedRoot>{};
  }
  std::vector<RefinedRoot> roots;
  for (auto& [g, mult] : squarefree_decomposition(p)) {
    Rational b = cauchy_root_bound(g);
    auto chain = sturm_chain(g);
    long total = sturm_count(chain, -b, b);
    if (total != g.degree())
      return Out::fail(FailKind::PreconditionViolated, "polynomial has non-real roots");
    std::vector<Interval> ivs;
    detail::isolate_squarefree(g, chain, -b, b, total, ivs);
    for (auto& iv : ivs) roots.push_back({g, iv, mult});
  }
  // Roots of distinct squarefree factors are distinct; shrink until the
  // intervals are pairwise disjoint so the global order is certified.
  bool overlap = true;
  while (overlap) {
    overlap = false;
    for (std::size_t i = 0; i < roots.size(); ++i)
      for (std::size_t j = i + 1; j < roots.size(); ++j)
        if (roots[i].iv.intersects(roots[j].iv) &&
            !(roots[i].iv.width() == 0 && roots[j].iv.width() == 0)) {
          overlap = true;
          roots[i].iv = refine_bracket(roots[i].factor, roots[i].iv, roots[i].iv.width() / 4);
          roots[j].iv = refine_bracket(roots[j].factor, roots[j].iv, roots[j].iv.width() / 4);
        }
  }
  std::sort(roots.begin(), roots.end(),
            [](const RefinedRoot& x, const RefinedRoot& y) { return x.iv.mid() < y.iv.mid(); });
  return roots;
}

inline Outcome<std::vector<IsolatedRoot>> real_root_isolation(const RatPoly& p) {
  auto iso = isolate_real_roots(p);
  if (!iso) return iso.propagate<std::vector<IsolatedRoot>>();
  std::vector<IsolatedRoot> out;
  out.reserve(iso.value().size());
  for (auto& r : iso.value()) out.push_back({r.iv, r.multiplicity});
  return out;
}

// Isolation with every interval refined below target_width.
inline Outcome<std::vector<RefinedRoot>> isolate_and_refine(const RatPoly& p,
                                                            const Rational& target_width) {
  auto iso = isolate_real_roots(p);
  if (!iso) return iso;
  for (auto& r : iso.value()) r.iv = refine_bracket(r.factor, r.iv, target_width);
  return iso;
}

}  // namespace advreal
