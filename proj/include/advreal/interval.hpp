#pragma once

#include <algorithm>
#include <stdexcept>

#include "advreal/rational.hpp"

namespace advreal {

// Closed interval with exact rational endpoints.
struct Interval {
  Rational lo, hi;

  Interval() : lo(0), hi(0) {}
  Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw std::invalid_argument("Interval: lo > hi");
  }
  static Interval point(const Rational& q) { return Interval(q, q); }
  static Interval around(const Rational& center, const Rational& radius) {
    return Interval(center - radius, center + radius);
  }

  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  bool contains_zero() const { return lo <= 0 && 0 <= hi; }
  bool excludes_zero() const { return lo > 0 || hi < 0; }
  // max |y| over y in the interval
  Rational mag() const { return std::max(abs_rat(lo), abs_rat(hi)); }

  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  bool strictly_below(const Interval& o) const { return hi < o.lo; }
};

inline Interval operator+(const Interval& a, const Interval& b) {
  return Interval(a.lo + b.lo, a.hi + b.hi);
}

inline Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

inline Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

inline Interval operator*(const Interval& a, const Interval& b) {
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return Interval(std::min(std::min(p1, p2), std::min(p3, p4)),
                  std::max(std::max(p1, p2), std::max(p3, p4)));
}

inline Interval operator*(const Rational& c, const Interval& a) {
  return c >= 0 ? Interval(c * a.lo, c * a.hi) : Interval(c * a.hi, c * a.lo);
}

inline Interval operator/(const Interval& a, const Interval& b) {
  if (!b.excludes_zero()) throw std::domain_error("interval division by interval containing 0");
  Rational p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
  return Interval(std::min(std::min(p1, p2), std::min(p3, p4)),
                  std::max(std::max(p1, p2), std::max(p3, p4)));
}

// Rational lower/upper bounds on sqrt(q), each within 2^-prec of the truth.
inline Rational sqrt_below(const Rational& q, long prec) {
  if (q < 0) throw std::domain_error("sqrt of negative");
  if (q == 0) return Rational(0);
  BigInt scale = BigInt(1) << (2 * prec);
  BigInt scaled = floor_rat(q * Rational(scale));
  BigInt r = sqrt(scaled);  // floor integer sqrt
  return Rational(r, BigInt(1) << prec);
}

inline Rational sqrt_above(const Rational& q, long prec) {
  if (q < 0) throw std::domain_error("sqrt of negative");
  if (q == 0) return Rational(0);
  BigInt scale = BigInt(1) << (2 * prec);
  BigInt scaled = ceil_rat(q * Rational(scale));
  BigInt r = sqrt(scaled);
  if (r * r < scaled) ++r;
  return Rational(r, BigInt(1) << prec);
}

// Enclosure of sqrt over a nonnegative interval.
inline Interval sqrt_interval(const Interval& a, long prec) {
  if (a.lo < 0) throw std::domain_error("sqrt_interval: negative lower end");
  return Interval(sqrt_below(a.lo, prec), sqrt_above(a.hi, prec));
}

}  // namespace advreal
