#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "advreal/dovetail.hpp"
#include "advreal/fuel.hpp"
#include "advreal/interval.hpp"
#include "advreal/names.hpp"
#include "advreal/outcome.hpp"
#include "advreal/rational.hpp"

namespace advreal {

enum class Parity { Even, Odd };
enum class Integrality { IsInteger, NotInteger };

// A nonempty set of tuple positions, 0-based, sorted ascending. The CLI
// prints positions 1-based.
using IndexClass = std::vector<int>;

// Exact floor from a single query at precision 1. With the parity of floor(x)
// known, the half-unit ambiguity of q1 collapses: for even floors,
// q1/2 + 1/4 lands in [k/2, k/2 + 1); the odd case shifts by one first.
inline BigInt floor_with_parity(const RealName& x, Parity parity) {
  Rational q1 = x.query(1);
  if (parity == Parity::Even) return 2 * floor_rat(q1 / 2 + Rational(1, 4));
  return 2 * floor_rat((q1 - 1) / 2 + Rational(1, 4)) + 1;
}

// Floor given whether x is an integer. Integers are recovered by rounding a
// quarter-accurate query; non-integers by refining until the enclosure is
// integer-free, which must happen since x has positive distance to Z.
inline Outcome<BigInt> floor_with_intnot(const RealName& x, Integrality advice,
                                         const Fuel& fuel) {
  using Out = Outcome<BigInt>;
  if (advice == Integrality::IsInteger) {
    if (!fuel.allows_precision(2) || !fuel.spend())
      return Out::fail(FailKind::FuelExhausted, "floor: no budget for precision 2");
    return round_rat(x.query(2));
  }
  for (long n = 1; fuel.allows_precision(n); ++n) {
    if (!fuel.spend()) break;
    Interval e = x.enclosure(n);
    BigInt fl = floor_rat(e.lo), fh = floor_rat(e.hi);
    if (fl == fh && !is_integer(e.lo) && !is_integer(e.hi)) return fl;
  }
  return Out::fail(FailKind::FuelExhausted,
                   "floor: enclosure never became integer-free (is x an integer?)");
}

// Length-n prefix of a binary expansion of x in [0,1), given the n-th bit.
// Candidate prefixes are indexed by the integer value k of their first n-1
// bits; candidate k is accepted once the enclosure of x fits strictly inside
// the open window ((2k + b - 1/2) 2^-n, (2k + b + 3/2) 2^-n), which contains
// [K, K + 2^-n] for K = (2k + b) 2^-n in its interior, so a true prefix is
// always eventually accepted, and windows of equal bit never overlap. A
// candidate is refuted once the enclosure certifiably avoids the closed
// validity range [K, K + 2^-n]; both verdicts are facts about x, so they
// stay valid as the precision grows. When every candidate is refuted the bit
// advice itself is refuted. An accepted prefix is still re-checked against
// K <= x <= K + 2^-n at the fuel's precision cap, since the open window is
// wider than the validity range it certifies.
inline Outcome<std::vector<int>> leading_digits_with_bit(const RealName& x, long n, int bit,
                                                         const Fuel& fuel) {
  using Out = Outcome<std::vector<int>>;
  if (n < 1 || (bit != 0 && bit != 1))
    throw std::invalid_argument("leading_digits_with_bit: need n >= 1 and bit in {0,1}");
  BigInt kmax = (BigInt(1) << (n - 1)) - 1;  // prefixes with K + 2^-n <= 1
  Rational step = pow2(-n);

  std::optional<BigInt> hit;
  std::vector<char> refuted;  // sticky exclusion certificates, candidate order
  for (long t = 0; !hit; ++t) {
    if (!fuel.allows_precision(t))
      return Out::fail(FailKind::FuelExhausted, "digits: precision budget exhausted");
    while (static_cast<long>(refuted.size()) <= t &&
           BigInt(static_cast<unsigned long long>(refuted.size())) <= kmax)
      refuted.push_back(0);
    bool all_refuted = BigInt(static_cast<unsigned long long>(refuted.size())) == kmax + 1;
    for (std::size_t i = 0; i < refuted.size() && !hit; ++i) {
      if (refuted[i]) continue;
      if (!fuel.spend())
        return Out::fail(FailKind::FuelExhausted, "digits: step budget exhausted");
      Rational K = Rational(2 * BigInt(static_cast<unsigned long long>(i)) + bit) * step;
      Interval e = x.enclosure(t);
      if (e.hi < K || e.lo > K + step) {
        refuted[i] = 1;
        continue;
      }
      all_refuted = false;
      if (K - step / 2 < e.lo && e.hi < K + 3 * step / 2)
        hit = BigInt(static_cast<unsigned long long>(i));
    }
    if (!hit && all_refuted)
      return Out::fail(FailKind::AdviceSuspect,
                       "digits: every candidate prefix certifiably excludes x; bit advice false");
  }
  BigInt k = *hit;
  Rational K = Rational(2 * k + bit) * step;

  long pv = fuel.max_precision();
  if (!fuel.spend()) return Out::fail(FailKind::FuelExhausted, "digits: no budget to validate");
  Interval e = x.enclosure(pv);
  if (e.hi < K || e.lo > K + step)
    return Out::fail(FailKind::AdviceSuspect,
                     "digits: accepted prefix certifiably excludes x; bit advice was false");

  std::vector<int> bits(n);
  bits[n - 1] = bit;
  for (long i = n - 2; i >= 0; --i) {
    bits[i] = static_cast<int>(k & 1);
    k >>= 1;
  }
  return bits;
}

namespace detail {

// Connected components of the accumulated overlap graph: i ~ j iff their
// enclosures intersect at every precision 0..n. Separations are permanent, so
// the component count never decreases as n grows; names of equal reals can
// never separate (their centers differ by at most the radius sum).
inline std::vector<IndexClass> overlap_components(const std::vector<RealName>& xs, long n) {
  int m = static_cast<int>(xs.size());
  std::vector<int> parent(m);
  for (int i = 0; i < m; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      bool linked = true;
      for (long p = 0; p <= n && linked; ++p)
        linked = xs[i].enclosure(p).intersects(xs[j].enclosure(p));
      if (linked) parent[find(i)] = find(j);
    }
  std::vector<IndexClass> classes;
  std::vector<int> slot(m, -1);
  for (int i = 0; i < m; ++i) {
    int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(classes.size());
      classes.emplace_back();
    }
    classes[slot[r]].push_back(i);
  }
  return classes;  // ordered by least member since slots appear in index order
}

}  // namespace detail

// Number of accumulated-overlap components at precision n: a lower bound on
// the number of distinct values, nondecreasing in n, exact for n large.
inline int card_lower(const std::vector<RealName>& xs, long n) {
  if (xs.empty()) return 0;
  return static_cast<int>(detail::overlap_components(xs, n).size());
}

// One true equivalence class of the tuple, given k with k <= min class size
// < 2k. Candidates are the subsets of size k..2k-1 (by size, then lex); a
// subset is accepted when every cross pair is certified separated. Any such
// subset must be a union of classes of total size < 2k, hence a single class.
inline Outcome<IndexClass> find_class(const std::vector<RealName>& xs, int k, const Fuel& fuel) {
  if (xs.empty() || k < 1) throw std::invalid_argument("find_class: empty tuple or k < 1");
  int n = static_cast<int>(xs.size());
  auto candidate = [n, k](std::size_t i) { return enumerate_subsets(n, k, 2 * k - 1, i); };
  auto verified = [&xs, n](const std::vector<int>& I, long p) {
    std::vector<char> in(n, 0);
    for (int i : I) in[i] = 1;
    for (int i : I)
      for (int j = 0; j < n; ++j)
        if (!in[j] && xs[i].enclosure(p).intersects(xs[j].enclosure(p))) return false;
    return true;
  };
  auto found = dovetail<std::vector<int>>(candidate, verified, fuel);
  if (!found) return found.propagate<IndexClass>();
  return std::move(found).take().candidate;
}

// The full partition into equivalence classes, given its true size. Refines
// until the accumulated overlap graph has exactly `card` components; more
// components than card certifies the advice false.
inline Outcome<std::vector<IndexClass>> partition_classes(const std::vector<RealName>& xs,
                                                          int card, const Fuel& fuel) {
  using Out = Outcome<std::vector<IndexClass>>;
  if (xs.empty() || card < 1)
    throw std::invalid_argument("partition_classes: empty tuple or card < 1");
  for (long n = 0; fuel.allows_precision(n); ++n) {
    if (!fuel.spend()) break;
    auto classes = detail::overlap_components(xs, n);
    int got = static_cast<int>(classes.size());
    if (got == card) return classes;
    if (got > card)
      return Out::fail(FailKind::ClusterOvershoot,
                       "partition: more separated clusters than the advised cardinality");
  }
  return Out::fail(FailKind::FuelExhausted, "partition: never reached the advised cardinality");
}

// One representative name per class (least index), in order of least index.
inline Outcome<std::vector<RealName>> distinct_members(const std::vector<RealName>& xs, int card,
                                                       const Fuel& fuel) {
  auto parts = partition_classes(xs, card, fuel);
  if (!parts) return parts.propagate<std::vector<RealName>>();
  std::vector<RealName> reps;
  for (const auto& cls : parts.value()) reps.push_back(xs[cls.front()]);
  return reps;
}

}  // namespace advreal
