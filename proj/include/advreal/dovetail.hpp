#pragma once

#include <atomic>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "advreal/fuel.hpp"
#include "advreal/outcome.hpp"
#include "advreal/rational.hpp"

namespace advreal {

// Round evaluation may fan out over threads; results and fuel accounting are
// identical either way, so outputs stay byte-for-byte reproducible.
inline std::atomic<bool>& parallel_mode() {
  static std::atomic<bool> flag{false};
  return flag;
}

template <class C>
struct Dovetailed {
  C candidate;
  std::size_t index;  // position in the enumeration
  long round;         // precision at which it verified
};

// Precision-major round-robin: round t tests candidates 0..t at precision t,
// in enumeration order; the first verified candidate wins. One verifier call
// costs one fuel step. A verifier must be deterministic; it is called with
// ever-increasing precision, so "verified at some precision <= t" semantics
// come out of the schedule itself.
template <class C>
Outcome<Dovetailed<C>> dovetail(const std::function<std::optional<C>(std::size_t)>& candidate,
                                const std::function<bool(const C&, long)>& verified,
                                const Fuel& fuel) {
  using Out = Outcome<Dovetailed<C>>;
  if (!candidate(0)) return Out::fail(FailKind::FuelExhausted, "dovetail: empty candidate space");
  for (long t = 0;; ++t) {
    if (!fuel.allows_precision(t))
      return Out::fail(FailKind::FuelExhausted, "dovetail: precision budget exhausted");
    std::vector<C> present;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(t); ++i) {
      auto c = candidate(i);
      if (!c) break;  // enumerations are prefix-closed
      present.push_back(*c);
    }
    bool parallel = parallel_mode().load() &&
                    fuel.steps_used() + static_cast<std::int64_t>(present.size()) <= fuel.max_steps();
    if (parallel) {
      std::vector<char> ok(present.size(), 0);
      constexpr std::size_t kBatch = 8;
      for (std::size_t base = 0; base < present.size(); base += kBatch) {
        std::size_t end = std::min(base + kBatch, present.size());
        std::vector<std::future<bool>> fs;
        for (std::size_t i = base; i < end; ++i)
          fs.push_back(std::async(std::launch::async,
                                  [&, i] { return verified(present[i], t); }));
        for (std::size_t i = base; i < end; ++i) ok[i] = fs[i - base].get() ? 1 : 0;
      }
      for (std::size_t i = 0; i < present.size(); ++i) {
        fuel.spend();  // mirrors the serial scan's accounting exactly
        if (ok[i]) return Dovetailed<C>{present[i], i, t};
      }
    } else {
      for (std::size_t i = 0; i < present.size(); ++i) {
        if (!fuel.spend())
          return Out::fail(FailKind::FuelExhausted, "dovetail: step budget exhausted");
        if (verified(present[i], t)) return Dovetailed<C>{present[i], i, t};
      }
    }
  }
}

// Fixed enumeration of the rationals used wherever a search needs "try every
// rational": 0, then the Calkin-Wilf sequence with alternating signs.
inline Rational calkin_wilf(std::size_t n) {
  if (n == 1) return Rational(1);
  Rational p = calkin_wilf(n / 2);
  return (n % 2 == 0) ? Rational(p / (p + 1)) : Rational(p + 1);
}

inline Rational enumerate_rationals(std::size_t i) {
  if (i == 0) return Rational(0);
  std::size_t k = (i + 1) / 2;
  Rational q = calkin_wilf(k);
  return (i % 2 == 1) ? q : Rational(-q);
}

namespace detail {

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return BigInt(0);
  BigInt r(1);
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace detail

// Subsets of {0..n-1} ordered by size (sizes in [size_min, size_max]), then
// lexicographically within a size. Returns nullopt past the end.
inline std::optional<std::vector<int>> enumerate_subsets(int n, int size_min, int size_max,
                                                         std::size_t index) {
  BigInt idx(static_cast<unsigned long long>(index));
  for (int s = size_min; s <= size_max && s <= n; ++s) {
    BigInt count = detail::binomial(n, s);
    if (idx >= count) {
      idx -= count;
      continue;
    }
    // Unrank the idx-th lexicographic s-combination of {0..n-1}.
    std::vector<int> subset;
    int from = 0;
    for (int picked = 0; picked < s; ++picked) {
      for (int v = from;; ++v) {
        BigInt block = detail::binomial(n - v - 1, s - picked - 1);
        if (idx < block) {
          subset.push_back(v);
          from = v + 1;
          break;
        }
        idx -= block;
      }
    }
    return subset;
  }
  return std::nullopt;
}

// Primitive integer direction vectors in Z^d \ {0}, enumerated by max-norm
// shell, lexicographically within a shell. gcd = 1 keeps exactly one copy of
// every ray through an integer point (opposite rays are distinct entries).
class DirectionEnum {
 public:
  explicit DirectionEnum(int dim) : dim_(dim) {}

  std::optional<RatVector> operator()(std::size_t i) {
    std::lock_guard<std::mutex> lock(mu_);
    while (cache_.size() <= i) emit_shell(next_shell_++);
    return cache_[i];
  }

 private:
  void emit_shell(long r) {
    std::vector<long> v(dim_, -r);
    while (true) {
      long mx = 0;
      for (long x : v) mx = std::max(mx, std::abs(x));
      if (mx == r) {
        BigInt g(0);
        for (long x : v) g = gcd(g, BigInt(x < 0 ? -x : x));
        if (g == 1) {
          RatVector u(dim_);
          for (int k = 0; k < dim_; ++k) u[k] = Rational(v[k]);
          cache_.push_back(std::move(u));
        }
      }
      int pos = dim_ - 1;
      while (pos >= 0 && v[pos] == r) v[pos--] = -r;
      if (pos < 0) break;
      ++v[pos];
    }
  }

  int dim_;
  std::mutex mu_;
  std::vector<RatVector> cache_;
  long next_shell_ = 1;
};

using BoundStream = std::function<long(long)>;  // index t -> current bound

// Meets a nondecreasing lower stream with a nonincreasing upper stream; both
// converge to the same integer when the promises hold, and the first index
// where they agree resolves it.
inline Outcome<long> resolve_integer(const BoundStream& lower, const BoundStream& upper,
                                     const Fuel& fuel) {
  using Out = Outcome<long>;
  std::optional<long> prev_lo, prev_hi;
  for (long t = 0; fuel.allows_precision(t); ++t) {
    if (!fuel.spend()) break;
    long lo = lower(t), hi = upper(t);
    if (prev_lo && lo < *prev_lo)
      return Out::fail(FailKind::MonotonicityViolation, "lower bound stream decreased");
    if (prev_hi && hi > *prev_hi)
      return Out::fail(FailKind::MonotonicityViolation, "upper bound stream increased");
    if (lo == hi) return lo;
    if (lo > hi)
      return Out::fail(FailKind::FuelExhausted,
                       "bound streams crossed; they can never meet");
    prev_lo = lo;
    prev_hi = hi;
  }
  return Out::fail(FailKind::FuelExhausted, "bound streams never met");
}

// A computation that is correct whenever its discrete advice is truthful.
// advice_count is the size of the advice set; run receives the chosen index.
template <class In, class Out>
struct AdviceAlg {
  std::size_t advice_count;
  std::function<Outcome<Out>(const In&, std::size_t, const Fuel&)> run;
};

// Sequential composition; the joint advice set is the product, encoded
// (i, j) -> i * second.advice_count + j.
template <class A, class B, class C>
AdviceAlg<A, C> compose_advice(const AdviceAlg<A, B>& first, const AdviceAlg<B, C>& second) {
  std::size_t k = second.advice_count;
  return AdviceAlg<A, C>{
      first.advice_count * k,
      [first, second, k](const A& a, std::size_t advice, const Fuel& fuel) -> Outcome<C> {
        Outcome<B> mid = first.run(a, advice / k, fuel);
        if (!mid) return mid.template propagate<C>();
        return second.run(mid.value(), advice % k, fuel);
      }};
}

}  // namespace advreal
