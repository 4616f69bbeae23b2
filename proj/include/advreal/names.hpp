#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "advreal/fuel.hpp"
#include "advreal/interval.hpp"
#include "advreal/outcome.hpp"
#include "advreal/ratlinalg.hpp"
#include "advreal/rational.hpp"

namespace advreal {

// A name of a real number: query(n) answers with a rational within 2^-n.
// Answers are memoized; a query blocks until its answer is cached, so
// concurrent consumers always observe one consistent answer per precision.
class RealName {
  struct State {
    std::function<Rational(long)> f;
    std::map<long, Rational> memo;
    std::mutex mu;
  };

 public:
  explicit RealName(std::function<Rational(long)> f)
      : s_(std::make_shared<State>()) {
    s_->f = std::move(f);
  }
  static RealName constant(const Rational& q) {
    return RealName([q](long) { return q; });
  }

  Rational query(long n) const {
    if (n < 0) n = 0;
    std::lock_guard<std::mutex> lock(s_->mu);
    auto it = s_->memo.find(n);
    if (it != s_->memo.end()) return it->second;
    Rational v = s_->f(n);
    s_->memo.emplace(n, v);
    return v;
  }

  Interval enclosure(long n) const { return Interval::around(query(n), pow2(-n)); }

  // Answered (precision, value) pairs so far; lets tests audit consistency.
  std::vector<std::pair<long, Rational>> answered() const {
    std::lock_guard<std::mutex> lock(s_->mu);
    return {s_->memo.begin(), s_->memo.end()};
  }

 private:
  std::shared_ptr<State> s_;
};

// |q_n - q_m| <= 2^-n + 2^-m over every answered pair.
inline bool consistent_answers(const RealName& x) {
  auto a = x.answered();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (abs_rat(a[i].second - a[j].second) > pow2(-a[i].first) + pow2(-a[j].first))
        return false;
  return true;
}

inline RealName add(const RealName& x, const RealName& y) {
  return RealName([x, y](long n) { return x.query(n + 1) + y.query(n + 1); });
}

inline RealName negate(const RealName& x) {
  return RealName([x](long n) { return Rational(-x.query(n)); });
}

// Sum of k names, each queried k's bit-length deeper so the errors still fit.
inline RealName sum_names(std::vector<RealName> xs) {
  if (xs.empty()) return RealName::constant(Rational(0));
  long budget = ceil_log2(Rational(static_cast<long>(xs.size())));
  return RealName([xs = std::move(xs), budget](long n) {
    Rational s(0);
    for (const auto& x : xs) s += x.query(n + budget);
    return s;
  });
}

enum class SeparationOrder { XLess, YLess };

struct Separation {
  SeparationOrder order;
  long precision;  // first precision whose query intervals were disjoint
};

// Semi-decides x != y by refining both names until the enclosures separate.
// Diverges (fuel runs out) exactly when x = y.
inline Outcome<Separation> sep_order(const RealName& x, const RealName& y, const Fuel& fuel) {
  for (long n = 0; fuel.allows_precision(n); ++n) {
    if (!fuel.spend()) break;
    Interval ix = x.enclosure(n), iy = y.enclosure(n);
    if (ix.strictly_below(iy)) return Separation{SeparationOrder::XLess, n};
    if (iy.strictly_below(ix)) return Separation{SeparationOrder::YLess, n};
  }
  return Outcome<Separation>::fail(FailKind::FuelExhausted, "sep_order: names never separated");
}

// Name of a point in R^d; one query refines every coordinate together.
class VectorName {
  struct State {
    std::function<RatVector(long)> f;
    std::map<long, RatVector> memo;
    std::mutex mu;
  };

 public:
  VectorName(int dim, std::function<RatVector(long)> f)
      : dim_(dim), s_(std::make_shared<State>()) {
    s_->f = std::move(f);
  }
  static VectorName exact(RatVector v) {
    int d = static_cast<int>(v.size());
    return VectorName(d, [v = std::move(v)](long) { return v; });
  }
  static VectorName from_components(std::vector<RealName> comps) {
    int d = static_cast<int>(comps.size());
    return VectorName(d, [comps = std::move(comps)](long n) {
      RatVector v;
      v.reserve(comps.size());
      for (const auto& c : comps) v.push_back(c.query(n));
      return v;
    });
  }

  int dim() const { return dim_; }

  RatVector query(long n) const {
    if (n < 0) n = 0;
    std::lock_guard<std::mutex> lock(s_->mu);
    auto it = s_->memo.find(n);
    if (it != s_->memo.end()) return it->second;
    RatVector v = s_->f(n);
    if (static_cast<int>(v.size()) != dim_)
      throw std::invalid_argument("VectorName: wrong dimension from producer");
    s_->memo.emplace(n, v);
    return v;
  }

  RealName component(int i) const {
    if (i < 0 || i >= dim_) throw std::out_of_range("VectorName::component");
    VectorName self = *this;
    return RealName([self, i](long n) { return self.query(n)[i]; });
  }

 private:
  int dim_;
  std::shared_ptr<State> s_;
};

/// Name of a real matrix: query(n) returns an entrywise 2^-n approximation.
class MatrixName {
  struct State {
    std::function<RatMatrix(long)> f;
    std::map<long, RatMatrix> memo;
    std::mutex mu;
  };

 public:
  MatrixName(int rows, int cols, bool symmetric, std::function<RatMatrix(long)> f)
      : rows_(rows), cols_(cols), symmetric_(symmetric), s_(std::make_shared<State>()) {
    s_->f = std::move(f);
  }
  static MatrixName exact(RatMatrix m) {
    int r = m.rows, c = m.cols;
    bool sym = m.is_symmetric();
    return MatrixName(r, c, sym, [m = std::move(m)](long) { return m; });
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool symmetric() const { return symmetric_; }

  RatMatrix query(long n) const {
    if (n < 0) n = 0;
    std::lock_guard<std::mutex> lock(s_->mu);
    auto it = s_->memo.find(n);
    if (it != s_->memo.end()) return it->second;
    RatMatrix m = s_->f(n);
    if (m.rows != rows_ || m.cols != cols_)
      throw std::logic_error("MatrixName: wrong shape from producer");
    if (symmetric_ && !m.is_symmetric())
      throw std::invalid_argument("MatrixName: symmetric-flagged input produced an asymmetric approximant");
    s_->memo.emplace(n, m);
    return m;
  }

  // A - t I as a name, one extra precision bit on each operand.
  static MatrixName shifted(const MatrixName& a, const RealName& t) {
    if (a.rows() != a.cols()) throw std::invalid_argument("shifted: square matrix required");
    int d = a.rows();
    bool sym = a.symmetric();
    return MatrixName(d, d, sym, [a, t, d](long n) {
      RatMatrix m = a.query(n + 1);
      Rational tv = t.query(n + 1);
      for (int i = 0; i < d; ++i) m.at(i, i) -= tv;
      return m;
    });
  }

 private:
  int rows_, cols_;
  bool symmetric_;
  std::shared_ptr<State> s_;
};

/// Name of a continuous function: eval(q, n) approximates f(q) within 2^-n.
class FuncName {
  struct State {
    std::function<Rational(const Rational&, long)> f;
    std::map<std::pair<Rational, long>, Rational> memo;
    std::mutex mu;
  };

 public:
  explicit FuncName(std::function<Rational(const Rational&, long)> f)
      : s_(std::make_shared<State>()) {
    s_->f = std::move(f);
  }

  Rational eval(const Rational& q, long n) const {
    if (n < 0) n = 0;
    std::lock_guard<std::mutex> lock(s_->mu);
    auto key = std::make_pair(q, n);
    auto it = s_->memo.find(key);
    if (it != s_->memo.end()) return it->second;
    Rational v = s_->f(q, n);
    s_->memo.emplace(std::move(key), v);
    return v;
  }

  Interval enclosure(const Rational& q, long n) const {
    return Interval::around(eval(q, n), pow2(-n));
  }

 private:
  std::shared_ptr<State> s_;
};

// Single-valued output discipline for multivalued problems: the first
// certified choice is frozen and every later query reuses it.
template <class T>
class Commitment {
 public:
  template <class F>
  Outcome<T> ensure(F&& compute) {
    std::lock_guard<std::mutex> lock(mu_);
    if (v_) return *v_;
    Outcome<T> r = compute();
    if (r.ok()) v_ = r;
    return r;
  }
  std::optional<T> peek() const {
    std::lock_guard<std::mutex> lock(mu_);
    return v_ ? std::optional<T>(v_->value()) : std::nullopt;
  }

 private:
  mutable std::mutex mu_;
  std::optional<Outcome<T>> v_;
};

}  // namespace advreal
