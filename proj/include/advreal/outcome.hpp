#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace advreal {

// Search/validation failures are ordinary values, never exceptions.
// Exceptions are reserved for malformed inputs (broken preconditions the
// caller could have checked).
enum class FailKind {
  FuelExhausted,
  AdviceSuspect,          // post-validation failed: advice cannot be truthful
  ClusterOvershoot,       // observed more classes than the advice admits
  MonotonicityViolation,  // an advice stream broke its monotone promise
  PreconditionViolated,   // detected inconsistency in the input data itself
};

inline const char* to_string(FailKind k) {
  switch (k) {
    case FailKind::FuelExhausted: return "FUEL_EXHAUSTED";
    case FailKind::AdviceSuspect: return "ADVICE_SUSPECT";
    case FailKind::ClusterOvershoot: return "CLUSTER_OVERSHOOT";
    case FailKind::MonotonicityViolation: return "MONOTONICITY_VIOLATION";
    case FailKind::PreconditionViolated: return "PRECONDITION_VIOLATED";
  }
  return "?";
}

struct Failure {
  FailKind kind;
  std::string detail;
};

// Thrown from inside an emitted name when a lazily evaluated query cannot be
// completed (typically: the shared fuel meter ran dry at a precision beyond
// what the emitting operation validated). Callers that force names convert
// this back into an Outcome failure.
struct NameFailure : std::runtime_error {
  FailKind kind;
  NameFailure(FailKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

template <class T>
class Outcome {
 public:
  Outcome(T value) : v_(std::move(value)) {}  // NOLINT: implicit by design
  Outcome(Failure f) : v_(std::move(f)) {}    // NOLINT
  static Outcome fail(FailKind k, std::string detail = "") {
    return Outcome(Failure{k, std::move(detail)});
  }

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw std::logic_error("Outcome::value on failure: " + failure().detail);
    return std::get<T>(v_);
  }
  T& value() & {
    if (!ok()) throw std::logic_error("Outcome::value on failure: " + failure().detail);
    return std::get<T>(v_);
  }
  T&& take() && {
    if (!ok()) throw std::logic_error("Outcome::take on failure: " + failure().detail);
    return std::get<T>(std::move(v_));
  }

  const Failure& failure() const {
    if (ok()) throw std::logic_error("Outcome::failure on success");
    return std::get<Failure>(v_);
  }
  FailKind kind() const { return failure().kind; }

  template <class U>
  Outcome<U> propagate() const {
    return Outcome<U>(failure());
  }

 private:
  std::variant<T, Failure> v_;
};

}  // namespace advreal
