#pragma once

#include <atomic>
#include <cstdint>
#include <memory>

namespace advreal {

// Budget for semi-decision procedures. Copies share the step meter, so a
// caller can hand the same Fuel to nested searches and read total usage back.
class Fuel {
 public:
  Fuel() : Fuel(64, 1'000'000) {}
  Fuel(long max_precision, std::int64_t max_steps)
      : max_precision_(max_precision),
        max_steps_(max_steps),
        used_(std::make_shared<std::atomic<std::int64_t>>(0)) {}

  long max_precision() const { return max_precision_; }
  std::int64_t max_steps() const { return max_steps_; }
  std::int64_t steps_used() const { return used_->load(); }

  // Records n steps; false once the budget is gone.
  bool spend(std::int64_t n = 1) const {
    return used_->fetch_add(n) + n <= max_steps_;
  }
  bool exhausted() const { return used_->load() >= max_steps_; }
  bool allows_precision(long p) const { return p <= max_precision_; }

 private:
  long max_precision_;
  std::int64_t max_steps_;
  std::shared_ptr<std::atomic<std::int64_t>> used_;
};

}  // namespace advreal
