#pragma once

#include <cstdint>
#include <limits>
#include <ostream>

namespace movekit {

// Saturating nonnegative cost value with a distinguished top element.
// Finite values loaded from instances are capped at 2^40 so that sums of
// any realistic pebble count stay exactly representable in 64 bits.
class Cost {
 public:
  static constexpr std::int64_t kFiniteCap = std::int64_t(1) << 40;

  constexpr Cost() : v_(0) {}
  constexpr explicit Cost(std::int64_t v) : v_(v) {}

  static constexpr Cost inf() { return Cost(kInf); }
  static constexpr Cost zero() { return Cost(0); }

  constexpr bool is_inf() const { return v_ == kInf; }
  constexpr bool is_finite() const { return v_ != kInf; }

  // Finite value; callers must check is_finite() first.
  constexpr std::int64_t value() const { return v_; }

  friend constexpr Cost operator+(Cost a, Cost b) {
    if (a.is_inf() || b.is_inf()) return inf();
    return Cost(a.v_ + b.v_);
  }
  Cost& operator+=(Cost o) { return *this = *this + o; }

  // count * cost with the convention 0 * inf == 0 (an unused route never
  // contributes, even when no such route exists).
  friend constexpr Cost scale(std::int64_t count, Cost c) {
    if (count == 0) return zero();
    if (c.is_inf()) return inf();
    return Cost(count * c.v_);
  }

  friend constexpr bool operator==(Cost a, Cost b) { return a.v_ == b.v_; }
  friend constexpr bool operator!=(Cost a, Cost b) { return a.v_ != b.v_; }
  friend constexpr bool operator<(Cost a, Cost b) { return a.v_ < b.v_; }
  friend constexpr bool operator<=(Cost a, Cost b) { return a.v_ <= b.v_; }
  friend constexpr bool operator>(Cost a, Cost b) { return a.v_ > b.v_; }
  friend constexpr bool operator>=(Cost a, Cost b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, Cost c) {
    if (c.is_inf()) return os << "inf";
    return os << c.v_;
  }

 private:
  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  std::int64_t v_;
};

inline Cost min(Cost a, Cost b) { return a < b ? a : b; }

}  // namespace movekit
