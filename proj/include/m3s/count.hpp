#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace m3s {

/// A value in N ∪ {∞}. Addition saturates at infinity; finite overflow throws.
class Count {
 public:
  constexpr Count() = default;

  static constexpr Count nat(std::uint64_t n) { return Count(n, false); }
  static constexpr Count infinity() { return Count(0, true); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }
  constexpr bool is_zero() const noexcept { return !infinite_ && value_ == 0; }

  std::uint64_t value() const {
    if (infinite_) throw std::logic_error("Count::value on infinity");
    return value_;
  }

  friend Count operator+(Count a, Count b) {
    if (a.infinite_ || b.infinite_) return infinity();
    if (a.value_ > std::numeric_limits<std::uint64_t>::max() - b.value_)
      throw std::overflow_error("Count addition overflow");
    return nat(a.value_ + b.value_);
  }

  Count& operator+=(Count other) { return *this = *this + other; }

  /// Scaling by a finite multiplicity; 0 · ∞ = 0.
  friend Count operator*(Count a, std::uint64_t factor) {
    if (factor == 0) return nat(0);
    if (a.infinite_) return infinity();
    if (a.value_ > std::numeric_limits<std::uint64_t>::max() / factor)
      throw std::overflow_error("Count multiplication overflow");
    return nat(a.value_ * factor);
  }

  friend constexpr bool operator==(Count a, Count b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

  friend constexpr std::strong_ordering operator<=>(Count a, Count b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const { return infinite_ ? "infinity" : std::to_string(value_); }

  friend std::ostream& operator<<(std::ostream& os, Count c) { return os << c.to_string(); }

 private:
  constexpr Count(std::uint64_t value, bool infinite) : value_(value), infinite_(infinite) {}

  std::uint64_t value_ = 0;
  bool infinite_ = false;
};

}  // namespace m3s
