#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace arbor {

/// A cardinal in {0, 1, 2, ...} ∪ {ω}.
///
/// Child multiplicities in a presentation are always >= 1; counts
/// (occurrences, branches, degree profiles) may be zero. Arithmetic is
/// checked: a finite result that overflows 64 bits throws std::overflow_error.
class Multiplicity {
 public:
  constexpr Multiplicity() = default;

  static constexpr Multiplicity finite(std::uint64_t n) { return Multiplicity(n, false); }
  static constexpr Multiplicity omega() { return Multiplicity(0, true); }

  constexpr bool is_omega() const noexcept { return omega_; }
  constexpr bool is_zero() const noexcept { return !omega_ && value_ == 0; }
  constexpr bool is_finite() const noexcept { return !omega_; }

  /// Finite value; throws std::logic_error for ω.
  std::uint64_t value() const;

  /// Number of copies materialised when ω is truncated to `width`.
  constexpr std::uint64_t materialized(std::uint64_t width) const noexcept {
    return omega_ ? width : value_;
  }

  /// min(*this, cap), with ω treated as larger than every finite value.
  constexpr Multiplicity capped(std::uint64_t cap) const noexcept {
    if (omega_ || value_ > cap) return finite(cap);
    return *this;
  }

  /// "w" for ω, decimal otherwise.
  std::string to_string() const;

  friend Multiplicity operator+(Multiplicity a, Multiplicity b);
  friend Multiplicity operator*(Multiplicity a, Multiplicity b);
  Multiplicity& operator+=(Multiplicity other) { return *this = *this + other; }

  friend constexpr bool operator==(Multiplicity a, Multiplicity b) noexcept {
    return a.omega_ == b.omega_ && (a.omega_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(Multiplicity a, Multiplicity b) noexcept {
    if (a.omega_ || b.omega_) return a.omega_ <=> b.omega_;
    return a.value_ <=> b.value_;
  }

 private:
  constexpr Multiplicity(std::uint64_t value, bool omega) : value_(value), omega_(omega) {}

  std::uint64_t value_ = 0;
  bool omega_ = false;
};

}  // namespace arbor
