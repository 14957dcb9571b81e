#include "arbor/multiplicity.hpp"

#include <stdexcept>

namespace arbor {

std::uint64_t Multiplicity::value() const {
  if (omega_) throw std::logic_error("omega has no finite value");
  return value_;
}

std::string Multiplicity::to_string() const { return omega_ ? "w" : std::to_string(value_); }

Multiplicity operator+(Multiplicity a, Multiplicity b) {
  if (a.omega_ || b.omega_) return Multiplicity::omega();
  std::uint64_t sum = 0;
  if (__builtin_add_overflow(a.value_, b.value_, &sum)) {
    throw std::overflow_error("multiplicity sum overflows");
  }
  return Multiplicity::finite(sum);
}

Multiplicity operator*(Multiplicity a, Multiplicity b) {
  if (a.is_zero() || b.is_zero()) return Multiplicity{};
  if (a.omega_ || b.omega_) return Multiplicity::omega();
  std::uint64_t product = 0;
  if (__builtin_mul_overflow(a.value_, b.value_, &product)) {
    throw std::overflow_error("multiplicity product overflows");
  }
  return Multiplicity::finite(product);
}

}  // namespace arbor
