#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace mssp {

/// Path weight compared lexicographically: application-unit `base` first,
/// then the tie-breaking `perturb` sum. The distinguished infinite value is
/// absorbing under addition and compares greater than every finite weight.
class LexWeight {
 public:
  using Base = std::uint64_t;
  using Perturb = unsigned __int128;

  constexpr LexWeight() = default;
  constexpr explicit LexWeight(Base base, Perturb perturb = 0) : base_(base), perturb_(perturb) {}

  static constexpr LexWeight infinity() {
    return LexWeight(kInfBase, std::numeric_limits<Perturb>::max());
  }

  constexpr Base base() const { return base_; }
  constexpr Perturb perturb() const { return perturb_; }
  constexpr bool is_infinite() const { return base_ == kInfBase; }

  constexpr LexWeight operator+(const LexWeight& other) const {
    if (is_infinite() || other.is_infinite()) return infinity();
    return LexWeight(base_ + other.base_, perturb_ + other.perturb_);
  }
  constexpr LexWeight& operator+=(const LexWeight& other) { return *this = *this + other; }

  constexpr auto operator<=>(const LexWeight&) const = default;

  /// Largest base value a finite weight may carry.
  static constexpr Base kMaxFiniteBase = std::numeric_limits<Base>::max() - 1;

 private:
  static constexpr Base kInfBase = std::numeric_limits<Base>::max();

  Base base_ = 0;
  Perturb perturb_ = 0;
};

std::string to_string(LexWeight::Perturb value);
std::string to_string(const LexWeight& w);
std::ostream& operator<<(std::ostream& os, const LexWeight& w);

}  // namespace mssp
