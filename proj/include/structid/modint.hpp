#pragma once

#include "structid/rational.hpp"

#include <cstdint>
#include <ostream>
#include <stdexcept>

namespace structid {

/// Raised when a value with no multiplicative inverse is divided by. In the
/// probabilistic algorithms this means the random sample point hit a
/// denominator zero and the caller should resample.
class ZeroDivisor : public std::domain_error {
 public:
  ZeroDivisor() : std::domain_error("division by a non-invertible element") {}
  explicit ZeroDivisor(const std::string& what) : std::domain_error(what) {}
};

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

/// Element of the prime field Z/Modulus. Modulus must be prime and below 2^63.
/// The Mersenne modulus 2^61 - 1 uses shift-and-add reduction.
template <std::uint64_t Modulus>
class ModInt {
  static_assert(Modulus >= 2 && Modulus < (std::uint64_t{1} << 63));

 public:
  static constexpr std::uint64_t modulus = Modulus;

  constexpr ModInt() = default;
  constexpr explicit ModInt(std::uint64_t v) : v_(v % Modulus) {}

  static constexpr ModInt from_signed(std::int64_t v) {
    const std::int64_t r = v % static_cast<std::int64_t>(Modulus);
    return ModInt(static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(Modulus) : r));
  }

  /// Image of an exact rational; throws ZeroDivisor if the denominator
  /// vanishes modulo the prime.
  static ModInt from_rational(const Rational& r) {
    const BigInt m(Modulus);
    BigInt num = numerator(r) % m;
    if (num < 0) num += m;
    BigInt den = denominator(r) % m;
    ModInt d(den.convert_to<std::uint64_t>());
    return ModInt(num.convert_to<std::uint64_t>()) / d;
  }

  constexpr std::uint64_t value() const { return v_; }
  constexpr bool is_zero() const { return v_ == 0; }

  /// Multiplicative inverse by the extended Euclidean algorithm.
  ModInt inv() const {
    if (v_ == 0) throw ZeroDivisor("inverse of zero");
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(Modulus), new_r = static_cast<std::int64_t>(v_);
    while (new_r != 0) {
      const std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    return from_signed(t);
  }

  constexpr ModInt pow(std::uint64_t e) const {
    ModInt base = *this, acc(1);
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  constexpr ModInt& operator+=(ModInt o) {
    v_ += o.v_;
    if (v_ >= Modulus) v_ -= Modulus;
    return *this;
  }
  constexpr ModInt& operator-=(ModInt o) {
    v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + Modulus - o.v_;
    return *this;
  }
  constexpr ModInt& operator*=(ModInt o) {
    v_ = mul(v_, o.v_);
    return *this;
  }
  ModInt& operator/=(ModInt o) { return *this *= o.inv(); }

  friend constexpr ModInt operator+(ModInt a, ModInt b) { return a += b; }
  friend constexpr ModInt operator-(ModInt a, ModInt b) { return a -= b; }
  friend constexpr ModInt operator*(ModInt a, ModInt b) { return a *= b; }
  friend ModInt operator/(ModInt a, ModInt b) { return a /= b; }
  friend constexpr ModInt operator-(ModInt a) { return ModInt() - a; }
  friend constexpr bool operator==(ModInt a, ModInt b) { return a.v_ == b.v_; }
  friend constexpr bool operator!=(ModInt a, ModInt b) { return a.v_ != b.v_; }

  friend std::ostream& operator<<(std::ostream& os, ModInt a) { return os << a.v_; }

 private:
  static constexpr std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
    if constexpr (Modulus == kMersenne61) {
      std::uint64_t lo = static_cast<std::uint64_t>(z) & kMersenne61;
      std::uint64_t hi = static_cast<std::uint64_t>(z >> 61);
      std::uint64_t s = lo + hi;
      if (s >= kMersenne61) s -= kMersenne61;
      return s;
    } else {
      return static_cast<std::uint64_t>(z % Modulus);
    }
  }

  std::uint64_t v_ = 0;
};

/// The working field of every probabilistic computation.
using Fp = ModInt<kMersenne61>;

}  // namespace structid
