#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fqsimplex {

/// Residue modulo an odd prime. Carries no modulus; arithmetic goes through
/// the owning PrimeField.
class FieldElement {
 public:
  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint32_t v) : v_(v) {}

  constexpr std::uint32_t value() const { return v_; }
  constexpr bool is_zero() const { return v_ == 0; }

  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;

 private:
  std::uint32_t v_ = 0;
};

using CharacterValue = std::complex<double>;

/// Thrown for arithmetic that has no value in the field (inverse of zero,
/// unsupported moduli).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool is_prime(std::uint64_t n);
std::vector<std::uint32_t> odd_primes_up_to(std::uint32_t n);

/// The prime field F_q for an odd prime q, together with the quadratic
/// character eta and the canonical additive character chi(a) = exp(2 pi i a/q).
///
/// For q <= 2^16 the inverse, square-root and character tables are built once
/// at construction; larger moduli fall back to Euler's criterion,
/// Tonelli-Shanks and direct evaluation. The object is immutable afterwards.
class PrimeField {
 public:
  static constexpr std::uint32_t kTableLimit = 1u << 16;

  explicit PrimeField(std::uint32_t q);

  std::uint32_t q() const { return q_; }

  FieldElement of(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(q_);
    if (r < 0) r += q_;
    return FieldElement(static_cast<std::uint32_t>(r));
  }
  FieldElement zero() const { return FieldElement(0); }
  FieldElement one() const { return FieldElement(1); }

  FieldElement add(FieldElement a, FieldElement b) const {
    std::uint32_t s = a.value() + b.value();
    return FieldElement(s >= q_ ? s - q_ : s);
  }
  FieldElement sub(FieldElement a, FieldElement b) const {
    return FieldElement(a.value() >= b.value() ? a.value() - b.value()
                                               : a.value() + q_ - b.value());
  }
  FieldElement neg(FieldElement a) const {
    return FieldElement(a.value() == 0 ? 0 : q_ - a.value());
  }
  FieldElement mul(FieldElement a, FieldElement b) const {
    return FieldElement(static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(a.value()) * b.value() % q_));
  }
  FieldElement inv(FieldElement a) const;
  FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }
  FieldElement pow(FieldElement a, std::uint64_t e) const;

  /// Quadratic character: 0 at 0, 1 on nonzero squares, -1 otherwise.
  int eta(FieldElement a) const;
  bool is_square(FieldElement a) const { return eta(a) >= 0; }

  /// Some b with b^2 = a, or nullopt when a is a non-square.
  std::optional<FieldElement> sqrt(FieldElement a) const;

  /// i with i^2 = -1; present iff q = 1 (mod 4). The smaller root is returned.
  std::optional<FieldElement> sqrt_of_minus_one() const;

  /// Smallest quadratic non-residue.
  FieldElement non_residue() const { return non_residue_; }

  CharacterValue chi(FieldElement a) const;
  /// chi evaluated on an unreduced integer exponent.
  CharacterValue chi_raw(std::int64_t a) const { return chi(of(a)); }

 private:
  std::uint32_t q_;
  FieldElement non_residue_;
  std::vector<std::uint32_t> inv_table_;
  std::vector<std::int32_t> root_table_;  // -1 marks non-squares
  std::vector<CharacterValue> chi_table_;
};

}  // namespace fqsimplex
