#include "fqsimplex/field.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fqsimplex {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t p = 3; p * p <= n; p += 2) {
    if (n % p == 0) return false;
  }
  return true;
}

std::vector<std::uint32_t> odd_primes_up_to(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  if (n < 3) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint32_t p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    if (p != 2) out.push_back(p);
    for (std::uint64_t m = static_cast<std::uint64_t>(p) * p; m <= n; m += p) {
      composite[m] = true;
    }
  }
  return out;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (q < 3 || q % 2 == 0 || !is_prime(q)) {
    throw DomainError("modulus must be an odd prime, got " + std::to_string(q));
  }
  if (q <= kTableLimit) {
    inv_table_.assign(q, 0);
    inv_table_[1] = 1;
    for (std::uint32_t a = 2; a < q; ++a) {
      // inv(a) = -(q/a) * inv(q mod a)
      inv_table_[a] = static_cast<std::uint32_t>(
          (q - static_cast<std::uint64_t>(q / a) * inv_table_[q % a] % q) % q);
    }
    root_table_.assign(q, -1);
    for (std::uint32_t x = 0; x <= q / 2; ++x) {
      const auto sq = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * x % q);
      if (root_table_[sq] < 0) root_table_[sq] = static_cast<std::int32_t>(x);
    }
    chi_table_.resize(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      const double theta = 2.0 * std::numbers::pi * a / q;
      chi_table_[a] = {std::cos(theta), std::sin(theta)};
    }
  }
  for (std::uint32_t a = 2; a < q; ++a) {
    if (eta(FieldElement(a)) < 0) {
      non_residue_ = FieldElement(a);
      break;
    }
  }
}

FieldElement PrimeField::pow(FieldElement a, std::uint64_t e) const {
  std::uint64_t base = a.value(), acc = 1;
  while (e > 0) {
    if (e & 1) acc = acc * base % q_;
    base = base * base % q_;
    e >>= 1;
  }
  return FieldElement(static_cast<std::uint32_t>(acc));
}

FieldElement PrimeField::inv(FieldElement a) const {
  if (a.is_zero()) throw DomainError("inverse of zero");
  if (!inv_table_.empty()) return FieldElement(inv_table_[a.value()]);
  return pow(a, q_ - 2);
}

int PrimeField::eta(FieldElement a) const {
  if (a.is_zero()) return 0;
  if (!root_table_.empty()) return root_table_[a.value()] >= 0 ? 1 : -1;
  return pow(a, (q_ - 1) / 2).value() == 1 ? 1 : -1;
}

std::optional<FieldElement> PrimeField::sqrt(FieldElement a) const {
  if (a.is_zero()) return zero();
  if (!root_table_.empty()) {
    const std::int32_t r = root_table_[a.value()];
    if (r < 0) return std::nullopt;
    return FieldElement(static_cast<std::uint32_t>(r));
  }
  if (eta(a) < 0) return std::nullopt;
  // Tonelli-Shanks
  std::uint32_t s = 0;
  std::uint64_t t = q_ - 1;
  while (t % 2 == 0) {
    t /= 2;
    ++s;
  }
  FieldElement c = pow(non_residue_, t);
  FieldElement x = pow(a, (t + 1) / 2);
  FieldElement b = pow(a, t);
  std::uint32_t m = s;
  while (b != one()) {
    std::uint32_t i = 0;
    FieldElement bb = b;
    while (bb != one()) {
      bb = mul(bb, bb);
      ++i;
    }
    FieldElement g = c;
    for (std::uint32_t k = 0; k + i + 1 < m; ++k) g = mul(g, g);
    x = mul(x, g);
    c = mul(g, g);
    b = mul(b, c);
    m = i;
  }
  if (x.value() > q_ / 2) x = neg(x);
  return x;
}

std::optional<FieldElement> PrimeField::sqrt_of_minus_one() const {
  if (q_ % 4 != 1) return std::nullopt;
  return sqrt(neg(one()));
}

CharacterValue PrimeField::chi(FieldElement a) const {
  if (!chi_table_.empty()) return chi_table_[a.value()];
  const double theta = 2.0 * std::numbers::pi * a.value() / q_;
  return {std::cos(theta), std::sin(theta)};
}

}  // namespace fqsimplex
