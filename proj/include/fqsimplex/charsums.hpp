#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fqsimplex/field.hpp"
#include "fqsimplex/linalg.hpp"

namespace fqsimplex {

struct GaussSum {
  CharacterValue value;
  std::uint32_t q = 0;
};

/// G_q = sum_x chi(x^2).
GaussSum gauss_sum(const PrimeField& F);

/// sum over x in F_q^d of chi(a|x|^2 + b.x), by enumeration.
CharacterValue quadratic_sum_direct(const PrimeField& F, FieldElement a, const FqVector& b);

/// G_q^d eta(a)^d chi(-|b|^2 / 4a). Throws DomainError for a = 0.
CharacterValue quadratic_sum_closed_form(const PrimeField& F, FieldElement a, const FqVector& b);

/// sum over s != 0 of eta(s)^n chi(a s + b / s).
CharacterValue twisted_kloosterman(const PrimeField& F, unsigned n, FieldElement a, FieldElement b);

struct KloostermanRecord {
  std::uint32_t q = 0;
  unsigned n = 0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double abs_value = 0;
  double ratio_to_sqrt_q = 0;
};

struct WeilAudit {
  /// One record per q: the (n, a, b) with the largest ratio (first in scan order on ties).
  std::vector<KloostermanRecord> maxima;
  /// Largest ||sum| / sqrt(q) - 1| over rows with b = 0 and n odd.
  double gauss_row_deviation = 0;
  /// Largest |sum + 1| over rows with b = 0 and n even.
  double even_row_deviation = 0;
  double max_ratio = 0;
  bool pass = false;
};

constexpr std::uint32_t kMaxAuditModulus = 500;
constexpr double kWeilConstant = 2.0;

/// Every odd prime q <= q_max, n in {0, 1}, a != 0, all b.
/// Throws std::invalid_argument when q_max exceeds kMaxAuditModulus.
WeilAudit weil_bound_audit(std::uint32_t q_max, std::size_t threads = 1);

}  // namespace fqsimplex
