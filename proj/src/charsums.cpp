#include "fqsimplex/charsums.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fqsimplex/parallel.hpp"

namespace fqsimplex {

GaussSum gauss_sum(const PrimeField& F) {
  CharacterValue s = 0;
  for (std::uint32_t x = 0; x < F.q(); ++x) s += F.chi(F.mul(FieldElement(x), FieldElement(x)));
  return {s, F.q()};
}

CharacterValue quadratic_sum_direct(const PrimeField& F, FieldElement a, const FqVector& b) {
  const std::size_t d = b.size();
  if (d == 0) throw DimensionError("quadratic sum needs d >= 1");
  FqVector x(d);
  CharacterValue s = 0;
  while (true) {
    const FieldElement phase = F.add(F.mul(a, length_sq(F, x)), dot(F, b, x));
    s += F.chi(phase);
    std::size_t i = 0;
    while (i < d && ++x[i] == F.q()) x[i++] = 0;
    if (i == d) break;
  }
  return s;
}

CharacterValue quadratic_sum_closed_form(const PrimeField& F, FieldElement a, const FqVector& b) {
  if (a.is_zero()) throw DomainError("quadratic sum identity requires a != 0");
  const std::size_t d = b.size();
  const CharacterValue g = gauss_sum(F).value;
  CharacterValue gd = 1;
  for (std::size_t i = 0; i < d; ++i) gd *= g;
  const int sign = (d % 2 == 1) ? F.eta(a) : 1;
  const FieldElement four_a_inv = F.inv(F.mul(F.of(4), a));
  const FieldElement phase = F.neg(F.mul(length_sq(F, b), four_a_inv));
  return gd * static_cast<double>(sign) * F.chi(phase);
}

CharacterValue twisted_kloosterman(const PrimeField& F, unsigned n, FieldElement a, FieldElement b) {
  CharacterValue s = 0;
  const bool odd = n % 2 == 1;
  for (std::uint32_t t = 1; t < F.q(); ++t) {
    const FieldElement st(t);
    const CharacterValue term = F.chi(F.add(F.mul(a, st), F.mul(b, F.inv(st))));
    s += odd ? term * static_cast<double>(F.eta(st)) : term;
  }
  return s;
}

namespace {

struct PerModulus {
  KloostermanRecord best;
  double gauss_dev = 0;
  double even_dev = 0;
};

PerModulus audit_one(std::uint32_t q) {
  const PrimeField F(q);
  const double root = std::sqrt(static_cast<double>(q));
  PerModulus out;
  out.best.q = q;
  for (unsigned n = 0; n < 2; ++n) {
    for (std::uint32_t a = 1; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        const auto raw = twisted_kloosterman(F, n, FieldElement(a), FieldElement(b));
        const double v = std::abs(raw);
        const double ratio = v / root;
        if (ratio > out.best.ratio_to_sqrt_q) out.best = {q, n, a, b, v, ratio};
        if (b == 0 && n == 1) out.gauss_dev = std::max(out.gauss_dev, std::abs(ratio - 1.0));
        if (b == 0 && n == 0) out.even_dev = std::max(out.even_dev, std::abs(raw + 1.0));
      }
    }
  }
  return out;
}

}  // namespace

WeilAudit weil_bound_audit(std::uint32_t q_max, std::size_t threads) {
  if (q_max > kMaxAuditModulus) {
    throw std::invalid_argument("audit modulus bound must be at most " +
                                std::to_string(kMaxAuditModulus));
  }
  const auto primes = odd_primes_up_to(q_max);
  std::vector<PerModulus> slots(primes.size());
  parallel_for(primes.size(), threads, [&](std::size_t i) { slots[i] = audit_one(primes[i]); });
  WeilAudit audit;
  for (const auto& s : slots) {
    audit.maxima.push_back(s.best);
    audit.max_ratio = std::max(audit.max_ratio, s.best.ratio_to_sqrt_q);
    audit.gauss_row_deviation = std::max(audit.gauss_row_deviation, s.gauss_dev);
    audit.even_row_deviation = std::max(audit.even_row_deviation, s.even_dev);
  }
  audit.pass = audit.max_ratio <= kWeilConstant && audit.gauss_row_deviation <= 1e-9 &&
               audit.even_row_deviation <= 1e-9;
  return audit;
}

}  // namespace fqsimplex
