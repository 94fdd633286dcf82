#include "fqsimplex/field.hpp"

#include <cmath>
#include <complex>

#include "gtest/gtest.h"

namespace fqsimplex {
namespace {

TEST(PrimeField, RejectsNonOddPrimes) {
  EXPECT_THROW(PrimeField(2), DomainError);
  EXPECT_THROW(PrimeField(9), DomainError);
  EXPECT_THROW(PrimeField(1), DomainError);
  EXPECT_NO_THROW(PrimeField(3));
}

TEST(PrimeField, BasicArithmetic) {
  const PrimeField F7(7);
  EXPECT_EQ(F7.add(F7.of(3), F7.of(5)), F7.of(1));
  EXPECT_EQ(F7.inv(F7.of(3)), F7.of(5));
  EXPECT_EQ(F7.sub(F7.of(2), F7.of(5)), F7.of(4));
  EXPECT_EQ(F7.div(F7.of(1), F7.of(3)), F7.of(5));
  const PrimeField F5(5);
  EXPECT_EQ(F5.neg(F5.zero()), F5.zero());
  EXPECT_EQ(F5.of(-1), F5.of(4));
}

TEST(PrimeField, InverseOfZeroIsADomainError) {
  const PrimeField F(11);
  EXPECT_THROW(F.inv(F.zero()), DomainError);
  EXPECT_THROW(F.div(F.one(), F.zero()), DomainError);
}

TEST(PrimeField, InverseMatchesBruteForce) {
  for (std::uint32_t q : {3u, 5u, 7u, 13u, 101u}) {
    const PrimeField F(q);
    for (std::uint32_t a = 1; a < q; ++a) {
      std::uint32_t brute = 0;
      for (std::uint32_t x = 1; x < q; ++x)
        if (a * x % q == 1) brute = x;
      EXPECT_EQ(F.inv(FieldElement(a)).value(), brute) << "q=" << q << " a=" << a;
    }
  }
}

TEST(PrimeField, LargeModulusUsesFallbackPaths) {
  const PrimeField F(70001);  // above the table limit
  const FieldElement a = F.of(12345);
  EXPECT_EQ(F.mul(a, F.inv(a)), F.one());
  const FieldElement sq = F.mul(a, a);
  ASSERT_TRUE(F.sqrt(sq).has_value());
  EXPECT_EQ(F.mul(*F.sqrt(sq), *F.sqrt(sq)), sq);
  EXPECT_EQ(F.eta(sq), 1);
  EXPECT_EQ(F.eta(F.mul(sq, F.non_residue())), -1);
  EXPECT_NEAR(std::abs(F.chi(a)), 1.0, 1e-12);
}

TEST(QuadraticCharacter, SpecExamples) {
  const PrimeField F(5);
  EXPECT_EQ(F.eta(F.zero()), 0);
  EXPECT_EQ(F.eta(F.one()), 1);
  EXPECT_EQ(F.eta(F.of(2)), -1);
}

TEST(QuadraticCharacter, MultiplicativeAndHalfSquares) {
  for (std::uint32_t q : odd_primes_up_to(101)) {
    const PrimeField F(q);
    int squares = 0;
    for (std::uint32_t a = 0; a < q; ++a) {
      if (a != 0 && F.eta(FieldElement(a)) == 1) ++squares;
      for (std::uint32_t b = 0; b < q; ++b) {
        ASSERT_EQ(F.eta(F.mul(FieldElement(a), FieldElement(b))),
                  F.eta(FieldElement(a)) * F.eta(FieldElement(b)))
            << q << " " << a << " " << b;
      }
    }
    EXPECT_EQ(squares, static_cast<int>((q - 1) / 2)) << q;
  }
}

TEST(AdditiveCharacter, IdentityAndUnitModulus) {
  const PrimeField F(13);
  EXPECT_EQ(F.chi(F.zero()), CharacterValue(1.0, 0.0));
  for (std::uint32_t a = 0; a < 13; ++a) {
    const auto c = F.chi(FieldElement(a));
    EXPECT_LE(std::abs(c.real() * c.real() + c.imag() * c.imag() - 1.0), 1e-12);
  }
  const PrimeField F5(5);
  const auto prod = F5.chi(F5.of(1)) * F5.chi(F5.of(4));
  EXPECT_NEAR(prod.real(), 1.0, 1e-12);
  EXPECT_NEAR(prod.imag(), 0.0, 1e-12);
}

TEST(AdditiveCharacter, HomomorphismAndOrthogonality) {
  for (std::uint32_t q : odd_primes_up_to(61)) {
    const PrimeField F(q);
    for (std::uint32_t y = 0; y < q; ++y) {
      CharacterValue sum = 0;
      for (std::uint32_t a = 0; a < q; ++a) sum += F.chi(F.mul(FieldElement(y), FieldElement(a)));
      if (y == 0) {
        EXPECT_NEAR(sum.real(), q, 1e-9);
      } else {
        EXPECT_LT(std::abs(sum), 1e-9) << "q=" << q << " y=" << y;
      }
    }
    for (std::uint32_t a = 0; a < q; a += 3) {
      for (std::uint32_t b = 0; b < q; b += 2) {
        const auto lhs = F.chi(F.add(FieldElement(a), FieldElement(b)));
        const auto rhs = F.chi(FieldElement(a)) * F.chi(FieldElement(b));
        EXPECT_LT(std::abs(lhs - rhs), 1e-12);
      }
    }
  }
}

TEST(SqrtOfMinusOne, PresentExactlyWhenQIsOneModFour) {
  EXPECT_EQ(PrimeField(5).sqrt_of_minus_one()->value(), 2u);
  EXPECT_FALSE(PrimeField(7).sqrt_of_minus_one().has_value());
  EXPECT_EQ(PrimeField(13).sqrt_of_minus_one()->value(), 5u);
  for (std::uint32_t q : odd_primes_up_to(200)) {
    const PrimeField F(q);
    const auto i = F.sqrt_of_minus_one();
    ASSERT_EQ(i.has_value(), q % 4 == 1) << q;
    if (i) EXPECT_EQ(F.mul(*i, *i).value(), q - 1);
  }
}

TEST(Primes, SieveMatchesTrialDivision) {
  const auto ps = odd_primes_up_to(101);
  EXPECT_EQ(ps.front(), 3u);
  EXPECT_EQ(ps.back(), 101u);
  EXPECT_EQ(ps.size(), 25u);
  for (auto p : ps) EXPECT_TRUE(is_prime(p));
}

}  // namespace
}  // namespace fqsimplex
