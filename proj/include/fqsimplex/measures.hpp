#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fqsimplex/field.hpp"
#include "fqsimplex/fourier.hpp"
#include "fqsimplex/linalg.hpp"
#include "fqsimplex/random.hpp"

namespace fqsimplex {

/// q on the sphere {|y|^2 = radius_sq}, 0 elsewhere.
struct SphericalMeasure {
  FieldElement radius_sq;
  DenseFunction values;
};

SphericalMeasure build_sigma(const PrimeField& F, FieldElement radius_sq, std::size_t d);

/// q^j on {y : y_i.y = targets[i-1] for each anchor y_i, |y|^2 = targets.back()}.
struct ConditionalMeasure {
  std::vector<FqVector> anchors;
  std::vector<FieldElement> targets;
  DenseFunction values;
};

/// Points y satisfying the anchor dot conditions and the length condition.
/// Requires targets.size() == anchors.size() + 1.
std::vector<FqVector> conditional_support(const PrimeField& F, std::size_t d,
                                          std::span<const FqVector> anchors,
                                          std::span<const FieldElement> targets);

ConditionalMeasure build_conditional(const PrimeField& F, std::size_t d,
                                     std::vector<FqVector> anchors,
                                     std::vector<FieldElement> targets);

/// (v_1.v_j, ..., v_{j-1}.v_j, |v_j|^2) for the edges v_i of the reference simplex.
std::vector<FieldElement> conditional_targets(const PrimeField& F, const Simplex& reference,
                                              std::size_t j);

/// Indicator of Span(anchors) as a function of xi.
SpectralFunction span_delta(const PrimeField& F, std::size_t d, std::span<const FqVector> anchors);

/// q^{1+2+...+k} if (y_1..y_k) has the Gram matrix of the reference edges,
/// else 0. Throws std::overflow_error if the weight does not fit in 64 bits.
std::uint64_t detection_product(const PrimeField& F, std::span<const FqVector> ys,
                                const Simplex& reference);

/// Exact q^e in 64 bits; throws std::overflow_error.
std::uint64_t checked_pow(std::uint64_t base, std::size_t e);

struct SphereReport {
  std::string lemma;  // "3.2" (nonzero radius) or "3.4" (zero radius)
  std::uint32_t q = 0;
  std::size_t d = 0;
  std::uint32_t radius_sq = 0;
  double err_at_zero = 0;      // |sigma^(0) - 1|
  double max_err_nonzero = 0;  // max over xi != 0 of |sigma^(xi)|
  double bound = 0;
  double implied_constant = 0;  // max of both errors over bound
};

/// Requires d >= 2.
SphereReport verify_sphere_asymptotic(const PrimeField& F, FieldElement radius_sq, std::size_t d,
                                      std::size_t threads = 1);

struct ConditionalReport {
  std::string lemma;  // "3.3" when r_j = j, "3.5" otherwise
  std::uint32_t q = 0;
  std::size_t d = 0;
  std::size_t j = 0;
  std::size_t rank = 0;  // r_j
  double max_err_on_span = 0;
  double max_err_off_span = 0;
  double max_err = 0;
  double bound = 0;
  double implied_constant = 0;
};

/// Compares |sigma^_{y_1..y_{j-1}}| with the anchor-span indicator over all xi.
/// The anchors must be independent with the Gram matrix of the first j-1
/// reference edges; throws IsometryError otherwise. Requires 2 <= j <= k.
ConditionalReport verify_conditional_asymptotic(const PrimeField& F, const Simplex& reference,
                                                std::size_t j,
                                                std::span<const FqVector> anchors,
                                                std::size_t threads = 1);

/// Random independent (y_1..y_m) with the Gram matrix of the first m reference
/// edges. A random orthogonal image when that Gram matrix is nonsingular,
/// otherwise sequential sampling from the constrained solution sets.
/// Throws std::runtime_error if degenerate sampling keeps dead-ending.
std::vector<FqVector> sample_anchors(const PrimeField& F, const Simplex& reference,
                                     std::size_t m, Rng& rng);

/// First simplex {0, v_1, ..., v_k} in F_q^d, searching vectors in index order
/// with backtracking, whose prefix ranks are exactly `ranks`.
std::optional<Simplex> find_simplex_with_prefix_ranks(const PrimeField& F, std::size_t d,
                                                      std::span<const std::size_t> ranks);

}  // namespace fqsimplex
