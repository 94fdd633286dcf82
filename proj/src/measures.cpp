#include "fqsimplex/measures.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fqsimplex {

std::uint64_t checked_pow(std::uint64_t base, std::size_t e) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) {
      throw std::overflow_error("integer weight exceeds 64 bits");
    }
    out *= base;
  }
  return out;
}

SphericalMeasure build_sigma(const PrimeField& F, FieldElement radius_sq, std::size_t d) {
  SphericalMeasure s{radius_sq, DenseFunction(F.q(), d)};
  const auto& grid = s.values.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (length_sq(F, grid.decode(i)) == radius_sq) s.values[i] = static_cast<double>(F.q());
  }
  return s;
}

std::vector<FqVector> conditional_support(const PrimeField& F, std::size_t d,
                                          std::span<const FqVector> anchors,
                                          std::span<const FieldElement> targets) {
  if (targets.size() != anchors.size() + 1) {
    throw DimensionError("conditional measure needs one target per anchor plus a length target");
  }
  std::vector<FqVector> out;
  const auto affine = solve_linear(F, anchors, targets.first(anchors.size()), d);
  if (!affine) return out;
  const FieldElement len = targets.back();
  for_each_point(F, *affine, [&](const FqVector& y) {
    if (length_sq(F, y) == len) out.push_back(y);
  });
  return out;
}

ConditionalMeasure build_conditional(const PrimeField& F, std::size_t d,
                                     std::vector<FqVector> anchors,
                                     std::vector<FieldElement> targets) {
  const auto support = conditional_support(F, d, anchors, targets);
  DenseFunction values(F.q(), d);
  const double weight = std::pow(static_cast<double>(F.q()), static_cast<double>(anchors.size() + 1));
  for (const auto& y : support) values[values.grid().encode(y)] = weight;
  return {std::move(anchors), std::move(targets), std::move(values)};
}

std::vector<FieldElement> conditional_targets(const PrimeField& F, const Simplex& reference,
                                              std::size_t j) {
  const auto v = reference.edges(F);
  if (j == 0 || j > v.size()) throw std::invalid_argument("target index must be in 1..k");
  std::vector<FieldElement> t;
  for (std::size_t i = 0; i + 1 < j; ++i) t.push_back(dot(F, v[i], v[j - 1]));
  t.push_back(length_sq(F, v[j - 1]));
  return t;
}

SpectralFunction span_delta(const PrimeField& F, std::size_t d, std::span<const FqVector> anchors) {
  SpectralFunction out(F.q(), d);
  const auto V = Subspace::span(F, d, anchors);
  for (const auto& x : V.elements(F)) out[out.grid().encode(x)] = 1.0;
  return out;
}

std::uint64_t detection_product(const PrimeField& F, std::span<const FqVector> ys,
                                const Simplex& reference) {
  const auto v = reference.edges(F);
  const std::size_t k = v.size();
  if (ys.size() != k) throw DimensionError("tuple length must equal the simplex dimension k");
  const std::uint64_t weight = checked_pow(F.q(), k * (k + 1) / 2);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      if (dot(F, ys[i], ys[j]) != dot(F, v[i], v[j])) return 0;
    }
  }
  return weight;
}

SphereReport verify_sphere_asymptotic(const PrimeField& F, FieldElement radius_sq, std::size_t d,
                                      std::size_t threads) {
  if (d < 2) throw DimensionError("sphere asymptotics need d >= 2");
  const auto sigma = build_sigma(F, radius_sq, d);
  const auto hat = fourier_transform(F, sigma.values, threads);
  SphereReport r;
  r.lemma = radius_sq.is_zero() ? "3.4" : "3.2";
  r.q = F.q();
  r.d = d;
  r.radius_sq = radius_sq.value();
  r.err_at_zero = std::abs(hat[0] - CharacterValue(1.0));
  for (std::size_t i = 1; i < hat.size(); ++i) r.max_err_nonzero = std::max(r.max_err_nonzero, std::abs(hat[i]));
  const double qd = static_cast<double>(F.q());
  const double dd = static_cast<double>(d);
  r.bound = radius_sq.is_zero() ? std::pow(qd, 1.0 - dd / 2) : std::pow(qd, (1.0 - dd) / 2);
  r.implied_constant = std::max(r.err_at_zero, r.max_err_nonzero) / r.bound;
  return r;
}

namespace {

void require_isometric_anchors(const PrimeField& F, std::span<const FqVector> reference_edges,
                               std::span<const FqVector> anchors) {
  if (!linearly_independent(F, anchors) || !same_gram(F, anchors, reference_edges)) {
    throw IsometryError("anchors are not isometric to the reference prefix");
  }
}

std::size_t gram_rank(const PrimeField& F, std::span<const FqVector> vs) {
  if (vs.empty()) return 0;
  return matrix_rank(F, gram_of(F, vs).matrix());
}

}  // namespace

ConditionalReport verify_conditional_asymptotic(const PrimeField& F, const Simplex& reference,
                                                std::size_t j,
                                                std::span<const FqVector> anchors,
                                                std::size_t threads) {
  const auto v = reference.edges(F);
  if (j < 2 || j > v.size()) throw std::invalid_argument("conditional asymptotics need 2 <= j <= k");
  if (anchors.size() != j - 1) throw DimensionError("need exactly j-1 anchors");
  require_isometric_anchors(F, std::span(v).first(j - 1), anchors);
  const std::size_t d = reference.ambient_dim();

  const auto measure = build_conditional(F, d, {anchors.begin(), anchors.end()},
                                         conditional_targets(F, reference, j));
  const auto hat = fourier_transform(F, measure.values, threads);
  const auto delta = span_delta(F, d, anchors);

  ConditionalReport r;
  r.q = F.q();
  r.d = d;
  r.j = j;
  r.rank = gram_rank(F, std::span(v).first(j));
  r.lemma = r.rank == j ? "3.3" : "3.5";
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const double err = std::abs(std::abs(hat[i]) - delta[i].real());
    if (delta[i].real() > 0) {
      r.max_err_on_span = std::max(r.max_err_on_span, err);
    } else {
      r.max_err_off_span = std::max(r.max_err_off_span, err);
    }
  }
  r.max_err = std::max(r.max_err_on_span, r.max_err_off_span);
  r.bound = std::pow(static_cast<double>(F.q()),
                     static_cast<double>(j) - static_cast<double>(d + r.rank) / 2);
  r.implied_constant = r.max_err / r.bound;
  return r;
}

std::vector<FqVector> sample_anchors(const PrimeField& F, const Simplex& reference, std::size_t m,
                                     Rng& rng) {
  const auto v = reference.edges(F);
  if (m > v.size()) throw std::invalid_argument("more anchors requested than the simplex has edges");
  const std::size_t d = reference.ambient_dim();
  const std::span<const FqVector> prefix = std::span(v).first(m);
  if (gram_rank(F, prefix) == m) {
    const auto U = random_orthogonal(F, d, rng);
    std::vector<FqVector> ys;
    for (const auto& x : prefix) ys.push_back(apply(F, U, x));
    return ys;
  }
  constexpr int kAttempts = 200;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<FqVector> ys;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<FieldElement> targets;
      for (std::size_t l = 0; l < i; ++l) targets.push_back(dot(F, v[l], v[i]));
      targets.push_back(length_sq(F, v[i]));
      auto candidates = conditional_support(F, d, ys, targets);
      std::erase_if(candidates, [&](const FqVector& y) {
        auto ext = ys;
        ext.push_back(y);
        return !linearly_independent(F, ext);
      });
      if (candidates.empty()) break;
      ys.push_back(candidates[uniform_below(rng, candidates.size())]);
    }
    if (ys.size() == m) return ys;
  }
  throw std::runtime_error("could not sample anchors isometric to the reference prefix");
}

namespace {

bool extend_search(const PrimeField& F, const PointIndexer& grid,
                   std::span<const std::size_t> ranks, std::vector<FqVector>& chosen) {
  if (chosen.size() == ranks.size()) return true;
  for (std::size_t idx = 1; idx < grid.size(); ++idx) {
    chosen.push_back(grid.decode(idx));
    if (linearly_independent(F, chosen) && gram_rank(F, chosen) == ranks[chosen.size() - 1] &&
        extend_search(F, grid, ranks, chosen)) {
      return true;
    }
    chosen.pop_back();
  }
  return false;
}

}  // namespace

std::optional<Simplex> find_simplex_with_prefix_ranks(const PrimeField& F, std::size_t d,
                                                      std::span<const std::size_t> ranks) {
  if (ranks.empty() || ranks.size() > d) return std::nullopt;
  // Each added edge moves the radical dimension by at most one, and the radical
  // of an i-dimensional span fits inside its complement: d >= 2i - r_i.
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    const std::size_t prev = i == 0 ? 0 : ranks[i - 1];
    if (ranks[i] > i + 1 || ranks[i] < prev || ranks[i] > prev + 2 || 2 * (i + 1) > d + ranks[i]) {
      return std::nullopt;
    }
  }
  const PointIndexer grid(F.q(), d);
  std::vector<FqVector> chosen;
  if (!extend_search(F, grid, ranks, chosen)) return std::nullopt;
  std::vector<FqVector> pts{FqVector(d)};
  pts.insert(pts.end(), chosen.begin(), chosen.end());
  return Simplex::from_points(F, std::move(pts));
}

}  // namespace fqsimplex
