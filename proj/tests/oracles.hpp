#pragma once

// Slow, obviously-correct reference implementations used only by tests.

#include <complex>
#include <cstdint>
#include <vector>

#include "fqsimplex/field.hpp"
#include "fqsimplex/fourier.hpp"
#include "fqsimplex/linalg.hpp"
#include "fqsimplex/random.hpp"

namespace fqsimplex::oracle {

inline std::uint32_t dot_mod(const FqVector& a, const FqVector& b, std::uint32_t q) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<std::uint64_t>(a[i]) * b[i];
  return static_cast<std::uint32_t>(s % q);
}

inline CharacterValue chi(std::uint32_t q, std::int64_t a) {
  const double pi = 3.14159265358979323846;
  a %= static_cast<std::int64_t>(q);
  if (a < 0) a += q;
  return std::polar(1.0, 2.0 * pi * static_cast<double>(a) / q);
}

// f^(xi) = q^-d sum_x f(x) chi(-xi.x), O(q^{2d}).
inline SpectralFunction naive_transform(const DenseFunction& f) {
  const auto& g = f.grid();
  SpectralFunction out(f.q(), f.d());
  for (std::size_t xi = 0; xi < g.size(); ++xi) {
    const FqVector vxi = g.decode(xi);
    CharacterValue acc = 0;
    for (std::size_t x = 0; x < g.size(); ++x) {
      acc += f[x] * chi(f.q(), -static_cast<std::int64_t>(dot_mod(vxi, g.decode(x), f.q())));
    }
    out[xi] = acc / static_cast<double>(g.size());
  }
  return out;
}

inline DenseFunction random_function(std::uint32_t q, std::size_t d, Rng& rng) {
  DenseFunction f(q, d);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = CharacterValue(uniform_unit(rng) * 2 - 1, uniform_unit(rng) * 2 - 1);
  }
  return f;
}

inline double max_diff(std::span<const CharacterValue> a, std::span<const CharacterValue> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Every point of F_q^d, coordinate 0 fastest.
inline std::vector<FqVector> all_points(std::uint32_t q, std::size_t d) {
  std::vector<FqVector> pts;
  FqVector x(d);
  while (true) {
    pts.push_back(x);
    std::size_t i = 0;
    while (i < d && ++x[i] == q) x[i++] = 0;
    if (i == d) break;
  }
  return pts;
}

}  // namespace fqsimplex::oracle

namespace fqsimplex::oracle {

// #{(x, y_1..y_k)} with every x + y_i in A, {0, y} a simplex ordered-isometric to the reference.
inline std::uint64_t naive_count(const PrimeField& F, const std::vector<FqVector>& A,
                                 const Simplex& reference) {
  const std::size_t k = reference.k();
  const std::size_t d = reference.ambient_dim();
  const auto ref = reference.based_at_origin(F);
  std::uint64_t n = 0;
  std::vector<std::size_t> pick(k + 1, 0);
  while (true) {
    std::vector<FqVector> pts;
    for (auto i : pick) pts.push_back(A[i]);
    std::vector<FqVector> edges;
    for (std::size_t i = 1; i <= k; ++i) edges.push_back(sub(F, pts[i], pts[0]));
    if (linearly_independent(F, edges)) {
      std::vector<FqVector> based{FqVector(d)};
      based.insert(based.end(), edges.begin(), edges.end());
      if (is_isometric_ordered(F, Simplex::from_points(F, based), ref)) ++n;
    }
    std::size_t i = 0;
    while (i <= k && ++pick[i] == A.size()) pick[i++] = 0;
    if (i > k) break;
  }
  return n;
}

}  // namespace fqsimplex::oracle
