#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fqsimplex/field.hpp"
#include "fqsimplex/random.hpp"

namespace fqsimplex {

/// A point of F_q^d. Coordinates are stored as reduced residues; build from
/// arbitrary integers with make_vector().
class FqVector {
 public:
  FqVector() = default;
  explicit FqVector(std::size_t d) : c_(d, 0) {}
  FqVector(std::initializer_list<std::uint32_t> coords) : c_(coords) {}
  explicit FqVector(std::vector<std::uint32_t> coords) : c_(std::move(coords)) {}

  std::size_t size() const { return c_.size(); }
  std::uint32_t operator[](std::size_t i) const { return c_[i]; }
  std::uint32_t& operator[](std::size_t i) { return c_[i]; }
  FieldElement at(std::size_t i) const { return FieldElement(c_[i]); }
  const std::vector<std::uint32_t>& coords() const { return c_; }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }
  bool is_zero() const;

  friend bool operator==(const FqVector&, const FqVector&) = default;
  friend auto operator<=>(const FqVector&, const FqVector&) = default;

 private:
  std::vector<std::uint32_t> c_;
};

FqVector make_vector(const PrimeField& F, std::span<const std::int64_t> coords);
FqVector make_vector(const PrimeField& F, std::initializer_list<std::int64_t> coords);
FqVector unit_vector(std::size_t d, std::size_t i);

/// Thrown when operands live in different dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

FieldElement dot(const PrimeField& F, const FqVector& v, const FqVector& w);
FieldElement length_sq(const PrimeField& F, const FqVector& v);
FqVector add(const PrimeField& F, const FqVector& v, const FqVector& w);
FqVector sub(const PrimeField& F, const FqVector& v, const FqVector& w);
FqVector scale(const PrimeField& F, FieldElement c, const FqVector& v);
/// v + c*w
FqVector axpy(const PrimeField& F, const FqVector& v, FieldElement c, const FqVector& w);

/// Dense row-major matrix over F_q.
class FqMatrix {
 public:
  FqMatrix() = default;
  FqMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static FqMatrix identity(std::size_t n);
  /// Matrix whose columns are the given vectors.
  static FqMatrix from_columns(std::span<const FqVector> cols, std::size_t d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::uint32_t& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  FqVector row(std::size_t i) const;
  FqMatrix transposed() const;

  friend bool operator==(const FqMatrix&, const FqMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint32_t> a_;
};

FqMatrix multiply(const PrimeField& F, const FqMatrix& A, const FqMatrix& B);
FqVector apply(const PrimeField& F, const FqMatrix& A, const FqVector& v);
std::size_t matrix_rank(const PrimeField& F, FqMatrix A);
/// Throws DomainError when A is singular.
FqMatrix inverse(const PrimeField& F, const FqMatrix& A);
/// A^T A == I.
bool is_orthogonal(const PrimeField& F, const FqMatrix& A);

/// Reduced row-echelon form of the given rows with zero rows dropped.
std::vector<FqVector> row_reduce(const PrimeField& F, std::vector<FqVector> rows);

/// Basis of {x : r.x = 0 for every r in rows}.
std::vector<FqVector> kernel(const PrimeField& F, std::span<const FqVector> rows, std::size_t d);

/// Linearly independent iff the row-reduced form keeps every vector.
bool linearly_independent(const PrimeField& F, std::span<const FqVector> vectors);

/// x0 + span(directions).
struct AffineSubspace {
  FqVector offset;
  std::vector<FqVector> directions;
};

/// Solution set of rows[i].x = rhs[i], or nullopt if inconsistent.
std::optional<AffineSubspace> solve_linear(const PrimeField& F, std::span<const FqVector> rows,
                                           std::span<const FieldElement> rhs, std::size_t d);

/// Enumerates offset + sum c_i directions_i for all coefficient tuples.
template <class Fn>
void for_each_point(const PrimeField& F, const AffineSubspace& S, Fn&& fn) {
  const std::size_t m = S.directions.size();
  std::vector<std::uint32_t> c(m, 0);
  FqVector x = S.offset;
  while (true) {
    fn(static_cast<const FqVector&>(x));
    std::size_t i = 0;
    for (; i < m; ++i) {
      const FqVector& dir = S.directions[i];
      for (std::size_t t = 0; t < x.size(); ++t) {
        const std::uint32_t s = x[t] + dir[t];
        x[t] = s >= F.q() ? s - F.q() : s;
      }
      if (++c[i] < F.q()) break;
      c[i] = 0;  // wrapped: q additions of the same direction return to start
    }
    if (i == m) return;
  }
}

/// A linear subspace of F_q^d kept in reduced row-echelon form, so equal
/// subspaces compare equal.
class Subspace {
 public:
  Subspace() = default;
  static Subspace zero(std::size_t d);
  static Subspace whole(std::size_t d);
  static Subspace span(const PrimeField& F, std::size_t d, std::span<const FqVector> vectors);

  std::size_t ambient_dim() const { return d_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<FqVector>& basis() const { return basis_; }
  bool contains(const PrimeField& F, const FqVector& v) const;
  /// All q^dim elements.
  std::vector<FqVector> elements(const PrimeField& F) const;

  friend bool operator==(const Subspace&, const Subspace&) = default;

 private:
  std::size_t d_ = 0;
  std::vector<FqVector> basis_;
};

Subspace orthogonal_complement(const PrimeField& F, const Subspace& V);
Subspace subspace_sum(const PrimeField& F, const Subspace& U, const Subspace& W);
Subspace intersection(const PrimeField& F, const Subspace& U, const Subspace& W);
/// V intersected with its orthogonal complement.
Subspace radical(const PrimeField& F, const Subspace& V);

/// k+1 points whose differences from the first point are linearly
/// independent. Point order is significant.
class Simplex {
 public:
  Simplex() = default;
  /// Throws std::invalid_argument on empty input, ragged dimensions or
  /// dependent differences.
  static Simplex from_points(const PrimeField& F, std::vector<FqVector> points);
  /// {0, e_1, ..., e_k} in F_q^d.
  static Simplex standard(std::size_t k, std::size_t d);

  std::size_t k() const { return points_.size() - 1; }
  std::size_t ambient_dim() const { return points_.front().size(); }
  const std::vector<FqVector>& points() const { return points_; }
  /// v_i - v_0 for i = 1..k.
  std::vector<FqVector> edges(const PrimeField& F) const;
  /// Zero-pads into F_q^d (d >= ambient_dim()).
  Simplex embedded(std::size_t d) const;
  /// points[perm[0]], points[perm[1]], ...
  Simplex permuted(std::span<const std::size_t> perm) const;
  /// {0, v_1 - v_0, ..., v_k - v_0}
  Simplex based_at_origin(const PrimeField& F) const;

  friend bool operator==(const Simplex&, const Simplex&) = default;

 private:
  std::vector<FqVector> points_;
};

Simplex standard_simplex(std::size_t k, std::size_t d);

/// Symmetric k x k matrix of dot products (v_i - v_0).(v_j - v_0).
class GramMatrix {
 public:
  GramMatrix() = default;
  explicit GramMatrix(FqMatrix m) : m_(std::move(m)) {}
  std::size_t size() const { return m_.rows(); }
  FieldElement at(std::size_t i, std::size_t j) const { return FieldElement(m_(i, j)); }
  const FqMatrix& matrix() const { return m_; }
  /// Leading j x j block, the Gram matrix of the prefix simplex.
  GramMatrix leading(std::size_t j) const;
  friend bool operator==(const GramMatrix&, const GramMatrix&) = default;

 private:
  FqMatrix m_;
};

GramMatrix gram_matrix(const PrimeField& F, const Simplex& s);
/// Gram matrix of vectors taken as edges from the origin.
GramMatrix gram_of(const PrimeField& F, std::span<const FqVector> vectors);

/// k - dim(V cap V-perp) with V spanned by the edges.
std::size_t simplex_rank(const PrimeField& F, const Simplex& s);
/// Ranks of the prefix simplices {v_0, ..., v_j} for j = 1..k.
std::vector<std::size_t> prefix_ranks(const PrimeField& F, const Simplex& s);

/// Gram equality under the given orderings. Throws DimensionError if k differs.
bool is_isometric_ordered(const PrimeField& F, const Simplex& a, const Simplex& b);
/// Same test on raw edge tuples; independence is not required.
bool same_gram(const PrimeField& F, std::span<const FqVector> a, std::span<const FqVector> b);

inline constexpr std::size_t kMaxPermutationK = 6;

/// Unordered isometry: some ordering of b matches a. k <= 6.
bool is_isometric(const PrimeField& F, const Simplex& a, const Simplex& b);

/// Number of vertex orderings of s that are ordered-isometric to s itself.
std::size_t gram_automorphism_count(const PrimeField& F, const Simplex& s);

/// Thrown if no vertex ordering attains the prefix ranks min(j, r).
class NoPrefixOrdering : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// First vertex ordering (lexicographic in the permutation, identity first)
/// whose prefixes have ranks min(j, r). k <= 6.
Simplex reorder_for_prefix_ranks(const PrimeField& F, const Simplex& s);

class IsometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Orthogonal U on F_q^d with U(source[i]) = target[i]. Requires equal and
/// nonsingular Gram matrices; throws IsometryError otherwise.
FqMatrix extend_isometry(const PrimeField& F, std::span<const FqVector> source,
                         std::span<const FqVector> target, std::size_t d);

/// Product of d reflections in random anisotropic vectors.
FqMatrix random_orthogonal(const PrimeField& F, std::size_t d, Rng& rng);

/// W in F_q^{2m} with dim W = m and W = W-perp. Requires q = 1 (mod 4).
Subspace construct_self_dual_subspace(const PrimeField& F, std::size_t m);

/// Rank-r k-simplex in F_q^{2k-r}: r standard basis vectors followed by a
/// basis of a self-dual subspace of the remaining 2(k-r) coordinates.
Simplex construct_extremal_simplex(const PrimeField& F, std::size_t k, std::size_t r);

}  // namespace fqsimplex
