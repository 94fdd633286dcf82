#include "fqsimplex/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace fqsimplex {

namespace {

void require_same_dim(const FqVector& v, const FqVector& w) {
  if (v.size() != w.size()) {
    throw DimensionError("dimension mismatch: " + std::to_string(v.size()) + " vs " +
                         std::to_string(w.size()));
  }
}

std::size_t pivot_of(const FqVector& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] != 0) return i;
  }
  return row.size();
}

// Reduces v against rows already in reduced row-echelon form.
FqVector reduce_against(const PrimeField& F, FqVector v, const std::vector<FqVector>& rref) {
  for (const auto& row : rref) {
    const std::size_t p = pivot_of(row);
    if (v[p] != 0) v = axpy(F, v, F.neg(v.at(p)), row);
  }
  return v;
}

}  // namespace

bool FqVector::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](std::uint32_t x) { return x == 0; });
}

FqVector make_vector(const PrimeField& F, std::span<const std::int64_t> coords) {
  std::vector<std::uint32_t> c;
  c.reserve(coords.size());
  for (std::int64_t x : coords) c.push_back(F.of(x).value());
  return FqVector(std::move(c));
}

FqVector make_vector(const PrimeField& F, std::initializer_list<std::int64_t> coords) {
  return make_vector(F, std::span<const std::int64_t>(coords.begin(), coords.size()));
}

FqVector unit_vector(std::size_t d, std::size_t i) {
  FqVector v(d);
  v[i] = 1;
  return v;
}

FieldElement dot(const PrimeField& F, const FqVector& v, const FqVector& w) {
  require_same_dim(v, w);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc += static_cast<std::uint64_t>(v[i]) * w[i];
    if (acc >= (1ULL << 62)) acc %= F.q();
  }
  return FieldElement(static_cast<std::uint32_t>(acc % F.q()));
}

FieldElement length_sq(const PrimeField& F, const FqVector& v) { return dot(F, v, v); }

FqVector add(const PrimeField& F, const FqVector& v, const FqVector& w) {
  require_same_dim(v, w);
  FqVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = F.add(v.at(i), w.at(i)).value();
  return out;
}

FqVector sub(const PrimeField& F, const FqVector& v, const FqVector& w) {
  require_same_dim(v, w);
  FqVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = F.sub(v.at(i), w.at(i)).value();
  return out;
}

FqVector scale(const PrimeField& F, FieldElement c, const FqVector& v) {
  FqVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = F.mul(c, v.at(i)).value();
  return out;
}

FqVector axpy(const PrimeField& F, const FqVector& v, FieldElement c, const FqVector& w) {
  require_same_dim(v, w);
  FqVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = F.add(v.at(i), F.mul(c, w.at(i))).value();
  }
  return out;
}

// ---------------------------------------------------------------------------

FqMatrix FqMatrix::identity(std::size_t n) {
  FqMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FqMatrix FqMatrix::from_columns(std::span<const FqVector> cols, std::size_t d) {
  FqMatrix m(d, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != d) throw DimensionError("column has wrong dimension");
    for (std::size_t i = 0; i < d; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

FqVector FqMatrix::row(std::size_t i) const {
  return FqVector(std::vector<std::uint32_t>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_));
}

FqMatrix FqMatrix::transposed() const {
  FqMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

FqMatrix multiply(const PrimeField& F, const FqMatrix& A, const FqMatrix& B) {
  if (A.cols() != B.rows()) throw DimensionError("matrix product shape mismatch");
  FqMatrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < B.cols(); ++j) {
      std::uint64_t acc = 0;
      for (std::size_t t = 0; t < A.cols(); ++t) {
        acc = (acc + static_cast<std::uint64_t>(A(i, t)) * B(t, j)) % F.q();
      }
      C(i, j) = static_cast<std::uint32_t>(acc);
    }
  }
  return C;
}

FqVector apply(const PrimeField& F, const FqMatrix& A, const FqVector& v) {
  if (A.cols() != v.size()) throw DimensionError("matrix-vector shape mismatch");
  FqVector out(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t t = 0; t < A.cols(); ++t) {
      acc = (acc + static_cast<std::uint64_t>(A(i, t)) * v[t]) % F.q();
    }
    out[i] = static_cast<std::uint32_t>(acc);
  }
  return out;
}

std::vector<FqVector> row_reduce(const PrimeField& F, std::vector<FqVector> rows) {
  if (rows.empty()) return rows;
  const std::size_t d = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < d && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    rows[r] = scale(F, F.inv(rows[r].at(c)), rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != r && rows[i][c] != 0) rows[i] = axpy(F, rows[i], F.neg(rows[i].at(c)), rows[r]);
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::size_t matrix_rank(const PrimeField& F, FqMatrix A) {
  std::vector<FqVector> rows;
  for (std::size_t i = 0; i < A.rows(); ++i) rows.push_back(A.row(i));
  return row_reduce(F, std::move(rows)).size();
}

FqMatrix inverse(const PrimeField& F, const FqMatrix& A) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw DimensionError("inverse of a non-square matrix");
  std::vector<FqVector> rows;
  for (std::size_t i = 0; i < n; ++i) {
    FqVector r(2 * n);
    for (std::size_t j = 0; j < n; ++j) r[j] = A(i, j);
    r[n + i] = 1;
    rows.push_back(std::move(r));
  }
  rows = row_reduce(F, std::move(rows));
  if (rows.size() < n || pivot_of(rows[n - 1]) != n - 1) throw DomainError("singular matrix");
  FqMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = rows[i][n + j];
  return inv;
}

bool is_orthogonal(const PrimeField& F, const FqMatrix& A) {
  return A.rows() == A.cols() && multiply(F, A.transposed(), A) == FqMatrix::identity(A.rows());
}

std::vector<FqVector> kernel(const PrimeField& F, std::span<const FqVector> rows, std::size_t d) {
  for (const auto& r : rows) {
    if (r.size() != d) throw DimensionError("kernel: row has wrong dimension");
  }
  const auto rref = row_reduce(F, std::vector<FqVector>(rows.begin(), rows.end()));
  std::vector<std::size_t> pivots;
  std::vector<bool> is_pivot(d, false);
  for (const auto& r : rref) {
    pivots.push_back(pivot_of(r));
    is_pivot[pivots.back()] = true;
  }
  std::vector<FqVector> basis;
  for (std::size_t f = 0; f < d; ++f) {
    if (is_pivot[f]) continue;
    FqVector x(d);
    x[f] = 1;
    for (std::size_t i = 0; i < rref.size(); ++i) x[pivots[i]] = F.neg(rref[i].at(f)).value();
    basis.push_back(std::move(x));
  }
  return basis;
}

bool linearly_independent(const PrimeField& F, std::span<const FqVector> vectors) {
  return row_reduce(F, std::vector<FqVector>(vectors.begin(), vectors.end())).size() ==
         vectors.size();
}

std::optional<AffineSubspace> solve_linear(const PrimeField& F, std::span<const FqVector> rows,
                                           std::span<const FieldElement> rhs, std::size_t d) {
  if (rows.size() != rhs.size()) throw DimensionError("solve_linear: rhs length mismatch");
  std::vector<FqVector> aug;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw DimensionError("solve_linear: row has wrong dimension");
    FqVector r(d + 1);
    for (std::size_t j = 0; j < d; ++j) r[j] = rows[i][j];
    r[d] = rhs[i].value();
    aug.push_back(std::move(r));
  }
  aug = row_reduce(F, std::move(aug));
  FqVector offset(d);
  for (const auto& r : aug) {
    const std::size_t p = pivot_of(r);
    if (p == d) return std::nullopt;  // 0 = nonzero
    offset[p] = r[d];
  }
  return AffineSubspace{std::move(offset), kernel(F, rows, d)};
}

// ---------------------------------------------------------------------------

Subspace Subspace::zero(std::size_t d) {
  Subspace s;
  s.d_ = d;
  return s;
}

Subspace Subspace::whole(std::size_t d) {
  Subspace s;
  s.d_ = d;
  for (std::size_t i = 0; i < d; ++i) s.basis_.push_back(unit_vector(d, i));
  return s;
}

Subspace Subspace::span(const PrimeField& F, std::size_t d, std::span<const FqVector> vectors) {
  for (const auto& v : vectors) {
    if (v.size() != d) throw DimensionError("span: vector has wrong dimension");
  }
  Subspace s;
  s.d_ = d;
  s.basis_ = row_reduce(F, std::vector<FqVector>(vectors.begin(), vectors.end()));
  return s;
}

bool Subspace::contains(const PrimeField& F, const FqVector& v) const {
  if (v.size() != d_) throw DimensionError("contains: vector has wrong dimension");
  return reduce_against(F, v, basis_).is_zero();
}

std::vector<FqVector> Subspace::elements(const PrimeField& F) const {
  std::vector<FqVector> out;
  for_each_point(F, AffineSubspace{FqVector(d_), basis_},
                 [&](const FqVector& x) { out.push_back(x); });
  return out;
}

Subspace orthogonal_complement(const PrimeField& F, const Subspace& V) {
  const auto k = kernel(F, V.basis(), V.ambient_dim());
  return Subspace::span(F, V.ambient_dim(), k);
}

Subspace subspace_sum(const PrimeField& F, const Subspace& U, const Subspace& W) {
  if (U.ambient_dim() != W.ambient_dim()) throw DimensionError("sum of subspaces");
  std::vector<FqVector> all = U.basis();
  all.insert(all.end(), W.basis().begin(), W.basis().end());
  return Subspace::span(F, U.ambient_dim(), all);
}

Subspace intersection(const PrimeField& F, const Subspace& U, const Subspace& W) {
  // The dot product is nondegenerate on F_q^d, so (U-perp + W-perp)-perp = U cap W.
  return orthogonal_complement(
      F, subspace_sum(F, orthogonal_complement(F, U), orthogonal_complement(F, W)));
}

Subspace radical(const PrimeField& F, const Subspace& V) {
  return intersection(F, V, orthogonal_complement(F, V));
}

// ---------------------------------------------------------------------------

Simplex Simplex::from_points(const PrimeField& F, std::vector<FqVector> points) {
  if (points.empty()) throw std::invalid_argument("simplex needs at least one point");
  const std::size_t d = points.front().size();
  if (d == 0) throw std::invalid_argument("simplex points must have dimension >= 1");
  for (const auto& p : points) {
    if (p.size() != d) throw DimensionError("simplex points have different dimensions");
    for (std::uint32_t c : p) {
      if (c >= F.q()) throw std::invalid_argument("simplex coordinate not reduced mod q");
    }
  }
  Simplex s;
  s.points_ = std::move(points);
  if (!linearly_independent(F, s.edges(F))) {
    throw std::invalid_argument("simplex edges v_i - v_0 are linearly dependent");
  }
  return s;
}

std::vector<FqVector> Simplex::edges(const PrimeField& F) const {
  std::vector<FqVector> e;
  for (std::size_t i = 1; i < points_.size(); ++i) e.push_back(sub(F, points_[i], points_[0]));
  return e;
}

Simplex Simplex::embedded(std::size_t d) const {
  if (d < ambient_dim()) throw DimensionError("cannot embed into a smaller dimension");
  Simplex s;
  for (const auto& p : points_) {
    auto c = p.coords();
    c.resize(d, 0);
    s.points_.emplace_back(std::move(c));
  }
  return s;
}

Simplex Simplex::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != points_.size()) throw std::invalid_argument("permutation size mismatch");
  Simplex s;
  for (std::size_t i : perm) s.points_.push_back(points_.at(i));
  return s;
}

Simplex Simplex::based_at_origin(const PrimeField& F) const {
  Simplex s;
  s.points_.push_back(FqVector(ambient_dim()));
  for (auto& e : edges(F)) s.points_.push_back(std::move(e));
  return s;
}

Simplex Simplex::standard(std::size_t k, std::size_t d) {
  if (k > d || d == 0) throw DimensionError("standard k-simplex needs 1 <= k <= d");
  Simplex s;
  s.points_.push_back(FqVector(d));
  for (std::size_t i = 0; i < k; ++i) s.points_.push_back(unit_vector(d, i));
  return s;
}

Simplex standard_simplex(std::size_t k, std::size_t d) { return Simplex::standard(k, d); }

GramMatrix GramMatrix::leading(std::size_t j) const {
  FqMatrix m(j, j);
  for (std::size_t a = 0; a < j; ++a)
    for (std::size_t b = 0; b < j; ++b) m(a, b) = m_(a, b);
  return GramMatrix(std::move(m));
}

GramMatrix gram_of(const PrimeField& F, std::span<const FqVector> vectors) {
  const std::size_t k = vectors.size();
  FqMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      m(i, j) = m(j, i) = dot(F, vectors[i], vectors[j]).value();
    }
  }
  return GramMatrix(std::move(m));
}

GramMatrix gram_matrix(const PrimeField& F, const Simplex& s) { return gram_of(F, s.edges(F)); }

std::size_t simplex_rank(const PrimeField& F, const Simplex& s) {
  const auto V = Subspace::span(F, s.ambient_dim(), s.edges(F));
  return s.k() - radical(F, V).dim();
}

std::vector<std::size_t> prefix_ranks(const PrimeField& F, const Simplex& s) {
  const auto e = s.edges(F);
  std::vector<std::size_t> ranks;
  for (std::size_t j = 1; j <= s.k(); ++j) {
    const auto V = Subspace::span(F, s.ambient_dim(), std::span(e).first(j));
    ranks.push_back(j - radical(F, V).dim());
  }
  return ranks;
}

bool same_gram(const PrimeField& F, std::span<const FqVector> a, std::span<const FqVector> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i; j < a.size(); ++j) {
      if (dot(F, a[i], a[j]) != dot(F, b[i], b[j])) return false;
    }
  }
  return true;
}

bool is_isometric_ordered(const PrimeField& F, const Simplex& a, const Simplex& b) {
  if (a.k() != b.k()) throw DimensionError("isometry test needs simplices with equal k");
  return same_gram(F, a.edges(F), b.edges(F));
}

namespace {

void require_small_k(std::size_t k) {
  if (k > kMaxPermutationK) {
    throw std::invalid_argument("ordering search supports k <= 6, got " + std::to_string(k));
  }
}

std::vector<std::size_t> identity_perm(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace

bool is_isometric(const PrimeField& F, const Simplex& a, const Simplex& b) {
  if (a.k() != b.k()) return false;
  require_small_k(a.k());
  const auto target = gram_matrix(F, a);
  auto perm = identity_perm(b.k() + 1);
  do {
    if (gram_matrix(F, b.permuted(perm)) == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::size_t gram_automorphism_count(const PrimeField& F, const Simplex& s) {
  require_small_k(s.k());
  const auto target = gram_matrix(F, s);
  auto perm = identity_perm(s.k() + 1);
  std::size_t count = 0;
  do {
    if (gram_matrix(F, s.permuted(perm)) == target) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

Simplex reorder_for_prefix_ranks(const PrimeField& F, const Simplex& s) {
  require_small_k(s.k());
  const std::size_t r = simplex_rank(F, s);
  auto perm = identity_perm(s.k() + 1);
  do {
    const Simplex candidate = s.permuted(perm);
    const auto ranks = prefix_ranks(F, candidate);
    bool ok = true;
    for (std::size_t j = 1; j <= s.k() && ok; ++j) ok = ranks[j - 1] == std::min(j, r);
    if (ok) return candidate;
  } while (std::next_permutation(perm.begin(), perm.end()));
  throw NoPrefixOrdering("no vertex ordering attains prefix ranks min(j, r)");
}

// ---------------------------------------------------------------------------

namespace {

// Basis of a nondegenerate subspace with Gram matrix diag(1, ..., 1, eps),
// eps in {1, non_residue}. Two nondegenerate spaces of equal dimension and
// discriminant receive the same eps.
std::vector<FqVector> canonical_basis(const PrimeField& F, std::vector<FqVector> W) {
  std::vector<FqVector> out;
  while (W.size() >= 2) {
    const std::size_t n = W.size();
    const std::size_t d = W.front().size();
    std::vector<std::uint32_t> c(n, 0);
    std::optional<FqVector> unit;
    // Any nondegenerate form of rank >= 2 represents every nonzero value,
    // so this scan over coefficient vectors terminates.
    while (!unit) {
      std::size_t i = 0;
      while (i < n && ++c[i] == F.q()) c[i++] = 0;
      if (i == n) throw std::logic_error("canonical_basis: no square-length vector");
      FqVector x(d);
      for (std::size_t t = 0; t < n; ++t) x = axpy(F, x, FieldElement(c[t]), W[t]);
      const FieldElement len = length_sq(F, x);
      if (len.is_zero() || !F.is_square(len)) continue;
      unit = scale(F, F.inv(*F.sqrt(len)), x);
    }
    std::vector<FqVector> projected;
    for (const auto& w : W) projected.push_back(axpy(F, w, F.neg(dot(F, w, *unit)), *unit));
    W = row_reduce(F, std::move(projected));
    out.push_back(std::move(*unit));
  }
  if (W.size() == 1) {
    const FieldElement a = length_sq(F, W[0]);
    if (a.is_zero()) throw std::logic_error("canonical_basis: degenerate subspace");
    const FieldElement target = F.is_square(a) ? F.one() : F.non_residue();
    out.push_back(scale(F, *F.sqrt(F.div(target, a)), W[0]));
  }
  return out;
}

}  // namespace

FqMatrix extend_isometry(const PrimeField& F, std::span<const FqVector> source,
                         std::span<const FqVector> target, std::size_t d) {
  if (source.size() != target.size()) throw IsometryError("tuples have different lengths");
  if (source.size() > d) throw IsometryError("more vectors than the ambient dimension");
  for (const auto& v : source)
    if (v.size() != d) throw DimensionError("source vector has wrong dimension");
  for (const auto& v : target)
    if (v.size() != d) throw DimensionError("target vector has wrong dimension");

  const GramMatrix g = gram_of(F, source);
  if (!(g == gram_of(F, target))) throw IsometryError("tuples are not isometric");
  if (matrix_rank(F, g.matrix()) != source.size()) {
    throw IsometryError("Gram matrix is singular; only full-rank tuples are supported");
  }

  const auto Cs = orthogonal_complement(F, Subspace::span(F, d, source));
  const auto Ct = orthogonal_complement(F, Subspace::span(F, d, target));
  const auto es = canonical_basis(F, Cs.basis());
  const auto et = canonical_basis(F, Ct.basis());
  if (!es.empty() && length_sq(F, es.back()) != length_sq(F, et.back())) {
    throw std::logic_error("extend_isometry: complements have different discriminants");
  }

  std::vector<FqVector> bs(source.begin(), source.end());
  bs.insert(bs.end(), es.begin(), es.end());
  std::vector<FqVector> bt(target.begin(), target.end());
  bt.insert(bt.end(), et.begin(), et.end());
  const FqMatrix U =
      multiply(F, FqMatrix::from_columns(bt, d), inverse(F, FqMatrix::from_columns(bs, d)));
  if (!is_orthogonal(F, U)) throw std::logic_error("extend_isometry: result not orthogonal");
  return U;
}

FqMatrix random_orthogonal(const PrimeField& F, std::size_t d, Rng& rng) {
  FqMatrix U = FqMatrix::identity(d);
  const FieldElement two = F.of(2);
  for (std::size_t step = 0; step < d; ++step) {
    FqVector x(d);
    FieldElement len;
    do {
      for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<std::uint32_t>(uniform_below(rng, F.q()));
      len = length_sq(F, x);
    } while (len.is_zero());
    // v -> v - 2 (v.x / x.x) x
    const FieldElement c = F.div(two, len);
    FqMatrix R = FqMatrix::identity(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const FieldElement xx = F.mul(x.at(i), x.at(j));
        R(i, j) = F.sub(FieldElement(R(i, j)), F.mul(c, xx)).value();
      }
    }
    U = multiply(F, R, U);
  }
  return U;
}

Subspace construct_self_dual_subspace(const PrimeField& F, std::size_t m) {
  if (m == 0) return Subspace::zero(0);
  const auto i = F.sqrt_of_minus_one();
  if (!i) throw DomainError("self-dual subspace construction needs q = 1 (mod 4)");
  std::vector<FqVector> basis;
  for (std::size_t t = 0; t < m; ++t) {
    FqVector w(2 * m);
    w[2 * t] = 1;
    w[2 * t + 1] = i->value();
    basis.push_back(std::move(w));
  }
  return Subspace::span(F, 2 * m, basis);
}

Simplex construct_extremal_simplex(const PrimeField& F, std::size_t k, std::size_t r) {
  if (k == 0) throw std::invalid_argument("extremal simplex needs k >= 1");
  if (r > k) throw std::invalid_argument("extremal simplex needs r <= k");
  const std::size_t d = 2 * k - r;
  const Subspace W = construct_self_dual_subspace(F, k - r);
  std::vector<FqVector> pts{FqVector(d)};
  for (std::size_t i = 0; i < r; ++i) pts.push_back(unit_vector(d, i));
  for (const auto& w : W.basis()) {
    FqVector p(d);
    for (std::size_t t = 0; t < w.size(); ++t) p[r + t] = w[t];
    pts.push_back(std::move(p));
  }
  return Simplex::from_points(F, std::move(pts));
}

}  // namespace fqsimplex
