#include "fqsimplex/counting.hpp"

#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "fqsimplex/measures.hpp"
#include "fqsimplex/parallel.hpp"

namespace fqsimplex {

namespace {

double qpow(std::uint32_t q, double e) { return std::pow(static_cast<double>(q), e); }

std::size_t gram_rank(const PrimeField& F, std::span<const FqVector> vs) {
  if (vs.empty()) return 0;
  return matrix_rank(F, gram_of(F, vs).matrix());
}

std::size_t choose2(std::size_t n) { return n * (n - 1) / 2; }

}  // namespace

PointSet PointSet::full(std::uint32_t q, std::size_t d) {
  PointSet s(q, d);
  s.bits_.assign(s.grid_.size(), true);
  s.count_ = s.grid_.size();
  return s;
}

PointSet PointSet::random_binomial(std::uint32_t q, std::size_t d, double alpha, Rng& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("density must lie in [0, 1]");
  PointSet s(q, d);
  for (std::size_t i = 0; i < s.grid_.size(); ++i) {
    if (uniform_unit(rng) < alpha) s.insert(i);
  }
  return s;
}

PointSet PointSet::random_fixed_size(std::uint32_t q, std::size_t d, std::size_t size, Rng& rng) {
  PointSet s(q, d);
  const std::size_t n = s.grid_.size();
  if (size > n) throw std::invalid_argument("requested more points than the space holds");
  // Selection sampling: each point kept with probability needed/remaining.
  std::size_t needed = size;
  for (std::size_t i = 0; i < n && needed > 0; ++i) {
    if (uniform_below(rng, n - i) < needed) {
      s.insert(i);
      --needed;
    }
  }
  return s;
}

PointSet PointSet::from_points(std::uint32_t q, std::size_t d, std::span<const FqVector> points) {
  PointSet s(q, d);
  for (const auto& p : points) s.insert(p);
  return s;
}

void PointSet::insert(std::size_t index) {
  if (!bits_[index]) {
    bits_[index] = true;
    ++count_;
  }
}

PointSet PointSet::translated(const PrimeField& F, const FqVector& t) const {
  PointSet out(q(), d());
  const std::size_t ti = grid_.encode(t);
  (void)F;
  for (std::size_t i = 0; i < grid_.size(); ++i)
    if (bits_[i]) out.insert(grid_.add(i, ti));
  return out;
}

PointSet PointSet::transformed(const PrimeField& F, const FqMatrix& U) const {
  PointSet out(q(), d());
  for (std::size_t i = 0; i < grid_.size(); ++i)
    if (bits_[i]) out.insert(apply(F, U, grid_.decode(i)));
  return out;
}

DenseFunction PointSet::indicator() const {
  DenseFunction f(q(), d());
  for (std::size_t i = 0; i < grid_.size(); ++i)
    if (bits_[i]) f[i] = 1.0;
  return f;
}

std::uint64_t s_weight(const PrimeField& F, std::span<const FqVector> ys, const Simplex& reference) {
  const auto v = reference.edges(F);
  const std::size_t j = ys.size();
  if (j == 0 || j > v.size()) throw DimensionError("tuple length must be in 1..k");
  for (std::size_t l = 0; l < j; ++l) {
    for (std::size_t i = 0; i <= l; ++i) {
      if (dot(F, ys[i], ys[l]) != dot(F, v[i], v[l])) return 0;
    }
  }
  return checked_pow(F.q(), j * (j + 1) / 2);
}

double starred_average(const PrimeField& F, std::size_t d, std::size_t j,
                       const std::function<double(std::span<const FqVector>)>& fn) {
  if (j > d) {
    std::cerr << "warning: no independent " << j << "-tuples exist in dimension " << d << "\n";
    return 0.0;
  }
  const PointIndexer tuples(F.q(), j * d);
  std::vector<FqVector> ys(j, FqVector(d));
  double sum = 0;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const FqVector flat = tuples.decode(t);
    for (std::size_t i = 0; i < j; ++i)
      for (std::size_t c = 0; c < d; ++c) ys[i][c] = flat[i * d + c];
    if (linearly_independent(F, ys)) sum += fn(ys);
  }
  return sum / static_cast<double>(tuples.size());
}

namespace {

void grow(const PrimeField& F, const PointIndexer& grid, const std::vector<FqVector>& edges,
          std::size_t depth, std::vector<FqVector>& prefix, std::vector<IsometricTuples::Node>& out,
          std::uint64_t& leaves) {
  const std::size_t i = prefix.size();
  std::vector<FieldElement> targets;
  for (std::size_t l = 0; l < i; ++l) targets.push_back(dot(F, edges[l], edges[i]));
  targets.push_back(length_sq(F, edges[i]));
  for (auto& y : conditional_support(F, grid.d(), prefix, targets)) {
    prefix.push_back(y);
    if (linearly_independent(F, prefix)) {
      IsometricTuples::Node node{grid.encode(y), {}};
      if (prefix.size() == depth) {
        ++leaves;
      } else {
        grow(F, grid, edges, depth, prefix, node.children, leaves);
      }
      if (prefix.size() == depth || !node.children.empty()) out.push_back(std::move(node));
    }
    prefix.pop_back();
  }
}

}  // namespace

IsometricTuples::IsometricTuples(const PrimeField& F, const Simplex& reference, std::size_t j,
                                 std::size_t threads)
    : grid_(F.q(), reference.ambient_dim()), j_(j) {
  const auto edges = reference.edges(F);
  if (j == 0 || j > edges.size()) throw std::invalid_argument("tuple length must be in 1..k");
  std::vector<FqVector> none;
  std::vector<Node> level1;
  std::uint64_t ignored = 0;
  grow(F, grid_, edges, 1, none, level1, ignored);
  if (j == 1) {
    roots_ = std::move(level1);
    leaves_ = roots_.size();
    return;
  }
  std::vector<std::uint64_t> counts(level1.size(), 0);
  parallel_for(level1.size(), threads, [&](std::size_t r) {
    std::vector<FqVector> prefix{grid_.decode(level1[r].point)};
    grow(F, grid_, edges, j, prefix, level1[r].children, counts[r]);
  });
  for (std::size_t r = 0; r < level1.size(); ++r) {
    if (!level1[r].children.empty()) roots_.push_back(std::move(level1[r]));
  }
  leaves_ = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<std::vector<std::size_t>> IsometricTuples::flatten() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  std::function<void(const std::vector<Node>&)> walk = [&](const std::vector<Node>& nodes) {
    for (const auto& n : nodes) {
      path.push_back(n.point);
      if (path.size() == j_) {
        out.push_back(path);
      } else {
        walk(n.children);
      }
      path.pop_back();
    }
  };
  walk(roots_);
  return out;
}

CharacterValue script_s(const PrimeField& F, std::span<const DenseFunction> fs,
                        const Simplex& reference, std::size_t threads) {
  if (fs.size() < 2) throw std::invalid_argument("script S needs at least f_0 and f_1");
  for (const auto& f : fs) {
    if (!(f.grid() == fs[0].grid())) throw DimensionError("functions live on different grids");
  }
  if (fs[0].q() != F.q() || fs[0].d() != reference.ambient_dim()) {
    throw DimensionError("functions and simplex disagree on (q, d)");
  }
  const std::size_t j = fs.size() - 1;
  const IsometricTuples tuples(F, reference, j, threads);
  const auto flat = tuples.flatten();
  const auto& grid = tuples.grid();
  std::vector<CharacterValue> partial(flat.size());
  parallel_for(flat.size(), threads, [&](std::size_t t) {
    CharacterValue acc = 0;
    for (std::size_t x = 0; x < grid.size(); ++x) {
      CharacterValue term = fs[0][x];
      for (std::size_t i = 0; i < j && term != CharacterValue(0); ++i) term *= fs[i + 1][grid.add(x, flat[t][i])];
      acc += term;
    }
    partial[t] = acc;
  });
  CharacterValue sum = 0;
  for (const auto& p : partial) sum += p;
  const double scale = qpow(F.q(), static_cast<double>(j * (j + 1) / 2) -
                                       static_cast<double>((j + 1) * grid.d()));
  return sum * scale;
}

double ExactScriptS::value() const {
  return static_cast<double>(hits) *
         qpow(q, static_cast<double>(weight_exp) - static_cast<double>(scale_exp));
}

ExactScriptS script_s_indicator(const PointSet& A, const IsometricTuples& tuples) {
  if (!(A.grid() == tuples.grid())) throw DimensionError("set and tuples live on different grids");
  const auto& grid = tuples.grid();
  ExactScriptS s;
  s.q = grid.q();
  s.weight_exp = tuples.j() * (tuples.j() + 1) / 2;
  s.scale_exp = (tuples.j() + 1) * grid.d();
  for (const auto& t : tuples.flatten()) {
    for (std::size_t x = 0; x < grid.size(); ++x) {
      if (!A.contains(x)) continue;
      bool all = true;
      for (std::size_t y : t) {
        if (!A.contains(grid.add(x, y))) {
          all = false;
          break;
        }
      }
      if (all) ++s.hits;
    }
  }
  return s;
}

namespace {

std::uint64_t walk_from(const PointSet& A, const PointIndexer& grid, std::size_t x,
                        const std::vector<IsometricTuples::Node>& nodes, std::size_t depth,
                        std::size_t j) {
  std::uint64_t n = 0;
  for (const auto& node : nodes) {
    if (!A.contains(grid.add(x, node.point))) continue;
    n += depth + 1 == j ? 1 : walk_from(A, grid, x, node.children, depth + 1, j);
  }
  return n;
}

// exact_count * q^{(k+1)d} == q^{(k+1)d - C} * q^C * hits, in 128 bits.
bool integer_identity(std::uint64_t exact_count, const ExactScriptS& s) {
  using u128 = unsigned __int128;
  u128 scale = 1;
  for (std::size_t i = 0; i < s.scale_exp; ++i) scale *= s.q;
  u128 front = 1;
  for (std::size_t i = 0; i < s.scale_exp - s.weight_exp; ++i) front *= s.q;
  u128 weight = 1;
  for (std::size_t i = 0; i < s.weight_exp; ++i) weight *= s.q;
  const u128 rhs_num = front * weight * s.hits;
  return rhs_num % scale == 0 && rhs_num / scale == exact_count;
}

}  // namespace

CountReport count_isometric_copies(const PrimeField& F, const PointSet& A,
                                   const Simplex& reference, std::size_t threads) {
  const IsometricTuples tuples(F, reference, reference.k(), threads);
  return count_isometric_copies(F, A, reference, tuples);
}

CountReport count_isometric_copies(const PrimeField& F, const PointSet& A,
                                   const Simplex& reference, const IsometricTuples& tuples) {
  const std::size_t k = reference.k();
  const std::size_t d = reference.ambient_dim();
  if (tuples.j() != k || !(tuples.grid() == A.grid())) {
    throw DimensionError("tuple enumeration does not match the simplex and set");
  }
  CountReport r;
  r.q = F.q();
  r.d = d;
  r.k = k;
  r.r = simplex_rank(F, reference);
  r.set_size = A.count();
  r.alpha = A.density();
  r.dimension_ok = d > 2 * k - r.r;
  r.alpha_threshold = qpow(F.q(), (2.0 * k - static_cast<double>(d + r.r)) / (k + 1.0));

  const auto& grid = tuples.grid();
  for (std::size_t x = 0; x < grid.size(); ++x) {
    if (A.contains(x)) r.exact_count += walk_from(A, grid, x, tuples.roots(), 0, k);
  }
  r.identity_holds = integer_identity(r.exact_count, script_s_indicator(A, tuples));
  r.automorphisms = gram_automorphism_count(F, reference);
  r.unordered_count = r.exact_count / r.automorphisms;

  const double scale = qpow(F.q(), static_cast<double>((k + 1) * d) - static_cast<double>(choose2(k + 1)));
  const double ak = std::pow(r.alpha, static_cast<double>(k + 1));
  const double err_unit = std::pow(r.alpha, (k + 1.0) / 2) *
                          qpow(F.q(), static_cast<double>(k) - static_cast<double>(d + r.r) / 2);
  r.main_term = ak * scale;
  r.error_bound = err_unit * scale;
  const double observed = static_cast<double>(r.exact_count) / scale;
  r.normalized_error = err_unit > 0 ? std::abs(observed - ak) / err_unit : 0.0;
  return r;
}

DependentBoundReport verify_dependent_bound(const PrimeField& F, const Simplex& reference,
                                            std::size_t j, std::span<const FqVector> anchors) {
  const auto v = reference.edges(F);
  if (j < 2 || j > v.size()) throw std::invalid_argument("dependent bound needs 2 <= j <= k");
  if (anchors.size() != j - 1 || !linearly_independent(F, anchors) ||
      !same_gram(F, anchors, std::span(v).first(j - 1))) {
    throw IsometryError("anchors are not isometric to the reference prefix");
  }
  const std::size_t d = reference.ambient_dim();
  const auto targets = conditional_targets(F, reference, j);
  std::uint64_t hits = 0;
  for (const auto& z : Subspace::span(F, d, anchors).elements(F)) {
    bool ok = length_sq(F, z) == targets.back();
    for (std::size_t i = 0; ok && i + 1 < j; ++i) ok = dot(F, anchors[i], z) == targets[i];
    if (ok) ++hits;
  }
  DependentBoundReport r;
  r.q = F.q();
  r.d = d;
  r.j = j;
  r.prev_rank = gram_rank(F, std::span(v).first(j - 1));
  r.span_sum = hits * checked_pow(F.q(), j);
  r.bound = checked_pow(F.q(), 2 * j - 1 - r.prev_rank);
  r.pass = r.span_sum <= r.bound;
  return r;
}

CountAsymptoticReport verify_count_asymptotic(const PrimeField& F, const Simplex& reference,
                                              std::size_t j, std::size_t threads) {
  const auto v = reference.edges(F);
  if (j == 0 || j > v.size()) throw std::invalid_argument("count asymptotic needs 1 <= j <= k");
  const std::size_t d = reference.ambient_dim();
  CountAsymptoticReport r;
  r.q = F.q();
  r.d = d;
  r.j = j;
  r.rank = gram_rank(F, std::span(v).first(j));
  r.dimension_ok = d > 2 * j - r.rank;
  const IsometricTuples tuples(F, reference, j, threads);
  r.tuple_count = tuples.leaf_count();
  r.value = static_cast<double>(r.tuple_count) *
            qpow(F.q(), static_cast<double>(j * (j + 1) / 2) - static_cast<double>(j * d));
  r.error = std::abs(r.value - 1.0);
  r.bound = qpow(F.q(), static_cast<double>(j) - static_cast<double>(d + r.rank) / 2);
  r.implied_constant = r.error / r.bound;
  return r;
}

ErrorLemmaReport verify_error_lemma(const PrimeField& F, const Simplex& reference, std::size_t j,
                                    std::span<const FqVector> xis, std::size_t threads) {
  const auto v = reference.edges(F);
  if (j < 2 || j > v.size()) throw std::invalid_argument("error lemma needs 2 <= j <= k");
  const std::size_t d = reference.ambient_dim();
  for (const auto& xi : xis) {
    if (xi.size() != d) throw DimensionError("frequency has wrong dimension");
    if (xi.is_zero()) throw std::invalid_argument("error lemma is stated for xi != 0");
  }
  const IsometricTuples anchors(F, reference, j - 1, threads);
  const auto targets = conditional_targets(F, reference, j);
  const auto& grid = anchors.grid();
  std::vector<std::vector<FqVector>> supports;
  for (const auto& t : anchors.flatten()) {
    std::vector<FqVector> ys;
    for (std::size_t idx : t) ys.push_back(grid.decode(idx));
    supports.push_back(conditional_support(F, d, ys, targets));
  }
  const double hat_scale = qpow(F.q(), static_cast<double>(j) - static_cast<double>(d));
  const double avg_scale =
      qpow(F.q(), static_cast<double>(choose2(j)) - static_cast<double>((j - 1) * d));
  std::vector<double> values(xis.size());
  parallel_for(xis.size(), threads, [&](std::size_t n) {
    double acc = 0;
    for (const auto& supp : supports) {
      CharacterValue hat = 0;
      for (const auto& z : supp) hat += F.chi(F.neg(dot(F, xis[n], z)));
      acc += std::norm(hat * hat_scale);
    }
    values[n] = acc * avg_scale;
  });
  ErrorLemmaReport r;
  r.q = F.q();
  r.d = d;
  r.j = j;
  r.rank = gram_rank(F, std::span(v).first(j));
  r.xis_checked = xis.size();
  r.bound = qpow(F.q(), 2.0 * j - static_cast<double>(d + r.rank));
  for (std::size_t n = 0; n < xis.size(); ++n) {
    if (n == 0 || values[n] > r.max_value) {
      r.max_value = values[n];
      r.worst_xi = xis[n];
    }
  }
  r.implied_constant = r.max_value / r.bound;
  return r;
}

ExperimentResult random_set_experiment(const PrimeField& F, const Simplex& reference, double alpha,
                                       std::size_t trials, std::uint64_t seed,
                                       std::size_t threads, bool fixed_size) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("density must lie in (0, 1]");
  const std::size_t d = reference.ambient_dim();
  const IsometricTuples tuples(F, reference, reference.k(), threads);
  ExperimentResult out;
  out.reports.resize(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(split_seed(seed, t));
    const PointSet A =
        fixed_size ? PointSet::random_fixed_size(
                         F.q(), d, static_cast<std::size_t>(std::llround(alpha * tuples.grid().size())), rng)
                   : PointSet::random_binomial(F.q(), d, alpha, rng);
    out.reports[t] = count_isometric_copies(F, A, reference, tuples);
  });
  double sum = 0;
  for (const auto& r : out.reports) {
    out.max_normalized_error = std::max(out.max_normalized_error, r.normalized_error);
    sum += r.normalized_error;
  }
  out.mean_normalized_error = trials > 0 ? sum / static_cast<double>(trials) : 0.0;
  return out;
}

}  // namespace fqsimplex
