#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fqsimplex/field.hpp"
#include "fqsimplex/fourier.hpp"
#include "fqsimplex/linalg.hpp"
#include "fqsimplex/random.hpp"

namespace fqsimplex {

/// Subset of F_q^d as a membership bitset in PointIndexer order.
class PointSet {
 public:
  PointSet(std::uint32_t q, std::size_t d) : grid_(q, d), bits_(grid_.size(), false) {}

  static PointSet empty(std::uint32_t q, std::size_t d) { return PointSet(q, d); }
  static PointSet full(std::uint32_t q, std::size_t d);
  /// Each point independently with probability alpha.
  static PointSet random_binomial(std::uint32_t q, std::size_t d, double alpha, Rng& rng);
  /// Exactly `size` points, uniformly among subsets of that size.
  static PointSet random_fixed_size(std::uint32_t q, std::size_t d, std::size_t size, Rng& rng);
  static PointSet from_points(std::uint32_t q, std::size_t d, std::span<const FqVector> points);

  const PointIndexer& grid() const { return grid_; }
  std::uint32_t q() const { return grid_.q(); }
  std::size_t d() const { return grid_.d(); }
  std::size_t count() const { return count_; }
  double density() const { return static_cast<double>(count_) / static_cast<double>(grid_.size()); }

  bool contains(std::size_t index) const { return bits_[index]; }
  bool contains(const FqVector& x) const { return bits_[grid_.encode(x)]; }
  void insert(std::size_t index);
  void insert(const FqVector& x) { insert(grid_.encode(x)); }

  /// A + t.
  PointSet translated(const PrimeField& F, const FqVector& t) const;
  /// U(A) for an invertible U.
  PointSet transformed(const PrimeField& F, const FqMatrix& U) const;
  /// 1_A as a function.
  DenseFunction indicator() const;

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.grid_ == b.grid_ && a.bits_ == b.bits_;
  }

 private:
  PointIndexer grid_;
  std::vector<bool> bits_;
  std::size_t count_ = 0;
};

/// S_j(y_1..y_j) for j = ys.size(): q^{j(j+1)/2} if y_i.y_l = v_i.v_l for all
/// i <= l <= j, else 0. Independence is not checked.
std::uint64_t s_weight(const PrimeField& F, std::span<const FqVector> ys, const Simplex& reference);

/// q^{-jd} times the sum of fn over linearly independent (y_1..y_j), by brute
/// force. Returns 0 (and warns on stderr) when j > d.
double starred_average(const PrimeField& F, std::size_t d, std::size_t j,
                       const std::function<double(std::span<const FqVector>)>& fn);

/// Independent ordered tuples (y_1..y_j) with the Gram matrix of the first j
/// reference edges, stored as a prefix tree of grid indices.
class IsometricTuples {
 public:
  struct Node {
    std::size_t point;
    std::vector<Node> children;
  };

  IsometricTuples(const PrimeField& F, const Simplex& reference, std::size_t j,
                  std::size_t threads = 1);

  std::size_t j() const { return j_; }
  const PointIndexer& grid() const { return grid_; }
  const std::vector<Node>& roots() const { return roots_; }
  std::uint64_t leaf_count() const { return leaves_; }
  /// Tuples in depth-first order, each as j grid indices.
  std::vector<std::vector<std::size_t>> flatten() const;

 private:
  PointIndexer grid_;
  std::size_t j_;
  std::vector<Node> roots_;
  std::uint64_t leaves_ = 0;
};

/// script S_j(f_0..f_j) with j = fs.size() - 1, over the reference prefix.
CharacterValue script_s(const PrimeField& F, std::span<const DenseFunction> fs,
                        const Simplex& reference, std::size_t threads = 1);

/// script S_j(1_A, ..., 1_A) = q^{weight_exp} * hits / q^{scale_exp} with
/// hits = #{(x, tuple) : x and every x + y_i in A}.
struct ExactScriptS {
  std::uint64_t hits = 0;
  std::uint32_t q = 0;
  std::size_t weight_exp = 0;  // j(j+1)/2
  std::size_t scale_exp = 0;   // (j+1)d
  double value() const;
};

ExactScriptS script_s_indicator(const PointSet& A, const IsometricTuples& tuples);

struct CountReport {
  std::uint32_t q = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t r = 0;
  std::uint64_t exact_count = 0;      // ordered embeddings with v_0 at x
  std::uint64_t unordered_count = 0;  // exact_count / automorphisms
  std::size_t automorphisms = 0;
  std::size_t set_size = 0;
  double alpha = 0;
  double main_term = 0;
  double error_bound = 0;
  double normalized_error = 0;
  bool identity_holds = false;  // exact_count == q^{(k+1)d - C(k+1,2)} script S_k
  bool dimension_ok = false;    // d > 2k - r; counts may vanish otherwise
  double alpha_threshold = 0;   // q^{(2k-d-r)/(k+1)}
};

CountReport count_isometric_copies(const PrimeField& F, const PointSet& A,
                                   const Simplex& reference, std::size_t threads = 1);
/// Same, reusing an enumeration of the full-k tuples.
CountReport count_isometric_copies(const PrimeField& F, const PointSet& A,
                                   const Simplex& reference, const IsometricTuples& tuples);

struct DependentBoundReport {
  std::uint32_t q = 0;
  std::size_t d = 0;
  std::size_t j = 0;
  std::size_t prev_rank = 0;  // r_{j-1}
  std::uint64_t span_sum = 0;
  std::uint64_t bound = 0;
  bool pass = false;
};

/// Sum over y_j in Span(anchors) of sigma_{anchors}(y_j), against
/// q^{2j-1-r_{j-1}}. Anchors must be isometric to the first j-1 edges.
DependentBoundReport verify_dependent_bound(const PrimeField& F, const Simplex& reference,
                                            std::size_t j, std::span<const FqVector> anchors);

struct CountAsymptoticReport {
  std::uint32_t q = 0;
  std::size_t d = 0;
  std::size_t j = 0;
  std::size_t rank = 0;           // r_j
  std::uint64_t tuple_count = 0;  // independent isometric j-tuples
  double value = 0;               // script S_j(1, ..., 1)
  double error = 0;
  double bound = 0;
  double implied_constant = 0;
  bool dimension_ok = false;  // d > 2j - r_j
};

CountAsymptoticReport verify_count_asymptotic(const PrimeField& F, const Simplex& reference,
                                              std::size_t j, std::size_t threads = 1);

struct ErrorLemmaReport {
  std::uint32_t q = 0;
  std::size_t d = 0;
  std::size_t j = 0;
  std::size_t rank = 0;  // r_j
  std::size_t xis_checked = 0;
  FqVector worst_xi;
  double max_value = 0;
  double bound = 0;
  double implied_constant = 0;
};

/// Starred average of S_{j-1} |sigma^_{y_1..y_{j-1}}(xi)|^2 against
/// q^{2j-d-r_j}, maximized over the given xi. Zero xi is rejected.
ErrorLemmaReport verify_error_lemma(const PrimeField& F, const Simplex& reference, std::size_t j,
                                    std::span<const FqVector> xis, std::size_t threads = 1);

struct ExperimentResult {
  std::vector<CountReport> reports;
  double max_normalized_error = 0;
  double mean_normalized_error = 0;
};

/// Trial t samples A from split_seed(seed, t); results do not depend on threads.
ExperimentResult random_set_experiment(const PrimeField& F, const Simplex& reference, double alpha,
                                       std::size_t trials, std::uint64_t seed,
                                       std::size_t threads = 1, bool fixed_size = false);

}  // namespace fqsimplex
