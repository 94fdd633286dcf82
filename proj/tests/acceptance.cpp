// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fqsimplex/charsums.hpp"
#include "fqsimplex/cli.hpp"
#include "fqsimplex/counting.hpp"
#include "fqsimplex/fourier.hpp"
#include "fqsimplex/linalg.hpp"
#include "fqsimplex/measures.hpp"
#include "oracles.hpp"

using namespace fqsimplex;

namespace {

constexpr double kAccept = 3.0;
constexpr double kGrowth = 1.25;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// ---- 1: exact identities -----------------------------------------------------

void detection_equivalence(std::uint32_t q, std::size_t d, Outcome& o, std::uint64_t& checked) {
  const PrimeField F(q);
  const auto pts = oracle::all_points(q, d);
  const std::uint64_t weight = static_cast<std::uint64_t>(q) * q * q;
  for (const auto& v1 : pts) {
    for (const auto& v2 : pts) {
      if (!linearly_independent(F, std::vector<FqVector>{v1, v2})) continue;
      const auto delta = Simplex::from_points(F, {FqVector(d), v1, v2});
      const std::uint32_t g11 = oracle::dot_mod(v1, v1, q), g12 = oracle::dot_mod(v1, v2, q),
                          g22 = oracle::dot_mod(v2, v2, q);
      for (const auto& y1 : pts) {
        for (const auto& y2 : pts) {
          const std::vector<FqVector> ys{y1, y2};
          bool expected;
          if (linearly_independent(F, ys)) {
            expected = is_isometric_ordered(F, Simplex::from_points(F, {FqVector(d), y1, y2}), delta);
          } else {
            expected = oracle::dot_mod(y1, y1, q) == g11 && oracle::dot_mod(y1, y2, q) == g12 &&
                       oracle::dot_mod(y2, y2, q) == g22;
          }
          ++checked;
          if (detection_product(F, ys, delta) != (expected ? weight : 0)) {
            o.fail("detection mismatch at q=" + std::to_string(q) + " d=" + std::to_string(d));
            return;
          }
        }
      }
    }
  }
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t checked = 0;
  detection_equivalence(3, 2, o, checked);
  detection_equivalence(5, 2, o, checked);
  detection_equivalence(3, 3, o, checked);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 10.0) o.fail("detection sweep took " + fmt(secs) + " s");

  // 50 random (A, reference) at (5, 3, 2).
  const PrimeField F5(5);
  Rng rng(split_seed(42, 1));
  int identities = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<FqVector> pts{FqVector(3)};
    do {
      pts.resize(1);
      for (int i = 0; i < 2; ++i) {
        FqVector v(3);
        for (auto c = 0; c < 3; ++c) v[c] = static_cast<std::uint32_t>(uniform_below(rng, 5));
        pts.push_back(v);
      }
    } while (!linearly_independent(F5, std::vector<FqVector>{pts[1], pts[2]}));
    const auto delta = Simplex::from_points(F5, pts);
    const double alpha = 0.2 + 0.7 * uniform_unit(rng);
    const auto A = PointSet::random_binomial(5, 3, alpha, rng);
    const auto r = count_isometric_copies(F5, A, delta);
    const auto ind = A.indicator();
    const std::vector<DenseFunction> fs{ind, ind, ind};
    const double via_functions = script_s(F5, fs, delta).real() * std::pow(5.0, 9 - 3);
    if (r.identity_holds && std::abs(via_functions - static_cast<double>(r.exact_count)) < 1e-6) {
      ++identities;
    } else {
      o.fail("count identity failed on instance " + std::to_string(t));
    }
  }

  // 100 random full-rank isometry extensions.
  int extensions = 0;
  for (int t = 0; t < 100; ++t) {
    const std::uint32_t q = std::vector<std::uint32_t>{5, 7, 13}[t % 3];
    const PrimeField F(q);
    const std::size_t d = 2 + uniform_below(rng, 3);
    const std::size_t m = 1 + uniform_below(rng, d);
    std::vector<FqVector> src;
    do {
      src.clear();
      for (std::size_t i = 0; i < m; ++i) {
        FqVector v(d);
        for (std::size_t c = 0; c < d; ++c) v[c] = static_cast<std::uint32_t>(uniform_below(rng, q));
        src.push_back(v);
      }
    } while (!linearly_independent(F, src) || matrix_rank(F, gram_of(F, src).matrix()) != m);
    const auto O = random_orthogonal(F, d, rng);
    std::vector<FqVector> dst;
    for (const auto& v : src) dst.push_back(apply(F, O, v));
    const auto U = extend_isometry(F, src, dst, d);
    bool ok = true;
    for (std::size_t a = 0; a < d && ok; ++a) {
      for (std::size_t b = 0; b < d && ok; ++b) {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < d; ++i) s += static_cast<std::uint64_t>(U(i, a)) * U(i, b);
        ok = s % q == (a == b ? 1u : 0u);
      }
    }
    for (std::size_t i = 0; i < m && ok; ++i) {
      for (std::size_t r = 0; r < d && ok; ++r) {
        std::uint64_t s = 0;
        for (std::size_t c = 0; c < d; ++c) s += static_cast<std::uint64_t>(U(r, c)) * src[i][c];
        ok = s % q == dst[i][r];
      }
    }
    if (ok) {
      ++extensions;
    } else {
      o.fail("extend_isometry instance " + std::to_string(t) + " is not an exact isometry");
    }
  }
  o.detail = o.pass ? std::to_string(checked) + " tuples in " + fmt(secs) + " s, " +
                          std::to_string(identities) + "/50 count identities, " +
                          std::to_string(extensions) + "/100 extensions"
                    : o.detail;
  return o;
}

// ---- 2: character sums ---------------------------------------------------------

Outcome criterion2() {
  Outcome o;
  double worst = 0;
  std::size_t pairs = 0;
  for (std::uint32_t q : {3u, 5u, 7u, 11u, 13u}) {
    const PrimeField F(q);
    for (std::size_t d = 1; d <= 3; ++d) {
      const auto pts = oracle::all_points(q, d);
      for (std::uint32_t a = 1; a < q; ++a) {
        for (const auto& b : pts) {
          CharacterValue brute = 0;
          for (const auto& x : pts) {
            brute += oracle::chi(q, static_cast<std::int64_t>(a) * oracle::dot_mod(x, x, q) +
                                        oracle::dot_mod(b, x, q));
          }
          const auto closed = quadratic_sum_closed_form(F, FieldElement(a), b);
          worst = std::max(worst, std::abs(brute - closed) / std::max(1.0, std::abs(closed)));
          ++pairs;
        }
      }
    }
  }
  if (worst > 1e-6) o.fail("closed form off by " + fmt(worst) + " relative");
  const auto audit = weil_bound_audit(101, 0);
  if (audit.max_ratio > 2.0) o.fail("Weil ratio " + fmt(audit.max_ratio));
  if (audit.even_row_deviation > 1e-9) o.fail("even b=0 rows deviate from -1 by " + fmt(audit.even_row_deviation));
  if (audit.gauss_row_deviation > 1e-9) o.fail("Gauss rows deviate by " + fmt(audit.gauss_row_deviation));
  if (o.pass) {
    o.detail = std::to_string(pairs) + " (a,b) pairs, worst rel " + fmt(worst) + "; Weil max ratio " +
               fmt(audit.max_ratio) + " over q<=101; even b=0 dev " + fmt(audit.even_row_deviation);
  }
  return o;
}

// ---- 3: Fourier ------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  double rt = 0, pl = 0, fast = 0;
  Rng rng(split_seed(42, 3));
  for (std::uint32_t q : {3u, 5u, 7u}) {
    const PrimeField F(q);
    for (std::size_t d = 1; d <= 3; ++d) {
      const auto f = oracle::random_function(q, d, rng);
      const auto g = oracle::random_function(q, d, rng);
      const auto h = fourier_transform(F, f);
      rt = std::max(rt, oracle::max_diff(inverse_transform(F, h).values(), f.values()));
      pl = std::max(pl, plancherel_check(F, f, g));
      fast = std::max(fast, oracle::max_diff(h.values(), oracle::naive_transform(f).values()));
    }
  }
  if (rt > 1e-9) o.fail("round trip residual " + fmt(rt));
  if (pl > 1e-9) o.fail("Plancherel residual " + fmt(pl));
  if (fast > 1e-9) o.fail("fast vs naive " + fmt(fast));
  if (o.pass) o.detail = "round trip " + fmt(rt) + ", Plancherel " + fmt(pl) + ", fast vs naive " + fmt(fast);
  return o;
}

// ---- 4: sphere transforms --------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::map<std::pair<std::size_t, std::uint32_t>, double> nonzero, zero;
  double worst = 0;
  for (std::size_t d : {2u, 3u, 4u}) {
    for (std::uint32_t q : {3u, 5u, 7u, 11u, 13u}) {
      const PrimeField F(q);
      for (std::uint32_t c = 0; c < q; ++c) {
        const auto r = verify_sphere_asymptotic(F, FieldElement(c), d, 0);
        auto& slot = c == 0 ? zero[{d, q}] : nonzero[{d, q}];
        slot = std::max(slot, r.implied_constant);
        worst = std::max(worst, r.implied_constant);
      }
    }
  }
  if (worst > kAccept) o.fail("implied constant " + fmt(worst));
  double growth = 0;
  for (std::size_t d : {2u, 3u, 4u}) {
    for (auto* table : {&nonzero, &zero}) {
      const double g = (*table)[{d, 13}] / (*table)[{d, 5}];
      growth = std::max(growth, g);
      if (g > kGrowth) o.fail("constant grows by " + fmt(g) + " from q=5 to q=13 at d=" + std::to_string(d));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 120) o.fail("took " + fmt(secs) + " s");
  if (o.pass) o.detail = "max constant " + fmt(worst) + ", max growth 5->13 " + fmt(growth) + ", " + fmt(secs) + " s";
  return o;
}

// ---- 5: conditional transforms ---------------------------------------------------

Outcome criterion5() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  struct Family {
    std::string name;
    std::size_t d;
    std::vector<std::size_t> ranks;  // empty: standard simplex
  };
  const std::vector<Family> families{{"full d=3", 3, {}},
                                     {"full d=4", 4, {}},
                                     {"r2=1 d=3", 3, {1, 1}},
                                     {"r2=1 d=4", 4, {1, 1}},
                                     {"r2=0 d=4", 4, {0, 0}}};
  constexpr int kSamples = 10;
  double worst = 0, growth = 0;
  std::string notes;
  for (const auto& fam : families) {
    std::map<std::uint32_t, double> constant;
    for (std::uint32_t q : {5u, 7u, 11u}) {
      const PrimeField F(q);
      std::optional<Simplex> delta =
          fam.ranks.empty() ? std::optional<Simplex>(standard_simplex(2, fam.d))
                            : find_simplex_with_prefix_ranks(F, fam.d, fam.ranks);
      if (!delta) {
        o.fail("no reference simplex for " + fam.name);
        continue;
      }
      for (int s = 0; s < kSamples; ++s) {
        Rng rng(split_seed(split_seed(42, q), s));
        const auto anchors = sample_anchors(F, *delta, 1, rng);
        const auto r = verify_conditional_asymptotic(F, *delta, 2, anchors, 0);
        constant[q] = std::max(constant[q], r.implied_constant);
      }
      worst = std::max(worst, constant[q]);
    }
    const double g = constant[11] / constant[5];
    growth = std::max(growth, g);
    notes += " " + fam.name + ":" + fmt(constant[5]) + "/" + fmt(constant[7]) + "/" + fmt(constant[11]);
    if (g > kGrowth) o.fail(fam.name + " constant grows by " + fmt(g) + " from q=5 to q=11;" + notes);
  }
  if (worst > kAccept) o.fail("implied constant " + fmt(worst));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 300) o.fail("took " + fmt(secs) + " s");
  if (o.pass) o.detail = "max constant " + fmt(worst) + ", max growth " + fmt(growth) + ";" + notes;
  return o;
}

// ---- 6: counting lemmas ----------------------------------------------------------

Outcome criterion6() {
  Outcome o;
  // dependent span sums across prefix ranks
  const std::vector<std::vector<std::size_t>> rank_seqs{{1, 2, 3}, {0, 1, 2}, {1, 1, 2}, {1, 2, 2}, {0, 0, 2}};
  int samples = 0, held = 0;
  std::uint64_t tightest_num = 0, tightest_den = 1;
  for (std::uint32_t q : {5u, 7u}) {
    const PrimeField F(q);
    for (const auto& ranks : rank_seqs) {
      const auto delta = find_simplex_with_prefix_ranks(F, 4, ranks);
      if (!delta) {
        o.fail("no reference simplex with the requested prefix ranks");
        continue;
      }
      for (int s = 0; s < 10; ++s) {
        for (std::size_t j = 2; j <= 3; ++j) {
          Rng rng(split_seed(split_seed(42, q * 100 + j), static_cast<std::uint64_t>(samples)));
          const auto anchors = sample_anchors(F, *delta, j - 1, rng);
          const auto r = verify_dependent_bound(F, *delta, j, anchors);
          ++samples;
          if (r.pass) {
            ++held;
            if (r.span_sum * tightest_den > tightest_num * r.bound) {
              tightest_num = r.span_sum;
              tightest_den = r.bound;
            }
          } else {
            o.fail("dependent bound violated: " + std::to_string(r.span_sum) + " > " + std::to_string(r.bound));
          }
        }
      }
    }
  }
  // count asymptotic
  double c42 = 0;
  for (std::uint32_t q : {5u, 7u, 11u}) {
    const PrimeField F(q);
    for (std::size_t d : {3u, 4u}) {
      std::vector<Simplex> refs{standard_simplex(2, d)};
      if (d == 4) refs.push_back(*find_simplex_with_prefix_ranks(F, 4, std::vector<std::size_t>{1, 1}));
      for (const auto& delta : refs)
        for (std::size_t j = 1; j <= 2; ++j) c42 = std::max(c42, verify_count_asymptotic(F, delta, j, 0).implied_constant);
    }
  }
  {
    const PrimeField F(3);
    c42 = std::max(c42, verify_count_asymptotic(F, standard_simplex(3, 4), 3, 0).implied_constant);
  }
  if (c42 > kAccept) o.fail("count asymptotic constant " + fmt(c42));
  // error term
  double c43 = 0;
  {
    const PrimeField F(3);
    std::vector<FqVector> xis;
    for (const auto& x : oracle::all_points(3, 3))
      if (!x.is_zero()) xis.push_back(x);
    c43 = std::max(c43, verify_error_lemma(F, standard_simplex(2, 3), 2, xis, 0).implied_constant);
  }
  {
    const PrimeField F(5);
    Rng rng(split_seed(42, 43));
    std::vector<FqVector> xis;
    while (xis.size() < 40) {
      FqVector x(3);
      for (int c = 0; c < 3; ++c) x[c] = static_cast<std::uint32_t>(uniform_below(rng, 5));
      if (!x.is_zero()) xis.push_back(x);
    }
    c43 = std::max(c43, verify_error_lemma(F, standard_simplex(2, 3), 2, xis, 0).implied_constant);
  }
  if (c43 > kAccept) o.fail("error term constant " + fmt(c43));
  if (samples < 200) o.fail("only " + std::to_string(samples) + " anchor samples");
  if (o.pass) {
    o.detail = "dependent bound held on " + std::to_string(held) + "/" + std::to_string(samples) + " (tightest " +
               fmt(static_cast<double>(tightest_num) / tightest_den) + " of bound); count asymptotic max " + fmt(c42) +
               "; error term max " + fmt(c43);
  }
  return o;
}

// ---- 7: theorem ------------------------------------------------------------------

Outcome criterion7() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::string notes;
  struct Case {
    std::uint32_t q;
    std::size_t d, k;
  };
  for (const Case c : {Case{11, 3, 1}, Case{7, 3, 2}}) {
    const PrimeField F(c.q);
    const auto delta = standard_simplex(c.k, c.d);
    const auto res = random_set_experiment(F, delta, 0.3, 20, 42, 0);
    if (res.max_normalized_error > kAccept) o.fail("normalized error " + fmt(res.max_normalized_error));
    for (const auto& r : res.reports)
      if (!r.identity_holds) o.fail("count identity failed in a trial");
    const auto full = count_isometric_copies(F, PointSet::full(c.q, c.d), delta, 0);
    const auto lemma = verify_count_asymptotic(F, delta, c.k, 0);
    // count(F_q^d) / q^{(k+1)d - C(k+1,2)} = script S_k(1..1) means count = q^d * #tuples.
    if (full.exact_count != checked_pow(c.q, c.d) * lemma.tuple_count || !full.identity_holds) {
      o.fail("full-space count differs from the count asymptotic value");
    }
    notes += " (" + std::to_string(c.q) + "," + std::to_string(c.d) + "," + std::to_string(c.k) +
             "): max " + fmt(res.max_normalized_error) + ";";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 600) o.fail("took " + fmt(secs) + " s");
  if (o.pass) o.detail = "normalized error" + notes + " " + fmt(secs) + " s";
  return o;
}

// ---- 8: sharpness construction ---------------------------------------------------

Outcome criterion8() {
  Outcome o;
  int built = 0;
  for (std::uint32_t q : {5u, 13u}) {
    const PrimeField F(q);
    for (std::size_t k = 1; k <= 3; ++k) {
      for (std::size_t r = 0; r <= k; ++r) {
        const auto s = construct_extremal_simplex(F, k, r);
        if (s.ambient_dim() != 2 * k - r || simplex_rank(F, s) != r) {
          o.fail("extremal (" + std::to_string(k) + "," + std::to_string(r) + ") at q=" + std::to_string(q));
        }
        ++built;
      }
    }
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto W = construct_self_dual_subspace(F, m);
      if (W.dim() != m || !(orthogonal_complement(F, W) == W)) o.fail("self-dual subspace m=" + std::to_string(m));
    }
  }
  if (o.pass) o.detail = std::to_string(built) + " extremal simplices, 6 self-dual subspaces";
  return o;
}

// ---- 9: determinism --------------------------------------------------------------

Outcome criterion9() {
  Outcome o;
  std::vector<std::string> outputs;
  for (const char* threads : {"1", "2", "8"}) {
    std::ostringstream out, err;
    const int code = cli::run({"random-experiment", "--q", "7", "--d", "3", "--k", "2", "--alpha", "0.3",
                               "--trials", "20", "--seed", "42", "--threads", threads},
                              out, err);
    if (code != cli::kExitPass) o.fail("exit code " + std::to_string(code) + ": " + err.str());
    outputs.push_back(out.str());
  }
  if (outputs[0] != outputs[1] || outputs[0] != outputs[2]) o.fail("output differs across thread counts");
  if (o.pass) o.detail = std::to_string(outputs[0].size()) + " identical bytes at 1, 2 and 8 threads";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact algebraic identities", criterion1},
      {"character-sum identities and Weil bound", criterion2},
      {"Fourier round trip, Plancherel, fast transform", criterion3},
      {"sphere transform exponents", criterion4},
      {"conditional transform exponents", criterion5},
      {"counting lemmas", criterion6},
      {"random-set count error", criterion7},
      {"sharpness construction", criterion8},
      {"determinism across thread counts", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
