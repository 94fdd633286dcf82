#include "fqsimplex/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fqsimplex/charsums.hpp"
#include "fqsimplex/counting.hpp"
#include "fqsimplex/fourier.hpp"
#include "fqsimplex/measures.hpp"
#include "fqsimplex/parallel.hpp"

namespace fqsimplex::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Config {
  std::uint32_t q = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t j = 0;
  std::string simplex;
  std::vector<std::size_t> extremal;
  double alpha = 0.3;
  std::size_t trials = 20;
  std::uint64_t seed = 42;
  std::size_t threads = 0;
  double accept = 3.0;
  double tolerance = 1e-9;
  std::string out;
  std::string csv;
  std::string set = "full";
  bool fixed_size = false;
  std::uint32_t q_max = 101;
  std::string which;
  std::size_t xi_samples = 64;
  std::vector<std::string> warnings;
};

void warn_dimension(bool ok, std::vector<std::string>& warnings) {
  const std::string msg = "d <= 2k - r: outside the range where copies are guaranteed";
  if (!ok && std::find(warnings.begin(), warnings.end(), msg) == warnings.end()) warnings.push_back(msg);
}

class Reporter {
 public:
  void add(const std::string& check, Json params, Json value, Json bound, bool pass,
           Json extra = Json::object()) {
    Json rec;
    rec["check"] = check;
    rec["params"] = std::move(params);
    rec["value"] = std::move(value);
    rec["bound"] = std::move(bound);
    rec["pass"] = pass;
    for (auto& [key, v] : extra.items()) rec[key] = v;
    if (!pass) ++failed_;
    records_.push_back(std::move(rec));
  }

  void finish(const std::string& subcommand, Json extra = Json::object()) {
    Json s;
    s["check"] = "summary";
    s["subcommand"] = subcommand;
    s["records"] = records_.size();
    s["failed"] = failed_;
    s["pass"] = failed_ == 0;
    for (auto& [key, v] : extra.items()) s[key] = v;
    records_.push_back(std::move(s));
  }

  bool all_pass() const { return failed_ == 0; }
  const std::vector<Json>& records() const { return records_; }

 private:
  std::vector<Json> records_;
  std::size_t failed_ = 0;
};

void flatten_into(const Json& j, const std::string& prefix, Json& flat) {
  for (auto& [key, v] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (v.is_object()) {
      flatten_into(v, name, flat);
    } else {
      flat[name] = v;
    }
  }
}

std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
  }
  return s;
}

void write_csv(const std::vector<Json>& records, std::ostream& os) {
  std::vector<Json> rows;
  std::vector<std::string> columns;
  for (const auto& r : records) {
    Json flat = Json::object();
    flatten_into(r, "", flat);
    for (auto& [key, v] : flat.items()) {
      (void)v;
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
    }
    rows.push_back(std::move(flat));
  }
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ",";
      if (row.contains(columns[c])) os << csv_cell(row[columns[c]]);
    }
    os << "\n";
  }
}

Json vec_json(const FqVector& v) { return Json(v.coords()); }

Json simplex_json(const Simplex& s) {
  Json pts = Json::array();
  for (const auto& p : s.points()) pts.push_back(vec_json(p));
  return pts;
}

PrimeField make_field(const Config& c) {
  if (c.q == 0) throw UsageError("--q is required");
  if (!is_prime(c.q) || c.q == 2) throw UsageError("--q must be an odd prime");
  return PrimeField(c.q);
}

struct Reference {
  Simplex simplex;
  std::size_t d = 0;
  std::size_t r = 0;
  std::vector<std::size_t> prefix;
};

std::optional<Reference> resolve_reference(const PrimeField& F, Config& c, bool required) {
  Simplex s;
  if (!c.simplex.empty()) {
    Json parsed;
    try {
      parsed = Json::parse(c.simplex);
    } catch (const Json::exception& e) {
      throw UsageError(std::string("--simplex is not valid JSON: ") + e.what());
    }
    if (!parsed.is_array() || parsed.size() < 2) throw UsageError("--simplex needs at least two points");
    std::vector<FqVector> pts;
    for (const auto& p : parsed) {
      if (!p.is_array()) throw UsageError("--simplex points must be arrays of integers");
      std::vector<std::int64_t> coords;
      for (const auto& x : p) {
        if (!x.is_number_integer()) throw UsageError("--simplex coordinates must be integers");
        coords.push_back(x.get<std::int64_t>());
      }
      pts.push_back(make_vector(F, coords));
    }
    try {
      s = Simplex::from_points(F, std::move(pts));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--simplex: ") + e.what());
    }
    if (c.d != 0 && c.d != s.ambient_dim()) throw UsageError("--d disagrees with the --simplex points");
    c.d = s.ambient_dim();
  } else if (!c.extremal.empty()) {
    const std::size_t k = c.extremal[0], r = c.extremal[1];
    if (k == 0 || r > k) throw UsageError("--extremal needs k >= 1 and 0 <= r <= k");
    if (r < k && F.q() % 4 != 1) throw UsageError("--extremal with r < k needs q = 1 (mod 4)");
    if (c.d == 0) c.d = 2 * k - r + 1;
    if (c.d < 2 * k - r) throw UsageError("--d must be at least 2k - r for --extremal");
    s = construct_extremal_simplex(F, k, r).embedded(c.d);
  } else if (c.k != 0) {
    if (c.d == 0) throw UsageError("--d is required");
    if (c.k > c.d) throw UsageError("--k must not exceed --d");
    s = standard_simplex(c.k, c.d);
  } else if (required) {
    throw UsageError("a reference simplex is required: --k, --simplex or --extremal");
  } else {
    return std::nullopt;
  }
  if (c.k != 0 && c.k != s.k()) throw UsageError("--k disagrees with the reference simplex");
  c.k = s.k();
  if (s.k() <= kMaxPermutationK) {
    try {
      s = reorder_for_prefix_ranks(F, s);
    } catch (const NoPrefixOrdering&) {
      // keep the given order; prefix ranks are reported as they are
    }
  }
  return Reference{s, s.ambient_dim(), simplex_rank(F, s), prefix_ranks(F, s)};
}

Json reference_params(const PrimeField& F, const Reference& ref) {
  Json p;
  p["q"] = F.q();
  p["d"] = ref.d;
  p["k"] = ref.simplex.k();
  p["r"] = ref.r;
  p["simplex"] = simplex_json(ref.simplex);
  return p;
}

void require_grid(std::uint32_t q, std::size_t d, double cap) {
  if (d == 0) throw UsageError("--d is required");
  if (std::pow(static_cast<double>(q), static_cast<double>(d)) > cap) {
    throw UsageError("q^d is too large for this check");
  }
}

// ---------------------------------------------------------------------------

void cmd_verify_gauss(Config& c, Reporter& rep) {
  const PrimeField F = make_field(c);
  if (c.d == 0) c.d = 1;
  require_grid(c.q, c.d, 1e5);
  const std::size_t threads = resolve_threads(c.threads);
  const auto g = gauss_sum(F);
  const double root = std::sqrt(static_cast<double>(c.q));
  const double dev = std::abs(std::abs(g.value) - root) / root;
  rep.add("gauss_sum_modulus", Json{{"q", c.q}}, dev, c.tolerance, dev <= c.tolerance,
          Json{{"re", g.value.real()}, {"im", g.value.imag()}});

  constexpr double kRelative = 1e-6;
  const PointIndexer grid(c.q, c.d);
  const std::size_t pairs = (c.q - 1) * grid.size();
  std::vector<double> residual(pairs);
  parallel_for(pairs, threads, [&](std::size_t n) {
    const FieldElement a(static_cast<std::uint32_t>(1 + n / grid.size()));
    const FqVector b = grid.decode(n % grid.size());
    const auto closed = quadratic_sum_closed_form(F, a, b);
    const auto direct = quadratic_sum_direct(F, a, b);
    residual[n] = std::abs(direct - closed) / std::max(1.0, std::abs(closed));
  });
  for (std::size_t n = 0; n < pairs; ++n) {
    const std::uint32_t a = static_cast<std::uint32_t>(1 + n / grid.size());
    Json params{{"q", c.q}, {"d", c.d}, {"a", a}, {"b", vec_json(grid.decode(n % grid.size()))}};
    rep.add("quadratic_sum_identity", params, residual[n], kRelative, residual[n] <= kRelative);
  }
}

void cmd_charsum_audit(Config& c, Reporter& rep) {
  if (c.q_max < 3) throw UsageError("--q-max must be at least 3");
  if (c.q_max > kMaxAuditModulus) throw UsageError("--q-max must be at most 500");
  const auto audit = weil_bound_audit(c.q_max, resolve_threads(c.threads));
  for (const auto& m : audit.maxima) {
    rep.add("weil_bound", Json{{"q", m.q}}, m.ratio_to_sqrt_q, kWeilConstant,
            m.ratio_to_sqrt_q <= kWeilConstant,
            Json{{"q", m.q},
                 {"n", m.n},
                 {"a", m.a},
                 {"b", m.b},
                 {"abs_value", m.abs_value},
                 {"ratio_to_sqrt_q", m.ratio_to_sqrt_q}});
  }
  rep.add("gauss_rows_ratio_one", Json{{"q_max", c.q_max}}, audit.gauss_row_deviation, c.tolerance,
          audit.gauss_row_deviation <= c.tolerance);
  rep.add("even_twist_b0_is_minus_one", Json{{"q_max", c.q_max}}, audit.even_row_deviation,
          c.tolerance, audit.even_row_deviation <= c.tolerance);
}

Json lemma_fields(const std::string& lemma, std::uint32_t q, std::size_t d, std::size_t j,
                  std::size_t rank, double max_err, double rate, double implied) {
  return Json{{"lemma", lemma}, {"q", q},         {"d", d},
              {"j", j},         {"rank", rank},   {"max_err", max_err},
              {"rate", rate},   {"implied_constant", implied}};
}

void cmd_verify_measures(Config& c, Reporter& rep) {
  const PrimeField F = make_field(c);
  const auto ref = resolve_reference(F, c, false);
  if (c.d < 2) throw UsageError("--d must be at least 2");
  require_grid(c.q, c.d, 1e7);
  const std::size_t threads = resolve_threads(c.threads);

  for (std::uint32_t radius = 0; radius < c.q; ++radius) {
    const auto s = verify_sphere_asymptotic(F, FieldElement(radius), c.d, threads);
    const double max_err = std::max(s.err_at_zero, s.max_err_nonzero);
    rep.add("sphere_transform", Json{{"q", c.q}, {"d", c.d}, {"radius_sq", radius}}, max_err,
            c.accept * s.bound, s.implied_constant <= c.accept,
            lemma_fields(s.lemma, s.q, s.d, 1, radius == 0 ? 0 : 1, max_err, s.bound,
                         s.implied_constant));
  }
  if (!ref || ref->simplex.k() < 2) return;
  for (std::size_t j = 2; j <= ref->simplex.k(); ++j) {
    ConditionalReport worst;
    for (std::size_t t = 0; t < c.trials; ++t) {
      Rng rng(split_seed(split_seed(c.seed, j), t));
      const auto anchors = sample_anchors(F, ref->simplex, j - 1, rng);
      const auto r = verify_conditional_asymptotic(F, ref->simplex, j, anchors, threads);
      if (t == 0 || r.implied_constant > worst.implied_constant) worst = r;
    }
    Json params = reference_params(F, *ref);
    params["j"] = j;
    params["samples"] = c.trials;
    params["seed"] = c.seed;
    rep.add("conditional_transform", params, worst.max_err, c.accept * worst.bound,
            worst.implied_constant <= c.accept,
            lemma_fields(worst.lemma, worst.q, worst.d, j, worst.rank, worst.max_err, worst.bound,
                         worst.implied_constant));
  }
}

Json count_fields(const CountReport& r) {
  return Json{{"exact_count", r.exact_count},
              {"unordered_count", r.unordered_count},
              {"automorphisms", r.automorphisms},
              {"set_size", r.set_size},
              {"alpha", r.alpha},
              {"main_term", r.main_term},
              {"error_bound", r.error_bound},
              {"normalized_error", r.normalized_error},
              {"identity_holds", r.identity_holds},
              {"dimension_ok", r.dimension_ok},
              {"alpha_threshold", r.alpha_threshold}};
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError("--alpha must lie in (0, 1]");
}

void cmd_count(Config& c, Reporter& rep) {
  const PrimeField F = make_field(c);
  const auto ref = *resolve_reference(F, c, true);
  require_grid(c.q, ref.d, 1e7);
  PointSet A(c.q, ref.d);
  Json params = reference_params(F, ref);
  params["set"] = c.set;
  if (c.set == "full") {
    A = PointSet::full(c.q, ref.d);
  } else if (c.set == "empty") {
    A = PointSet::empty(c.q, ref.d);
  } else if (c.set == "random") {
    check_alpha(c.alpha);
    Rng rng(split_seed(c.seed, 0));
    A = c.fixed_size ? PointSet::random_fixed_size(
                           c.q, ref.d,
                           static_cast<std::size_t>(std::llround(c.alpha * A.grid().size())), rng)
                     : PointSet::random_binomial(c.q, ref.d, c.alpha, rng);
    params["alpha"] = c.alpha;
    params["seed"] = c.seed;
    params["fixed_size"] = c.fixed_size;
  } else {
    throw UsageError("--set must be full, empty or random");
  }
  const auto r = count_isometric_copies(F, A, ref.simplex, resolve_threads(c.threads));
  warn_dimension(r.dimension_ok, c.warnings);
  rep.add("count", params, r.exact_count, nullptr, r.identity_holds, count_fields(r));
}

void cmd_random_experiment(Config& c, Reporter& rep, Json& summary) {
  const PrimeField F = make_field(c);
  const auto ref = *resolve_reference(F, c, true);
  require_grid(c.q, ref.d, 1e7);
  check_alpha(c.alpha);
  const auto result = random_set_experiment(F, ref.simplex, c.alpha, c.trials, c.seed,
                                            resolve_threads(c.threads), c.fixed_size);
  warn_dimension(result.reports.empty() || result.reports.front().dimension_ok, c.warnings);
  Json base = reference_params(F, ref);
  base["alpha"] = c.alpha;
  base["seed"] = c.seed;
  for (std::size_t t = 0; t < result.reports.size(); ++t) {
    Json params = base;
    params["trial"] = t;
    const auto& r = result.reports[t];
    rep.add("trial", params, r.normalized_error, c.accept,
            r.normalized_error <= c.accept && r.identity_holds, count_fields(r));
  }
  summary["max_normalized_error"] = result.max_normalized_error;
  summary["mean"] = result.mean_normalized_error;
  summary["trials"] = c.trials;
}

void cmd_verify_lemma(Config& c, Reporter& rep) {
  const PrimeField F = make_field(c);
  const auto ref = *resolve_reference(F, c, true);
  require_grid(c.q, ref.d, 1e7);
  const std::size_t threads = resolve_threads(c.threads);
  const std::size_t k = ref.simplex.k();
  const std::size_t j_lo = c.which == "4.2" ? 1 : 2;
  if (c.j != 0 && (c.j < j_lo || c.j > k)) throw UsageError("--j is out of range for this lemma");
  if (k < j_lo) throw UsageError("this lemma needs k >= 2");
  const std::size_t first = c.j ? c.j : j_lo;
  const std::size_t last = c.j ? c.j : k;

  for (std::size_t j = first; j <= last; ++j) {
    Json params = reference_params(F, ref);
    params["j"] = j;
    if (c.which == "4.1") {
      for (std::size_t t = 0; t < c.trials; ++t) {
        Rng rng(split_seed(split_seed(c.seed, j), t));
        const auto anchors = sample_anchors(F, ref.simplex, j - 1, rng);
        const auto r = verify_dependent_bound(F, ref.simplex, j, anchors);
        Json p = params;
        p["sample"] = t;
        Json anchor_json = Json::array();
        for (const auto& y : anchors) anchor_json.push_back(vec_json(y));
        rep.add("dependent_span_sum", p, r.span_sum, r.bound, r.pass,
                Json{{"lemma", "4.1"}, {"prev_rank", r.prev_rank}, {"anchors", anchor_json}});
      }
    } else if (c.which == "4.2") {
      const auto r = verify_count_asymptotic(F, ref.simplex, j, threads);
      warn_dimension(r.dimension_ok, c.warnings);
      rep.add("count_asymptotic", params, r.error, c.accept * r.bound, r.implied_constant <= c.accept,
              Json{{"lemma", "4.2"},
                   {"rank", r.rank},
                   {"script_s", r.value},
                   {"rate", r.bound},
                   {"implied_constant", r.implied_constant},
                   {"dimension_ok", r.dimension_ok}});
    } else {
      std::vector<FqVector> xis;
      const PointIndexer grid(c.q, ref.d);
      if (grid.size() <= 1000) {
        for (std::size_t i = 1; i < grid.size(); ++i) xis.push_back(grid.decode(i));
        params["xi"] = "all";
      } else {
        Rng rng(split_seed(c.seed, 1000 + j));
        while (xis.size() < c.xi_samples) {
          const std::size_t i = 1 + uniform_below(rng, grid.size() - 1);
          xis.push_back(grid.decode(i));
        }
        params["xi"] = "sampled";
        params["xi_samples"] = c.xi_samples;
        params["seed"] = c.seed;
      }
      const auto r = verify_error_lemma(F, ref.simplex, j, xis, threads);
      rep.add("error_lemma", params, r.max_value, c.accept * r.bound, r.implied_constant <= c.accept,
              Json{{"lemma", "4.3"},
                   {"rank", r.rank},
                   {"worst_xi", vec_json(r.worst_xi)},
                   {"rate", r.bound},
                   {"implied_constant", r.implied_constant}});
    }
  }
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--q", c.q, "odd prime modulus");
  sub->add_option("--d", c.d, "ambient dimension");
  sub->add_option("--threads", c.threads, "worker threads (0: FQSIMPLEX_THREADS or hardware)");
  sub->add_option("--tolerance", c.tolerance, "tolerance for floating-point identities");
  sub->add_option("--accept-constant", c.accept, "acceptance bound for implied constants");
  sub->add_option("--out", c.out, "write JSON lines here instead of stdout");
  sub->add_option("--csv", c.csv, "also write the records as CSV");
}

void add_simplex(CLI::App* sub, Config& c) {
  sub->add_option("--k", c.k, "simplex dimension (standard simplex unless given otherwise)");
  auto* lit = sub->add_option("--simplex", c.simplex, "JSON list of points, e.g. [[0,0],[1,0],[0,1]]");
  auto* ext = sub->add_option("--extremal", c.extremal, "extremal rank-r k-simplex: k r")->expected(2);
  lit->excludes(ext);
}

void add_random(CLI::App* sub, Config& c) {
  sub->add_option("--alpha", c.alpha, "target density in (0, 1]");
  sub->add_option("--seed", c.seed, "master seed");
  sub->add_flag("--fixed-size", c.fixed_size, "sample |A| = round(alpha q^d) exactly");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Character sums, spherical measures and simplex counts over F_q^d", "fqsimplex"};
  app.require_subcommand(1);

  auto* gauss = app.add_subcommand("verify-gauss", "check the completed-square identity for every (a, b)");
  add_common(gauss, c);

  auto* audit = app.add_subcommand("charsum-audit", "Weil-bound audit of twisted Kloosterman sums");
  add_common(audit, c);
  audit->add_option("--q-max", c.q_max, "largest modulus audited (<= 500)");

  auto* measures = app.add_subcommand("verify-measures", "spectral decay of spherical and conditional measures");
  add_common(measures, c);
  add_simplex(measures, c);
  measures->add_option("--trials", c.trials, "anchor samples per j");
  measures->add_option("--seed", c.seed, "master seed");

  auto* count = app.add_subcommand("count", "exact count of isometric copies in a set");
  add_common(count, c);
  add_simplex(count, c);
  add_random(count, c);
  count->add_option("--set", c.set, "full, empty or random")->check(CLI::IsMember({"full", "empty", "random"}));

  auto* experiment = app.add_subcommand("random-experiment", "counts in random sets, normalized error per trial");
  add_common(experiment, c);
  add_simplex(experiment, c);
  add_random(experiment, c);
  experiment->add_option("--trials", c.trials, "number of random sets");

  auto* lemma = app.add_subcommand("verify-lemma", "counting lemmas: dependent bound, count asymptotic, error term");
  add_common(lemma, c);
  add_simplex(lemma, c);
  lemma->add_option("--which", c.which, "4.1, 4.2 or 4.3")->required()->check(CLI::IsMember({"4.1", "4.2", "4.3"}));
  lemma->add_option("--j", c.j, "single prefix length (default: all)");
  lemma->add_option("--trials", c.trials, "anchor samples per j (4.1)");
  lemma->add_option("--seed", c.seed, "master seed");
  lemma->add_option("--xi-samples", c.xi_samples, "sampled frequencies when q^d > 1000 (4.3)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  Reporter rep;
  Json summary = Json::object();
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "verify-gauss") {
      cmd_verify_gauss(c, rep);
    } else if (name == "charsum-audit") {
      cmd_charsum_audit(c, rep);
    } else if (name == "verify-measures") {
      cmd_verify_measures(c, rep);
    } else if (name == "count") {
      cmd_count(c, rep);
    } else if (name == "random-experiment") {
      cmd_random_experiment(c, rep, summary);
    } else {
      cmd_verify_lemma(c, rep);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  for (const auto& w : c.warnings) err << "warning: " << w << "\n";
  rep.finish(name, summary);

  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) {
      err << "error: cannot open " << c.out << "\n";
      return kExitUsage;
    }
  }
  std::ostream& sink = c.out.empty() ? out : file;
  for (const auto& r : rep.records()) sink << r.dump() << "\n";
  if (!c.csv.empty()) {
    std::ofstream csv(c.csv);
    if (!csv) {
      err << "error: cannot open " << c.csv << "\n";
      return kExitUsage;
    }
    write_csv(rep.records(), csv);
  }
  for (const auto& r : rep.records()) {
    if (!r["pass"].get<bool>() && r["check"] != "summary") err << "bound violated: " << r.dump() << "\n";
  }
  return rep.all_pass() ? kExitPass : kExitBoundViolation;
}

}  // namespace fqsimplex::cli
