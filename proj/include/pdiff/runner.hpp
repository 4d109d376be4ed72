#pragma once
// Configuration ingestion, suite orchestration and JSON reports for the command-line runner.
//
// Reports contain no timing and no unordered containers, so a given (config,
// seed) pair always serializes to the same bytes.

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdiff/connection_checks.hpp"
#include "pdiff/diagonal.hpp"
#include "pdiff/identities.hpp"
#include "pdiff/invariance.hpp"
#include "pdiff/residues.hpp"
#include "pdiff/wzw.hpp"

namespace pdiff::runner {

using json = nlohmann::json;

// Bad input: reported with exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HighestRootData {
  std::vector<int> coefficients;
  int coxeter = 0;
  int dual_coxeter = 0;
};

struct RunConfig {
  CartanData cartan = CartanData::sl2();
  WeightData weights{{{1}, {1}, {1}, {1}}};
  CasimirSpec casimir = CasimirSpec::uniform(1, Q(1));
  std::optional<std::vector<Q>> z;
  int level = 1;
  std::optional<HighestRootData> highest_root;
  std::uint64_t seed = 17;
  int trials = 20;
  std::vector<int> bound{2};  // multi-degree bound for module constructions
  int depth = 3;              // sequence length bound for the identity suites
  std::vector<std::string> suites;

  int n() const { return weights.n(); }

  std::vector<Q> points() const { return z ? *z : LevelConfig::default_points(n()); }

  std::optional<LevelConfig> level_config() const {
    LevelConfig cfg;
    if (highest_root) {
      cfg.level = level;
      cfg.highest_root = highest_root->coefficients;
      cfg.coxeter = highest_root->coxeter;
      cfg.dual_coxeter = highest_root->dual_coxeter;
      cfg.z = points();
    } else {
      try {
        cfg = LevelConfig::standard(cartan, level, points());
      } catch (const std::invalid_argument&) {
        return std::nullopt;
      }
    }
    cfg.validate(cartan, n());
    return cfg;
  }
};

// ---------------------------------------------------------------------------
// Parsing.

inline Q parse_rational(const json& j, const std::string& field) {
  if (j.is_number_integer()) return Q(mpz_class(std::to_string(j.get<long long>())));
  if (!j.is_string()) throw ConfigError(field + ": expected an integer or a \"p/q\" string");
  const auto s = j.get<std::string>();
  const auto ok = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+';
  });
  Q q;
  if (!ok || std::count(s.begin(), s.end(), '/') > 1 || q.set_str(s, 10) != 0)
    throw ConfigError(field + ": \"" + s + "\" is not a rational number");
  if (q.get_den() == 0) throw ConfigError(field + ": zero denominator");
  q.canonicalize();
  return q;
}

inline int parse_int(const json& j, const std::string& field, int lo, int hi) {
  if (!j.is_number_integer()) throw ConfigError(field + ": expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi)
    throw ConfigError(field + ": must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return int(v);
}

inline std::vector<std::vector<int>> parse_int_matrix(const json& j, const std::string& field, int lo, int hi) {
  if (!j.is_array()) throw ConfigError(field + ": expected an array of arrays");
  std::vector<std::vector<int>> out;
  for (std::size_t a = 0; a < j.size(); ++a) {
    if (!j[a].is_array()) throw ConfigError(field + "[" + std::to_string(a) + "]: expected an array");
    std::vector<int> row;
    for (std::size_t b = 0; b < j[a].size(); ++b)
      row.push_back(parse_int(j[a][b], field + "[" + std::to_string(a) + "][" + std::to_string(b) + "]", lo, hi));
    out.push_back(row);
  }
  return out;
}

// Rethrows a library validation error as a config error on `field`.
template <class F>
void validated(const std::string& field, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {"cartan", "weights", "casimir", "z",     "level", "highest_root",
                                                "seed",   "trials",  "bound",   "depth", "suites"};
  return keys;
}

inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, v] : j.items())
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
      throw ConfigError("config." + key + ": unknown field");
  RunConfig c;
  if (j.contains("cartan")) {
    const auto rows = parse_int_matrix(j["cartan"], "config.cartan", -1000, 1000);
    c.cartan = CartanData{int(rows.size()), rows};
  }
  validated("config.cartan", [&] { c.cartan.validate(); });
  const int r = c.cartan.r;
  if (j.contains("weights")) c.weights = WeightData{parse_int_matrix(j["weights"], "config.weights", 0, 1000)};
  validated("config.weights", [&] { c.weights.validate(r); });

  c.casimir = CasimirSpec::uniform(r, Q(1));
  if (j.contains("casimir")) {
    const auto& cj = j["casimir"];
    if (!cj.is_object()) throw ConfigError("config.casimir: expected an object");
    if (cj.contains("q")) {
      if (!cj["q"].is_array()) throw ConfigError("config.casimir.q: expected an array");
      c.casimir.q.clear();
      for (std::size_t k = 0; k < cj["q"].size(); ++k)
        c.casimir.q.push_back(parse_rational(cj["q"][k], "config.casimir.q[" + std::to_string(k) + "]"));
    }
    if (cj.contains("pairing")) {
      const auto& pj = cj["pairing"];
      if (!pj.is_array()) throw ConfigError("config.casimir.pairing: expected an array of arrays");
      Matrix P(pj.size(), pj.size());
      for (std::size_t a = 0; a < pj.size(); ++a) {
        if (!pj[a].is_array() || pj[a].size() != pj.size())
          throw ConfigError("config.casimir.pairing: must be a square matrix");
        for (std::size_t b = 0; b < pj.size(); ++b)
          P(a, b) = parse_rational(pj[a][b], "config.casimir.pairing[" + std::to_string(a) + "][" + std::to_string(b) + "]");
      }
      c.casimir.P = P;
    }
  }
  validated("config.casimir", [&] { Pairing(c.cartan, c.weights, c.casimir); });

  if (j.contains("z")) {
    if (!j["z"].is_array()) throw ConfigError("config.z: expected an array");
    std::vector<Q> z;
    for (std::size_t k = 0; k < j["z"].size(); ++k) z.push_back(parse_rational(j["z"][k], "config.z[" + std::to_string(k) + "]"));
    c.z = z;
  }
  if (j.contains("level")) c.level = parse_int(j["level"], "config.level", 1, 1000);
  if (j.contains("highest_root")) {
    const auto& h = j["highest_root"];
    if (!h.is_object() || !h.contains("coefficients") || !h.contains("coxeter") || !h.contains("dual_coxeter"))
      throw ConfigError("config.highest_root: needs coefficients, coxeter and dual_coxeter");
    HighestRootData d;
    if (!h["coefficients"].is_array()) throw ConfigError("config.highest_root.coefficients: expected an array");
    for (std::size_t k = 0; k < h["coefficients"].size(); ++k)
      d.coefficients.push_back(
          parse_int(h["coefficients"][k], "config.highest_root.coefficients[" + std::to_string(k) + "]", 0, 1000));
    d.coxeter = parse_int(h["coxeter"], "config.highest_root.coxeter", 2, 1000);
    d.dual_coxeter = parse_int(h["dual_coxeter"], "config.highest_root.dual_coxeter", 2, 1000);
    c.highest_root = d;
  }
  validated("config.level", [&] { c.level_config(); });

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("config.seed: expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("trials")) c.trials = parse_int(j["trials"], "config.trials", 1, 100000);
  if (j.contains("depth")) c.depth = parse_int(j["depth"], "config.depth", 1, 5);
  c.bound.assign(std::size_t(r), 2);
  if (j.contains("bound")) {
    if (!j["bound"].is_array() || int(j["bound"].size()) != r)
      throw ConfigError("config.bound: expected one entry per simple root");
    for (int k = 0; k < r; ++k) c.bound[std::size_t(k)] = parse_int(j["bound"][std::size_t(k)], "config.bound[" + std::to_string(k) + "]", 0, 12);
  }
  if (j.contains("suites")) {
    if (!j["suites"].is_array()) throw ConfigError("config.suites: expected an array of names");
    for (const auto& s : j["suites"]) {
      if (!s.is_string()) throw ConfigError("config.suites: expected an array of names");
      c.suites.push_back(s.get<std::string>());
    }
  }
  return c;
}

inline json rational_json(const Q& q) { return q.get_str(); }

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rational_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline json config_json(const RunConfig& c) {
  json j;
  j["cartan"] = c.cartan.c;
  j["weights"] = c.weights.lambda;
  json q = json::array();
  for (const auto& x : c.casimir.q) q.push_back(rational_json(x));
  j["casimir"]["q"] = q;
  if (c.casimir.P) j["casimir"]["pairing"] = matrix_json(*c.casimir.P);
  json z = json::array();
  for (const auto& x : c.points()) z.push_back(rational_json(x));
  j["z"] = z;
  j["level"] = c.level;
  if (c.highest_root)
    j["highest_root"] = {{"coefficients", c.highest_root->coefficients},
                         {"coxeter", c.highest_root->coxeter},
                         {"dual_coxeter", c.highest_root->dual_coxeter}};
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["bound"] = c.bound;
  j["depth"] = c.depth;
  return j;
}

// ---------------------------------------------------------------------------
// Records and suites.

struct Record {
  std::string anchor;  // "<suite>/<check>", unique within the registry
  std::string name;
  std::string status;  // pass, fail or skip
  long cases = 0;
  std::string witness;
};

inline std::string slug(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (std::isalnum(static_cast<unsigned char>(ch))) out += char(std::tolower(static_cast<unsigned char>(ch)));
    else if (!out.empty() && out.back() != '-') out += '-';
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

inline Record from_check(const std::string& suite, const Check& ch) {
  Record r{suite + "/" + slug(ch.name), ch.name, ch.pass ? "pass" : "fail", ch.cases, ch.pass ? "" : ch.detail};
  if (ch.pass && ch.cases == 0) {
    r.status = "skip";
    r.witness = "no applicable cases for this configuration";
  }
  return r;
}

inline Record skipped(const std::string& suite, const std::string& name, const std::string& why) {
  return Record{suite + "/" + slug(name), name, "skip", 0, why};
}

// Runs `f`, turning an exception into a failing record.
inline Record guarded(const std::string& suite, const std::string& name, const std::function<Check()>& f) {
  try {
    return from_check(suite, f());
  } catch (const std::exception& e) {
    return Record{suite + "/" + slug(name), name, "fail", 0, std::string("exception: ") + e.what()};
  }
}

inline json record_json(const Record& r) {
  json j{{"anchor", r.anchor}, {"name", r.name}, {"status", r.status}, {"cases", r.cases}};
  if (!r.witness.empty()) j["witness"] = r.witness;
  return j;
}

struct Suite {
  std::string name;
  std::string description;
  std::function<std::vector<Record>(const RunConfig&)> run;
};

namespace detail {

inline Check relations_on_keys(const RunConfig& c) {
  Check ch{"defining relations on keys"};
  const auto& cd = c.cartan;
  const auto& w = c.weights;
  for (const auto& deg : degrees_up_to(c.bound))
    for (const auto& key : enumerate_keys(w.n(), deg)) {
      const auto v = ColorSeqVec::basis(key);
      for (int k = 0; k < cd.r; ++k)
        for (int l = 0; l < cd.r; ++l) {
          ++ch.cases;
          auto ef = e_action(k, f_action(l, cd, w, v)) - f_action(l, cd, w, e_action(k, v));
          const bool ok_ef = k == l ? ef == cartan_action(k, cd, w, v) : ef.is_zero();
          auto he = cartan_action(k, cd, w, e_action(l, v)) - e_action(l, cartan_action(k, cd, w, v));
          auto hf = cartan_action(k, cd, w, f_action(l, cd, w, v)) - f_action(l, cd, w, cartan_action(k, cd, w, v));
          if (!ok_ef || he != e_action(l, v) * Q(cd(k, l)) || hf != f_action(l, cd, w, v) * Q(-cd(k, l)))
            ch.fail("k=" + std::to_string(k + 1) + " l=" + std::to_string(l + 1) + " on " + to_string(key));
        }
    }
  return ch;
}

inline Check serre_relations(const RunConfig& c) {
  Check ch{"Serre relations on test elements"};
  for (int k = 0; k < c.cartan.r; ++k)
    for (int l = 0; l < c.cartan.r; ++l) {
      if (k == l) continue;
      const int N = 1 - c.cartan(k, l);
      if (N > 4) continue;
      ++ch.cases;
      const auto rep = serre_verify(c.cartan, c.weights, k, l, N);
      if (!rep.identity_holds || !rep.serre_vanishes)
        ch.fail("k=" + std::to_string(k + 1) + " l=" + std::to_string(l + 1) + ": " + rep.witness);
    }
  return ch;
}

inline Check casimir_commutes(const RunConfig& c) {
  Check ch{"Casimir commutes with the diagonal action"};
  CasimirAction cas(Pairing(c.cartan, c.weights, c.casimir));
  const auto& cd = c.cartan;
  const auto& w = c.weights;
  for (const auto& sl : tensor_module(cd, w, c.bound).slices)
    for (const auto& v : sl.basis)
      for (int a = 0; a < w.n(); ++a)
        for (int b = a + 1; b < w.n(); ++b)
          for (int k = 0; k < cd.r; ++k) {
            ++ch.cases;
            auto C = [&](const ColorSeqVec& x) { return cas.apply(a, b, x); };
            if (C(e_action(k, v)) != e_action(k, C(v)) || C(f_action(k, cd, w, v)) != f_action(k, cd, w, C(v)) ||
                C(cartan_action(k, cd, w, v)) != cartan_action(k, cd, w, C(v)))
              ch.fail("slots " + std::to_string(a + 1) + "," + std::to_string(b + 1) + " on " + v.str());
          }
  return ch;
}

inline Check gm_equals_kz(const RunConfig& c) {
  Check ch{"Gauss-Manin equals KZ on invariants"};
  Pairing pr(c.cartan, c.weights, c.casimir);
  CasimirAction cas(pr);
  const auto inv = invariants(c.cartan, c.weights);
  const auto kz = kz_matrices(cas, inv.basis);
  const auto gm = gm_matrices(pr, inv.basis, inv.degree);
  for (const auto& [p, M] : kz.omega) {
    ++ch.cases;
    if (!(gm.omega.at(p) == M)) ch.fail("pair " + std::to_string(p.first + 1) + "," + std::to_string(p.second + 1));
  }
  return ch;
}

inline Check kz_flatness(const RunConfig& c) {
  Check ch{"KZ infinitesimal braid relations"};
  CasimirAction cas(Pairing(c.cartan, c.weights, c.casimir));
  const auto inv = invariants(c.cartan, c.weights);
  const auto rep = flatness_check(kz_matrices(cas, inv.basis), c.n());
  ch.cases = rep.relations;
  if (!rep.flat) ch.fail(rep.failures.front());
  if (rep.relations == 0) ch.cases = 1;  // fewer than three points: nothing to check, trivially flat
  return ch;
}

inline Check kernel_equals_criterion(const RunConfig& c, const LevelConfig& cfg) {
  Check ch{"level-l kernel equals the diagonal vanishing locus"};
  const auto fib = wzw_fiber(c.cartan, c.weights, cfg);
  ++ch.cases;
  const auto crit = ramadas_subspace(c.cartan, c.weights, cfg, fib.invariants);
  if (!same_span(fib.kernel, crit))
    ch.fail("kernel dim " + std::to_string(fib.dim()) + ", criterion dim " + std::to_string(crit.cols()));
  return ch;
}

inline Check e_routes(const RunConfig& c, const LevelConfig& cfg) {
  Check ch{"two routes to the highest-root operator"};
  for (const auto& sl : tensor_module(c.cartan, c.weights, c.bound).slices) {
    const auto pool = standard_pool(sl.degree);
    const auto seqs = highest_root_sequences(cfg, pool);
    for (const auto& v : sl.basis)
      for (const auto& I : seqs) {
        ++ch.cases;
        if (!e_operator_routes(I, expand(v, pool)).agree) ch.fail("I=" + to_string(I) + " on " + v.str());
      }
  }
  return ch;
}

inline Check fiber_flatness(const RunConfig& c, const LevelConfig& cfg) {
  Check ch{"KZ connection at matched level preserves W"};
  const auto rep = wzw_flatness(c.cartan, c.weights, cfg, cfg.casimir(c.cartan));
  ch.cases = long(rep.fiber_dim) * c.n();
  if (rep.fiber_dim == 0) ch.cases = 1;
  if (!rep.flat()) ch.fail(rep.failures.front());
  return ch;
}

inline Check coprimitives(const RunConfig& c) {
  Check ch{"invariants inject into coprimitives"};
  const auto rep = coprimitive_report(Pairing(c.cartan, c.weights, c.casimir));
  ch.cases = long(rep.invariants) + 1;
  if (!rep.injective())
    ch.fail(std::to_string(rep.invariants) + " invariants, " + std::to_string(rep.invariants_in_quotient) +
            " survive in the quotient");
  if (!rep.symmetric_part_matches) ch.fail("the Aomoto differential disagrees with -sum q_k f_k on expansions");
  return ch;
}

}  // namespace detail

inline const std::vector<Suite>& registry() {
  using namespace detail;
  static const std::vector<Suite> suites = {
      {"shuffle", "shuffle product, coproduct and their realization",
       [](const RunConfig& c) {
         return std::vector<Record>{from_check("shuffle", check_bialgebra(6, c.depth + 1)),
                                    from_check("shuffle", check_product_realization(5, c.depth + 1))};
       }},
      {"residues", "formal residues against the rational model, flag residues",
       [](const RunConfig& c) {
         return std::vector<Record>{
             from_check("residues", check_residue_rules(4, c.depth + 1)),
             from_check("residues", check_iterated_residue_realization(4, c.depth + 1)),
             from_check("residues", check_flag_residue(4, c.depth + 1, c.depth + 1)),
             from_check("residues", check_intrinsic_independence(c.depth + 1, c.seed)),
             from_check("residues", check_polynomial_generator(c.depth + 1)),
             from_check("residues", check_ef_commutator(4, c.depth + 1))};
       }},
      {"mixed", "mixed shuffle identities at random points",
       [](const RunConfig& c) {
         return std::vector<Record>{from_check("mixed", check_mixed_shuffle(c.depth, c.trials, c.seed)),
                                    from_check("mixed", check_mixed_shuffle2(c.depth, c.trials, c.seed + 1))};
       }},
      {"phi", "Phi operators: sum-product, powers, brackets, Serre type",
       [](const RunConfig& c) {
         return std::vector<Record>{from_check("phi", check_phi_realization(4, c.depth)),
                                    from_check("phi", check_sum_product(c.depth + 2, c.trials, c.seed)),
                                    from_check("phi", check_power(c.depth + 1)),
                                    from_check("phi", check_bracket_identity(c.depth + 1, c.seed)),
                                    from_check("phi", check_serre_type(c.depth + 1, c.seed))};
       }},
      {"rep", "Lie algebra relations and Serre relations for the configured weights",
       [](const RunConfig& c) {
         return std::vector<Record>{guarded("rep", "defining relations on keys", [&] { return relations_on_keys(c); }),
                                    guarded("rep", "Serre relations on test elements", [&] { return serre_relations(c); })};
       }},
      {"diagonal", "iterated brackets, root support and pole control of diagonal residues",
       [](const RunConfig& c) {
         std::vector<Record> out{
             guarded("diagonal", "iterated e-bracket against residue at infinity",
                     [&] { return check_iterated_bracket_on_module(c.cartan, c.weights, c.bound, 3, c.seed); }),
             guarded("diagonal", "nonzero iterated residues sit on roots",
                     [&] { return check_root_support(c.cartan, c.weights, c.bound, 3, c.seed); })};
         const auto cfg = c.level_config();
         if (cfg)
           out.push_back(guarded("diagonal", "poles of highest-root residues of primitives",
                                 [&] { return check_primitive_pole_control(c.cartan, c.weights, *cfg, c.bound); }));
         else
           out.push_back(skipped("diagonal", "poles of highest-root residues of primitives", "no highest root data"));
         return out;
       }},
      {"boundary", "residues of the logarithmic form along boundary divisors",
       [](const RunConfig& c) {
         if (!weight_zero_degree(c.cartan, c.weights))
           return std::vector<Record>{skipped("boundary", "boundary residues of eta", "no weight-zero pool")};
         return std::vector<Record>{guarded("boundary", "boundary residues of eta", [&] {
           return check_boundary_residues(c.cartan, c.weights, c.casimir);
         })};
       }},
      {"coprimitive", "invariants against coprimitive quotients",
       [](const RunConfig& c) {
         if (invariants(c.cartan, c.weights).basis.empty())
           return std::vector<Record>{skipped("coprimitive", "invariants inject into coprimitives", "no invariants")};
         return std::vector<Record>{
             guarded("coprimitive", "invariants inject into coprimitives", [&] { return coprimitives(c); })};
       }},
      {"connection", "Gauss-Manin against KZ, KZ flatness",
       [](const RunConfig& c) {
         if (invariants(c.cartan, c.weights).basis.empty())
           return std::vector<Record>{skipped("connection", "Gauss-Manin equals KZ on invariants", "no invariants"),
                                      skipped("connection", "KZ infinitesimal braid relations", "no invariants")};
         return std::vector<Record>{
             guarded("connection", "Gauss-Manin equals KZ on invariants", [&] { return gm_equals_kz(c); }),
             guarded("connection", "KZ infinitesimal braid relations", [&] { return kz_flatness(c); })};
       }},
      {"appendix", "Gamma identities, raising part of the Casimir, Casimir invariance",
       [](const RunConfig& c) {
         std::vector<Record> out{from_check("appendix", check_gamma_phi(4, c.depth)),
                                 from_check("appendix", check_gamma_corollary(3, c.depth))};
         if (c.n() >= 2) {
           CasimirSpec two{c.casimir.q, {}};
           if (c.casimir.P) {
             Matrix P(2, 2);
             for (std::size_t a = 0; a < 2; ++a)
               for (std::size_t b = 0; b < 2; ++b) P(a, b) = (*c.casimir.P)(a, b);
             two.P = P;
           }
           const WeightData w2{{c.weights.lambda[0], c.weights.lambda[1]}};
           out.push_back(guarded("appendix", "C+ from Gamma", [&] { return check_cplus_from_gamma(c.cartan, w2, two, 2, 1); }));
           out.push_back(guarded("appendix", "Casimir commutes with the diagonal action", [&] { return casimir_commutes(c); }));
         } else {
           out.push_back(skipped("appendix", "C+ from Gamma", "needs two marked points"));
           out.push_back(skipped("appendix", "Casimir commutes with the diagonal action", "needs two marked points"));
         }
         return out;
       }},
      {"wzw", "level-l subspace: kernel against criterion, routes, flatness",
       [](const RunConfig& c) {
         const std::vector<std::string> names = {"level-l kernel equals the diagonal vanishing locus",
                                                 "two routes to the highest-root operator",
                                                 "KZ connection at matched level preserves W"};
         const auto cfg = c.level_config();
         std::vector<Record> out;
         if (!cfg) {
           for (const auto& nm : names) out.push_back(skipped("wzw", nm, "no highest root data"));
           return out;
         }
         out.push_back(guarded("wzw", names[0], [&] { return kernel_equals_criterion(c, *cfg); }));
         out.push_back(guarded("wzw", names[1], [&] { return e_routes(c, *cfg); }));
         out.push_back(guarded("wzw", names[2], [&] { return fiber_flatness(c, *cfg); }));
         return out;
       }},
      {"moebius", "Moebius invariance of realized primitives, residue theorem",
       [](const RunConfig& c) {
         const auto vs = realized_primitives(c.cartan, c.weights, c.bound);
         return std::vector<Record>{
             from_check("moebius", check_moebius_invariance(vs, 5, c.seed)),
             from_check("moebius", check_infinitesimal_invariance(vs)),
             from_check("moebius", check_residue_theorem(vs))};
       }},
  };
  return suites;
}

inline std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& s : registry()) out.push_back(s.name);
  return out;
}

inline std::vector<const Suite*> select_suites(const std::vector<std::string>& names) {
  std::vector<const Suite*> out;
  for (const auto& s : registry())
    if (names.empty() || std::find(names.begin(), names.end(), s.name) != names.end()) out.push_back(&s);
  for (const auto& nm : names)
    if (std::none_of(registry().begin(), registry().end(), [&](const Suite& s) { return s.name == nm; }))
      throw ConfigError("suite \"" + nm + "\" is unknown");
  return out;
}

// ---------------------------------------------------------------------------
// Reports.

struct Report {
  std::string command;
  json config;
  std::vector<Record> records;
  json data = json::object();

  bool failed() const {
    return std::any_of(records.begin(), records.end(), [](const Record& r) { return r.status == "fail"; });
  }

  json to_json() const {
    auto sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const Record& a, const Record& b) { return a.anchor < b.anchor; });
    json recs = json::array();
    int pass = 0, fail = 0, skip = 0;
    for (const auto& r : sorted) {
      recs.push_back(record_json(r));
      (r.status == "pass" ? pass : r.status == "fail" ? fail : skip)++;
    }
    return json{{"command", command},
                {"config", config},
                {"records", recs},
                {"data", data},
                {"summary", {{"passed", pass}, {"failed", fail}, {"skipped", skip}, {"status", fail ? "fail" : "pass"}}}};
  }
};

inline Report cmd_verify(const RunConfig& c) {
  Report rep{"verify", config_json(c), {}, json::object()};
  for (const auto* s : select_suites(c.suites))
    for (auto& r : s->run(c)) rep.records.push_back(std::move(r));
  json ran = json::array();
  for (const auto* s : select_suites(c.suites)) ran.push_back(s->name);
  rep.data["suites"] = ran;
  return rep;
}

inline Report cmd_rep(const RunConfig& c) {
  Report rep{"rep", config_json(c), {}, json::object()};
  json modules = json::array();
  for (int nu = 0; nu < c.n(); ++nu) {
    json slices = json::array();
    std::size_t total = 0;
    for (const auto& sl : generated_submodule(c.cartan, single_slot(c.weights, nu), c.bound)) {
      slices.push_back({{"degree", sl.degree}, {"dim", sl.dim()}});
      total += sl.dim();
    }
    modules.push_back({{"slot", nu + 1}, {"weight", c.weights.lambda[std::size_t(nu)]}, {"slices", slices},
                       {"dim_up_to_bound", total}});
  }
  rep.data["modules"] = modules;
  json tensor = json::array();
  for (const auto& sl : tensor_module(c.cartan, c.weights, c.bound).slices)
    tensor.push_back({{"degree", sl.degree}, {"dim", sl.dim()}});
  rep.data["tensor_slices"] = tensor;
  const auto inv = invariants(c.cartan, c.weights);
  rep.data["invariants"] = {{"degree", inv.degree}, {"weight_zero_dim", inv.weight_zero.size()},
                            {"dim", inv.basis.size()}};
  json basis = json::array();
  for (const auto& v : inv.basis) basis.push_back(v.str());
  rep.data["invariants"]["basis"] = basis;
  rep.records.push_back(guarded("rep", "defining relations on keys", [&] { return detail::relations_on_keys(c); }));
  return rep;
}

inline json connection_json(const ConnectionMatrices& cm) {
  json j = json::object();
  for (const auto& [p, M] : cm.omega) j[std::to_string(p.first + 1) + "," + std::to_string(p.second + 1)] = matrix_json(M);
  return j;
}

inline Report cmd_kz(const RunConfig& c) {
  Report rep{"kz", config_json(c), {}, json::object()};
  const auto inv = invariants(c.cartan, c.weights);
  rep.data["invariants_dim"] = inv.basis.size();
  if (inv.basis.empty()) return rep;
  CasimirAction cas(Pairing(c.cartan, c.weights, c.casimir));
  rep.data["omega"] = connection_json(kz_matrices(cas, inv.basis));
  rep.records.push_back(guarded("kz", "KZ infinitesimal braid relations", [&] { return detail::kz_flatness(c); }));
  return rep;
}

inline Report cmd_gm(const RunConfig& c) {
  Report rep{"gm", config_json(c), {}, json::object()};
  const auto inv = invariants(c.cartan, c.weights);
  rep.data["invariants_dim"] = inv.basis.size();
  if (inv.basis.empty()) return rep;
  try {
    rep.data["omega"] = connection_json(gm_matrices(Pairing(c.cartan, c.weights, c.casimir), inv.basis, inv.degree));
  } catch (const std::domain_error& e) {
    rep.records.push_back(Record{"gm/gauss-manin-matrices", "Gauss-Manin matrices", "fail", 0, e.what()});
  }
  return rep;
}

inline Report cmd_compare(const RunConfig& c) {
  Report rep{"compare", config_json(c), {}, json::object()};
  const auto inv = invariants(c.cartan, c.weights);
  rep.data["invariants_dim"] = inv.basis.size();
  if (inv.basis.empty()) {
    rep.records.push_back(skipped("compare", "Gauss-Manin equals KZ on invariants", "no invariants"));
    return rep;
  }
  Pairing pr(c.cartan, c.weights, c.casimir);
  CasimirAction cas(pr);
  const auto kz = kz_matrices(cas, inv.basis);
  rep.data["kz"] = connection_json(kz);
  Check ch{"Gauss-Manin equals KZ on invariants"};
  try {
    const auto gm = gm_matrices(pr, inv.basis, inv.degree);
    rep.data["gm"] = connection_json(gm);
    json diffs = json::array();
    for (const auto& [p, M] : kz.omega) {
      ++ch.cases;
      const Matrix& G = gm.omega.at(p);
      for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j)
          if (G(i, j) != M(i, j))
            diffs.push_back({{"pair", std::to_string(p.first + 1) + "," + std::to_string(p.second + 1)},
                             {"row", i + 1},
                             {"col", j + 1},
                             {"gm", rational_json(G(i, j))},
                             {"kz", rational_json(M(i, j))}});
    }
    rep.data["diffs"] = diffs;
    rep.data["equal"] = diffs.empty();
    if (!diffs.empty()) ch.fail(std::to_string(diffs.size()) + " entries differ");
    rep.records.push_back(from_check("compare", ch));
  } catch (const std::domain_error& e) {
    rep.records.push_back(Record{"compare/" + slug(ch.name), ch.name, "fail", 0, e.what()});
  }
  return rep;
}

inline Report cmd_residues(const RunConfig& c) {
  Report rep{"residues", config_json(c), {}, json::object()};
  const auto m = weight_zero_degree(c.cartan, c.weights);
  if (!m) {
    rep.records.push_back(skipped("residues", "boundary residues of eta", "no weight-zero pool"));
    return rep;
  }
  Pairing pr(c.cartan, c.weights, c.casimir);
  const auto pool = standard_pool(*m);
  json table = json::array();
  for (const auto& b : boundary_residues(pr, pool))
    table.push_back({{"divisor", b.divisor.label()},
                     {"minus_residue_direct", rational_json(b.direct)},
                     {"minus_residue_closed", b.closed ? json(rational_json(*b.closed)) : json(nullptr)},
                     {"agree", b.agree()}});
  rep.data["divisors"] = table;
  json cls = json::array();
  for (const auto& d : integrality_classification(pr, pool))
    cls.push_back({{"divisor", d.divisor.label()}, {"value", rational_json(d.value)}, {"class", to_string(d.cls)}});
  rep.data["integrality"] = cls;
  rep.records.push_back(
      guarded("residues", "boundary residues of eta", [&] { return check_boundary_residues(c.cartan, c.weights, c.casimir); }));
  if (!invariants(c.cartan, c.weights).basis.empty())
    rep.records.push_back(guarded("residues", "invariants inject into coprimitives", [&] { return detail::coprimitives(c); }));
  return rep;
}

inline Report cmd_wzw(const RunConfig& c) {
  Report rep{"wzw", config_json(c), {}, json::object()};
  const auto cfg = c.level_config();
  if (!cfg) throw ConfigError("config.highest_root: required for this Cartan matrix");
  const auto fib = wzw_fiber(c.cartan, c.weights, *cfg);
  rep.data["invariants_dim"] = fib.invariants.size();
  rep.data["fiber_dim"] = fib.dim();
  if (fib.invariants.empty()) return rep;
  json inv = json::array();
  for (const auto& v : fib.invariants) inv.push_back(v.str());
  rep.data["invariants"] = inv;
  rep.data["kernel"] = matrix_json(fib.kernel);
  const auto crit = ramadas_subspace(c.cartan, c.weights, *cfg, fib.invariants);
  rep.data["criterion_subspace"] = matrix_json(crit);
  const auto pool = standard_pool(invariants(c.cartan, c.weights).degree);
  json tables = json::array();
  for (std::size_t b = 0; b < fib.invariants.size(); ++b) {
    json rows = json::array();
    for (const auto& row : ramadas_report(*cfg, pool, expand(fib.invariants[b], pool)).rows)
      rows.push_back({{"tuple", to_string(row.tuple)}, {"vanishes", row.vanishes}});
    tables.push_back({{"invariant", b + 1}, {"rows", rows}});
  }
  rep.data["criterion_tables"] = tables;
  rep.records.push_back(guarded("wzw", "level-l kernel equals the diagonal vanishing locus",
                                [&] { return detail::kernel_equals_criterion(c, *cfg); }));
  rep.records.push_back(guarded("wzw", "KZ connection at matched level preserves W",
                                [&] { return detail::fiber_flatness(c, *cfg); }));
  return rep;
}

inline Report run_command(const std::string& cmd, const RunConfig& c) {
  if (cmd == "verify") return cmd_verify(c);
  if (cmd == "rep") return cmd_rep(c);
  if (cmd == "kz") return cmd_kz(c);
  if (cmd == "gm") return cmd_gm(c);
  if (cmd == "compare") return cmd_compare(c);
  if (cmd == "residues") return cmd_residues(c);
  if (cmd == "wzw") return cmd_wzw(c);
  throw ConfigError("unknown command \"" + cmd + "\"");
}

}  // namespace pdiff::runner
