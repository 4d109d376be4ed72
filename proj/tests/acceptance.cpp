// Acceptance run: one pass/fail line per criterion, each with a wall-clock budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracle_reps.hpp"
#include "pdiff/connection_checks.hpp"
#include "pdiff/diagonal.hpp"
#include "pdiff/identities.hpp"
#include "pdiff/invariance.hpp"
#include "pdiff/residues.hpp"
#include "pdiff/wzw.hpp"

using namespace pdiff;

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<std::vector<Check>()> run;
};

WeightData sl2w(std::vector<int> ls) {
  WeightData w;
  for (int l : ls) w.lambda.push_back({l});
  return w;
}

// sl(2) weight tuples with 2..4 entries, nondecreasing, total <= 6 (even total if `even`).
std::vector<std::vector<int>> sl2_configurations(bool even) {
  std::vector<std::vector<int>> out;
  std::function<void(std::vector<int>, int)> rec = [&](std::vector<int> cur, int sum) {
    if (cur.size() >= 2 && (!even || sum % 2 == 0)) out.push_back(cur);
    if (cur.size() == 4) return;
    for (int l = cur.empty() ? 1 : cur.back(); sum + l <= 6; ++l) {
      auto nx = cur;
      nx.push_back(l);
      rec(nx, sum + l);
    }
  };
  rec({}, 0);
  return out;
}

std::string str(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

oracle::MatRep sl3_rep(const std::vector<int>& w) {
  if (w == std::vector<int>{1, 0}) return oracle::sl3_defining();
  if (w == std::vector<int>{0, 1}) return oracle::dual(oracle::sl3_defining());
  return oracle::sl3_adjoint();
}

std::vector<Check> shuffle_laws() { return {check_bialgebra(6, 4), check_product_realization(5, 4)}; }

std::vector<Check> residue_rules() {
  const auto sl3 = CartanData::sl3();
  return {check_residue_rules(4, 4), check_iterated_residue_realization(4, 4), check_flag_residue(4, 4, 4),
          check_iterated_bracket_on_module(CartanData::sl2(), sl2w({2, 1}), {3}),
          check_iterated_bracket_on_module(sl3, WeightData{{{1, 0}, {1, 1}}}, {2, 2})};
}

std::vector<Check> mixed_shuffles() { return {check_mixed_shuffle(3, 20), check_mixed_shuffle2(3, 20)}; }

std::vector<Check> phi_identities() {
  return {check_sum_product(5, 20), check_power(4), check_bracket_identity(4), check_serre_type(4)};
}

std::vector<Check> representations() {
  const auto sl2 = CartanData::sl2();
  const auto sl3 = CartanData::sl3();
  Check dims{"irreducible dimensions"};
  for (int lam = 0; lam <= 4; ++lam) {
    ++dims.cases;
    const auto v = generated_submodule(sl2, sl2w({lam}), {lam + 3});
    if (total_dimension(v) != std::size_t(lam + 1) || oracle::sl2_irrep(lam).dim != std::size_t(lam + 1))
      dims.fail("sl2 lambda=" + std::to_string(lam));
  }
  for (const auto& [w, d] : {std::pair{std::vector<int>{1, 0}, 3u}, std::pair{std::vector<int>{1, 1}, 8u}}) {
    ++dims.cases;
    if (total_dimension(generated_submodule(sl3, WeightData{{w}}, {3, 3})) != d || sl3_rep(w).dim != d)
      dims.fail("sl3 " + str(w));
  }

  Check inv{"invariant dimensions against matrix oracles"};
  for (const auto& ls : sl2_configurations(false)) {
    std::vector<oracle::MatRep> parts;
    for (int l : ls) parts.push_back(oracle::sl2_irrep(l));
    const auto got = invariants(sl2, sl2w(ls));
    const auto rep = oracle::tensor_all(parts);
    ++inv.cases;
    if (got.basis.size() != oracle::invariant_dim(rep) || got.weight_zero.size() != oracle::weight_zero_dim(rep))
      inv.fail("sl2 " + str(ls));
  }
  for (const auto& cfg : std::vector<std::vector<std::vector<int>>>{{{1, 0}, {0, 1}},
                                                                     {{1, 0}, {1, 0}, {1, 0}},
                                                                     {{1, 1}, {1, 1}},
                                                                     {{1, 0}, {0, 1}, {1, 1}},
                                                                     {{1, 0}, {0, 1}, {1, 0}, {0, 1}}}) {
    std::vector<oracle::MatRep> parts;
    for (const auto& l : cfg) parts.push_back(sl3_rep(l));
    ++inv.cases;
    if (invariants(sl3, WeightData{cfg}).basis.size() != oracle::invariant_dim(oracle::tensor_all(parts)))
      inv.fail("sl3 configuration with " + std::to_string(cfg.size()) + " factors");
  }

  Check ef{"[e_k, f_k] equals the coroot action"};
  for (const auto& [cd, w] : {std::pair{sl3, WeightData{{{2, 1}, {0, 3}}}}, std::pair{sl2, sl2w({3, 1})}}) {
    for (const auto& deg : degrees_up_to(std::vector<int>(std::size_t(cd.r), 2)))
      for (const auto& key : enumerate_keys(w.n(), deg)) {
        const auto v = ColorSeqVec::basis(key);
        for (int k = 0; k < cd.r; ++k) {
          ++ef.cases;
          if (e_action(k, f_action(k, cd, w, v)) - f_action(k, cd, w, e_action(k, v)) != cartan_action(k, cd, w, v))
            ef.fail(to_string(key));
        }
      }
  }

  // The sl(2) lowering coefficient on zeta(1^N) is (N+1)(lambda-N). A value
  // of (lambda-2N) would disagree for every N >= 1 and lambda > 0.
  Check fcoef{"sl2 lowering coefficient (N+1)(lambda-N)"};
  for (int lam = 0; lam <= 6; ++lam)
    for (int N = 0; N <= 5; ++N) {
      ++fcoef.cases;
      const auto img = f_action(0, sl2, sl2w({lam}), ColorSeqVec::basis({ColorSeq(std::size_t(N), 0)}));
      if (img != ColorSeqVec::basis({ColorSeq(std::size_t(N + 1), 0)}) * Q((N + 1) * (lam - N)))
        fcoef.fail("lambda=" + std::to_string(lam) + " N=" + std::to_string(N));
    }
  return {dims, inv, ef, fcoef};
}

std::vector<Check> boundary_residue_table() {
  std::vector<Check> out;
  const std::vector<std::pair<CartanData, WeightData>> cases = {
      {CartanData::sl2(), sl2w({1, 1})},
      {CartanData::sl2(), sl2w({1, 1, 1, 1})},
      {CartanData::sl2(), sl2w({1, 1, 2})},
      {CartanData::sl2(), sl2w({2, 2, 2, 2})},
      {CartanData::sl2(), sl2w({3, 1, 2})},
      {CartanData::sl3(), WeightData{{{1, 0}, {0, 1}}}},
      {CartanData::sl3(), WeightData{{{1, 1}, {1, 1}}}},
      {CartanData::sl3(), WeightData{{{1, 0}, {1, 0}, {1, 0}}}},
  };
  const int level = 1;
  for (const auto& [cd, w] : cases)
    for (const Q q : {Q(1), make_q(1, 2 + level)}) out.push_back(check_boundary_residues(cd, w, CasimirSpec::uniform(cd.r, q)));
  return out;
}

std::vector<Check> gm_equals_kz() {
  Check eq{"Gauss-Manin equals KZ on invariants"};
  Check flat{"KZ infinitesimal braid relations"};
  const std::vector<std::pair<CartanData, WeightData>> cases = {{CartanData::sl2(), sl2w({1, 1, 2})},
                                                                {CartanData::sl2(), sl2w({1, 1, 1, 1})},
                                                                {CartanData::sl3(), WeightData{{{1, 0}, {0, 1}}}}};
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& [cd, w] = cases[c];
    for (const Q q : {Q(1), make_q(1, 3)}) {
      Pairing pr(cd, w, CasimirSpec::uniform(cd.r, q));
      CasimirAction cas(pr);
      const auto inv = invariants(cd, w);
      const auto kz = kz_matrices(cas, inv.basis);
      const auto gm = gm_matrices(pr, inv.basis, inv.degree);
      for (const auto& [p, M] : kz.omega) {
        ++eq.cases;
        if (!(gm.omega.at(p) == M)) eq.fail("case " + std::to_string(c + 1) + " pair " + std::to_string(p.first + 1) +
                                            std::to_string(p.second + 1) + " q=" + q.get_str());
      }
      if (c == 1) {
        const auto rep = flatness_check(kz, w.n());
        flat.cases += rep.relations;
        if (!rep.flat || rep.relations == 0) flat.fail("q=" + q.get_str());
      }
    }
  }
  return {eq, flat};
}

std::vector<Check> appendix() {
  std::vector<Check> out = {check_gamma_phi(4, 3), check_gamma_corollary(3, 3)};
  for (const auto& [cd, w, spec] :
       {std::tuple{CartanData::sl2(), sl2w({2, 1}), CasimirSpec::uniform(1, make_q(3, 2))},
        std::tuple{CartanData::sl3(), WeightData{{{1, 1}, {1, 0}}}, CasimirSpec::uniform(2, Q(2))}})
    out.push_back(check_cplus_from_gamma(cd, w, spec, 2, 1));
  Check comm{"full Casimir commutes with the diagonal action"};
  for (const auto& [cd, w] : {std::pair{CartanData::sl2(), sl2w({2, 1})}, std::pair{CartanData::sl2(), sl2w({1, 3})},
                              std::pair{CartanData::sl3(), WeightData{{{1, 0}, {0, 1}}}},
                              std::pair{CartanData::sl3(), WeightData{{{1, 1}, {1, 0}}}}}) {
    CasimirAction cas(Pairing(cd, w, CasimirSpec::uniform(cd.r, Q(1))));
    for (const auto& sl : tensor_module(cd, w, std::vector<int>(std::size_t(cd.r), 3)).slices)
      for (const auto& v : sl.basis)
        for (int k = 0; k < cd.r; ++k) {
          ++comm.cases;
          auto C = [&](const ColorSeqVec& x) { return cas.apply(0, 1, x); };
          if (C(e_action(k, v)) != e_action(k, C(v)) || C(f_action(k, cd, w, v)) != f_action(k, cd, w, C(v)) ||
              C(cartan_action(k, cd, w, v)) != cartan_action(k, cd, w, C(v)))
            comm.fail(v.str());
        }
  }
  out.push_back(comm);
  return out;
}

std::vector<Check> wzw_suite() {
  const auto sl2 = CartanData::sl2();
  Check eq{"level-l kernel equals the diagonal vanishing locus"};
  for (const auto& ls : sl2_configurations(true))
    for (int level : {1, 2}) {
      const auto w = sl2w(ls);
      const auto cfg = LevelConfig::standard(sl2, level, LevelConfig::default_points(w.n()));
      const auto fib = wzw_fiber(sl2, w, cfg);
      ++eq.cases;
      if (!same_span(fib.kernel, ramadas_subspace(sl2, w, cfg, fib.invariants)))
        eq.fail(str(ls) + " level " + std::to_string(level));
    }

  Check ex{"four doublets at level 1"};
  ++ex.cases;
  const auto fib = wzw_fiber(sl2, sl2w({1, 1, 1, 1}), LevelConfig::standard(sl2, 1, LevelConfig::default_points(4)));
  if (fib.dim() != 1 || fib.invariants.size() != 2)
    ex.fail("dim W " + std::to_string(fib.dim()) + " inside " + std::to_string(fib.invariants.size()));

  Check routes{"two routes to the highest-root operator"};
  for (const auto& [cd, w, bound] :
       {std::tuple{sl2, sl2w({1, 1, 2}), std::vector<int>{3}},
        std::tuple{CartanData::sl3(), WeightData{{{1, 0}, {0, 1}, {1, 1}}}, std::vector<int>{2, 2}}}) {
    const auto cfg = LevelConfig::standard(cd, 1, LevelConfig::default_points(w.n()));
    for (const auto& sl : tensor_module(cd, w, bound).slices) {
      const auto pool = standard_pool(sl.degree);
      const auto seqs = highest_root_sequences(cfg, pool);
      for (const auto& v : sl.basis)
        for (const auto& I : seqs) {
          ++routes.cases;
          if (!e_operator_routes(I, expand(v, pool)).agree) routes.fail("I=" + to_string(I) + " on " + v.str());
        }
    }
  }
  return {eq, ex, routes};
}

std::vector<Check> moebius() {
  std::vector<Check> out;
  for (const auto& vs : {realized_primitives(CartanData::sl2(), sl2w({1, 1, 1, 1}), {2}),
                         realized_primitives(CartanData::sl2(), sl2w({1, 1, 2}), {2}),
                         realized_primitives(CartanData::sl3(), WeightData{{{1, 0}, {0, 1}}}, {1, 1})}) {
    Check c = check_moebius_invariance(vs, 5);
    if (vs.empty()) c.fail("no primitive vectors realized");
    out.push_back(c);
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "shuffle bialgebra laws", 10, shuffle_laws},
      {2, "residue rules, flag residues, iterated brackets", 30, residue_rules},
      {3, "mixed shuffle identities", 30, mixed_shuffles},
      {4, "sum-product, powers, bracket and Serre-type identities", 60, phi_identities},
      {5, "representation suite", 60, representations},
      {6, "boundary residues of eta", 10, boundary_residue_table},
      {7, "Gauss-Manin equals KZ, KZ flatness", 300, gm_equals_kz},
      {8, "Gamma identities, raising part, Casimir invariance", 120, appendix},
      {9, "WZW level subspace", 120, wzw_suite},
      {10, "Moebius invariance of primitives", 60, moebius},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Check> checks;
    std::string why;
    try {
      checks = c.run();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    long cases = 0;
    for (const auto& ch : checks) {
      cases += ch.cases;
      if (!ch.pass && why.empty()) why = ch.name + ": " + ch.detail;
      if (ch.cases == 0 && why.empty()) why = ch.name + ": no cases";
    }
    if (why.empty() && secs > c.budget_seconds) why = "over budget of " + std::to_string(int(c.budget_seconds)) + " s";
    const bool ok = why.empty();
    if (!ok) ++failed;
    std::printf("[%s] %2d %-56s %8.2f s %7ld cases%s%s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs, cases,
                ok ? "" : "  ", why.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
