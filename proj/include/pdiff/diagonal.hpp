#pragma once
// Diagonal residues of elements of V(lambda): the iterated e-bracket, the root
// condition on nonvanishing iterated residues, and pole control for primitives.

#include <set>
#include <string>
#include <vector>

#include "pdiff/identities.hpp"
#include "pdiff/invariance.hpp"
#include "pdiff/wzw.hpp"

namespace pdiff {

// Positive roots of height <= max_height, as coordinates on the simple roots,
// obtained by closing the simple roots under simple reflections.
inline std::set<std::vector<int>> positive_roots(const CartanData& cd, int max_height = 12) {
  std::set<std::vector<int>> roots;
  std::vector<std::vector<int>> todo;
  for (int k = 0; k < cd.r; ++k) {
    std::vector<int> a(std::size_t(cd.r), 0);
    a[std::size_t(k)] = 1;
    todo.push_back(a);
  }
  while (!todo.empty()) {
    auto b = todo.back();
    todo.pop_back();
    int h = 0;
    for (int x : b) h += x;
    if (h < 1 || h > max_height || !roots.insert(b).second) continue;
    for (int k = 0; k < cd.r; ++k) {
      int pairing = 0;
      for (int l = 0; l < cd.r; ++l) pairing += b[std::size_t(l)] * cd(k, l);
      auto s = b;
      s[std::size_t(k)] -= pairing;
      if (std::all_of(s.begin(), s.end(), [](int x) { return x >= 0; })) todo.push_back(s);
    }
  }
  return roots;
}

inline ColorPool without_indices(ColorPool pool, const Seq& I) {
  for (auto& col : pool)
    col.erase(std::remove_if(col.begin(), col.end(), [&](const ColoredIndex& x) { return contains(I, x); }),
              col.end());
  return pool;
}

inline std::vector<int> color_content(const Seq& I, int r) {
  std::vector<int> d(std::size_t(r), 0);
  for (const auto& x : I) ++d.at(std::size_t(x.color));
  return d;
}

// [[e_{w0}, e_{w1}], ..., e_{w_last}] with the diagonal action.
inline ColorSeqVec e_bracket(const ColorSeq& word, const ColorSeqVec& v) {
  std::function<ColorSeqVec(std::size_t, const ColorSeqVec&)> apply = [&](std::size_t upto, const ColorSeqVec& u) {
    if (upto == 0) return e_action(word[0], u);
    ColorSeqVec a = apply(upto - 1, e_action(word[upto], u));
    a -= e_action(word[upto], apply(upto - 1, u));
    return a;
  };
  return apply(word.size() - 1, v);
}

// Repetition-free sequences of length 1..max_len drawn from the flattened pool.
inline std::vector<Seq> repetition_free_sequences(const ColorPool& pool, std::size_t max_len) {
  const auto flat = flatten(pool);
  std::vector<Seq> out;
  std::function<void(Seq&)> rec = [&](Seq& cur) {
    if (!cur.empty()) out.push_back(cur);
    if (cur.size() == max_len) return;
    for (const auto& x : flat) {
      if (contains(cur, x)) continue;
      cur.push_back(x);
      rec(cur);
      cur.pop_back();
    }
  };
  Seq cur;
  rec(cur);
  return out;
}

// Random combinations of the module basis in every nonzero multi-degree up to `bound`.
inline std::vector<ColorSeqVec> random_module_elements(const CartanData& cd, const WeightData& wts,
                                                       const std::vector<int>& bound, Rng& rng) {
  std::vector<ColorSeqVec> out;
  for (const auto& sl : tensor_module(cd, wts, bound).slices) {
    if (sl.basis.empty()) continue;
    ColorSeqVec v(wts.n());
    for (const auto& b : sl.basis) v += b * Q(rng.uniform(-5, 5));
    if (!v.is_zero()) out.push_back(v);
  }
  return out;
}

inline std::vector<int> vec_degree(const ColorSeqVec& v, int r) {
  for (const auto& [k, c] : v.terms()) return key_degree(k, r);
  return std::vector<int>(std::size_t(r), 0);
}

// The e-bracket over the colors of I against E_{last of I} res_I, with the
// sign (-1)^(|I|-1) of the reversed bracket.
inline Check check_iterated_bracket_on_module(const CartanData& cd, const WeightData& wts,
                                              const std::vector<int>& bound, std::size_t max_len = 3,
                                              std::uint64_t seed = 5) {
  Check ch{"iterated e-bracket against residue at infinity"};
  Rng rng(seed);
  for (const auto& v : random_module_elements(cd, wts, bound, rng)) {
    const auto pool = standard_pool(vec_degree(v, cd.r));
    const auto a = expand(v, pool);
    for (const auto& I : repetition_free_sequences(pool, max_len)) {
      ++ch.cases;
      const auto rhs = residue_at_infinity(I.back(), residue_along(I, a)) * residue_bracket_sign(I.size());
      const auto lhs = expand(e_bracket(colors_of(I), v), without_indices(pool, I));
      if (!(lhs == rhs)) ch.fail("I=" + to_string(I) + " on " + v.str());
    }
  }
  return ch;
}

// res_I of a module element vanishes unless every initial part of I has a root as color content.
inline Check check_root_support(const CartanData& cd, const WeightData& wts, const std::vector<int>& bound,
                                std::size_t max_len = 3, std::uint64_t seed = 9) {
  Check ch{"nonzero iterated residues sit on roots"};
  const auto roots = positive_roots(cd);
  Rng rng(seed);
  for (const auto& v : random_module_elements(cd, wts, bound, rng)) {
    const auto pool = standard_pool(vec_degree(v, cd.r));
    const auto a = expand(v, pool);
    for (const auto& I : repetition_free_sequences(pool, max_len)) {
      if (I.size() < 2) continue;
      bool all_roots = true;
      for (std::size_t k = 1; k <= I.size(); ++k)
        all_roots = all_roots && roots.count(color_content(Seq(I.begin(), I.begin() + long(k)), cd.r));
      if (all_roots) continue;
      ++ch.cases;
      if (!iterated_residue(I, a).is_zero()) ch.fail("I=" + to_string(I) + " on " + v.str());
    }
  }
  return ch;
}

// For primitive vectors and I spelling the highest root, res_I has poles in
// t_I only at the marked points, and none at infinity.
inline Check check_primitive_pole_control(const CartanData& cd, const WeightData& wts, const LevelConfig& cfg,
                                          const std::vector<int>& bound) {
  Check ch{"poles of highest-root residues of primitives"};
  const TensorModule tm = tensor_module(cd, wts, bound);
  for (const auto& sl : tm.slices) {
    const auto pool = standard_pool(sl.degree);
    const auto seqs = highest_root_sequences(cfg, pool);
    if (seqs.empty()) continue;
    for (const auto& p : primitive_subspace(cd.r, sl.basis)) {
      const ConcretePolyDiff form = realize(expand(p, pool));
      for (const auto& I : seqs) {
        const ColoredIndex y = I.back();
        const ConcretePolyDiff res = concrete_iterated_residue(I, form);
        ++ch.cases;
        for (const auto& [X, f] : res.terms()) {
          const Var t = var_t(y);
          for (const auto& pt : finite_poles(f.reduced(), t)) {
            bool marked = false;
            for (int nu = 0; nu < wts.n(); ++nu) marked = marked || pt == z_of(nu);
            if (!marked) ch.fail("I=" + to_string(I) + " pole at t=" + pt.str() + " on " + p.str());
          }
        }
        if (!identity_test(concrete_residue_at_infinity(res, y), ConcretePolyDiff()).equal)
          ch.fail("I=" + to_string(I) + " residue at infinity on " + p.str());
      }
    }
  }
  return ch;
}

}  // namespace pdiff
