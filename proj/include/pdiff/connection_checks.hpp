#pragma once
// Checks tying the operator map Gamma to the Phi-operators and to the raising
// part of the Casimir element.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "pdiff/connection.hpp"
#include "pdiff/gamma.hpp"
#include "pdiff/identities.hpp"

namespace pdiff {

// Symbolic p_x and symmetric c_{x,y}.
inline PhiParams<Poly> symbolic_symmetric_params() {
  auto name = [](const ColoredIndex& x) { return std::to_string(x.color) + "." + std::to_string(x.ordinal); };
  PhiParams<Poly> prm;
  prm.p = [name](const ColoredIndex& x, int) { return pvar(var_param("p" + name(x))); };
  prm.c = [name](const ColoredIndex& x, const ColoredIndex& y) {
    const auto& a = x < y ? x : y;
    const auto& b = x < y ? y : x;
    return pvar(var_param("c" + name(a) + "_" + name(b)));
  };
  return prm;
}

// Test elements for the operator slot, on indices disjoint from `avoid`.
inline std::vector<PolyDiff<Poly>> operator_probes() {
  const ColoredIndex y1{0, 90}, y2{0, 91};
  return {PolyDiff<Poly>::unit(1), PolyDiff<Poly>::zeta1({y1}), PolyDiff<Poly>::zeta1({y1, y2}),
          PolyDiff<Poly>::zeta1({y2, y1})};
}

template <class C>
EvaluatedTensor<C> first_factor_map(const EvaluatedTensor<C>& t, const std::function<PolyDiff<C>(const Seq&)>& f) {
  EvaluatedTensor<C> out;
  for (const auto& [k, c] : t) {
    const PolyDiff<C> img = f(k.first);
    for (const auto& [jk, x] : img.terms()) {
      auto [it, inserted] = out.emplace(std::make_pair(jk[0], k.second), C(c * x));
      if (!inserted) {
        it->second += C(c * x);
        if (coeff_is_zero(it->second)) out.erase(it);
      }
    }
  }
  return out;
}

template <class C>
void accumulate(EvaluatedTensor<C>& into, const EvaluatedTensor<C>& t, const C& s) {
  for (const auto& [k, c] : t) {
    auto [it, inserted] = into.emplace(k, C(c * s));
    if (!inserted) {
      it->second += C(c * s);
      if (coeff_is_zero(it->second)) into.erase(it);
    }
  }
}

// Gamma(Phi_x zeta_I) = (Phi_x (x) 1 + 1 (x) ad Phi_x) Gamma(zeta_I) + (p_x - c_{x,I}) zeta_I (x) Phi_x.
inline Check check_gamma_phi(int pool_size = 4, int max_len = 3) {
  Check ch{"Gamma intertwines Phi"};
  const auto prm = symbolic_symmetric_params();
  auto pool = index_range(0, 1, pool_size);
  for (const auto& I : all_sequences(pool, 0, max_len)) {
    const auto zI = PolyDiff<Poly>::zeta1(I);
    const auto gI = gamma_map(zI);
    for (const auto& x : pool) {
      if (contains(I, x)) continue;
      const auto lhs_g = gamma_map(phi(x, prm, zI));
      Poly s = prm.p(x, 0);
      for (const auto& i : I) s -= prm.c(x, i);
      for (const auto& b : operator_probes()) {
        auto lhs = evaluate_gamma(lhs_g, prm, b);
        auto base = evaluate_gamma(gI, prm, b);
        EvaluatedTensor<Poly> rhs =
            first_factor_map<Poly>(base, [&](const Seq& J) { return phi(x, prm, PolyDiff<Poly>::zeta1(J)); });
        // 1 (x) ad Phi_x: Phi_x after the operator minus the operator after Phi_x.
        EvaluatedTensor<Poly> after;
        for (const auto& [jk, c] : gI)
          evaluated_add(after, jk.first, phi(x, prm, apply_operator(jk.second, prm, b)), c);
        accumulate(rhs, after, Poly(Q(1)));
        accumulate(rhs, evaluate_gamma(gI, prm, phi(x, prm, b)), Poly(Q(-1)));
        EvaluatedTensor<Poly> last;
        evaluated_add(last, I, phi(x, prm, b), s);
        accumulate(rhs, last, Poly(Q(1)));
        ++ch.cases;
        if (lhs != rhs) ch.fail("I=" + to_string(I) + " x=" + to_string(x));
      }
    }
  }
  return ch;
}

// [Phi_K] b = ad(Phi_{k_M}) ... ad(Phi_{k_2}) (Phi_{k_1}) b.
template <class C>
PolyDiff<C> phi_bracket(const Seq& K, const PhiParams<C>& prm, const PolyDiff<C>& b) {
  if (K.empty()) return PolyDiff<C>(b.n());
  if (K.size() == 1) return phi(K[0], prm, b);
  const Seq rest(K.begin() + 1, K.end());
  return phi(K[0], prm, phi_bracket(rest, prm, b)) - phi_bracket(rest, prm, phi(K[0], prm, b));
}

// Gamma(Phi_I(1)) = sum over nonempty K <= I of (p_{l(K)} - c_{l(K), I_{>l(K)}}) Phi_{I-K}(1) (x) [Phi_K].
inline Check check_gamma_corollary(int pool_size = 3, int max_len = 3) {
  Check ch{"Gamma on Phi-monomials"};
  const auto prm = symbolic_symmetric_params();
  auto pool = index_range(0, 1, pool_size);
  const auto one = PolyDiff<Poly>::unit(1);
  for (const auto& I : all_sequences(pool, 1, max_len)) {
    const auto g = gamma_map(phi_word(I, prm, one));
    const std::size_t N = I.size();
    for (const auto& b : operator_probes()) {
      auto lhs = evaluate_gamma(g, prm, b);
      EvaluatedTensor<Poly> rhs;
      for (std::size_t mask = 1; mask < (std::size_t(1) << N); ++mask) {
        Seq K, IK;
        std::size_t last = 0;
        for (std::size_t p = 0; p < N; ++p) {
          if (mask >> p & 1) {
            K.push_back(I[p]);
            last = p;
          } else {
            IK.push_back(I[p]);
          }
        }
        Poly coef = prm.p(I[last], 0);
        for (std::size_t p = last + 1; p < N; ++p) coef -= prm.c(I[last], I[p]);
        auto left = phi_word(IK, prm, one);
        auto right = phi_bracket(K, prm, b);
        for (const auto& [lk, lc] : left.terms()) evaluated_add(rhs, lk[0], right, Poly(coef * lc));
      }
      ++ch.cases;
      if (lhs != rhs) ch.fail("I=" + to_string(I));
    }
  }
  return ch;
}

// The raising part of the Casimir action read off from Gamma with the C-normalized
// Phi-operators of the second point, against the closed formula for C+, on f-monomials of
// degree <= max_deg in the first factor.
inline Check check_cplus_from_gamma(const CartanData& cd, const WeightData& wts, const CasimirSpec& spec,
                                    int max_deg = 2, int second_deg = 1) {
  Check ch{"C+ from Gamma"};
  if (wts.n() != 2) throw std::invalid_argument("C+ from Gamma: two marked points");
  Pairing pr(cd, wts, spec);
  CasimirAction cas(pr);
  PhiParams<Q> hat;
  hat.p = [&pr](const ColoredIndex& x, int) { return pr.lambda_alpha(1, x.color); };
  hat.c = [&pr](const ColoredIndex& x, const ColoredIndex& y) { return pr.alpha_alpha(x.color, y.color); };
  const WeightData w0 = single_slot(wts, 0), w1 = single_slot(wts, 1);
  std::vector<ColorSeqVec> seconds;
  for (const auto& sl : generated_submodule(cd, w1, std::vector<int>(std::size_t(cd.r), second_deg)))
    for (const auto& v : sl.basis) seconds.push_back(v);
  for (int len = 0; len <= max_deg; ++len) {
    std::vector<ColorSeq> words{{}};
    for (int l = 0; l < len; ++l) {
      std::vector<ColorSeq> next;
      for (const auto& w : words)
        for (int k = 0; k < cd.r; ++k) {
          auto x = w;
          x.push_back(k);
          next.push_back(x);
        }
      words = next;
    }
    for (const auto& S : words) {
      ColorSeqVec v = f_word(S, cd, w0, ColorSeqVec::unit(1));
      if (v.is_zero()) continue;
      for (const auto& w : seconds) {
        std::vector<int> m = seq_degree(S, cd.r);
        for (const auto& [k, c] : w.terms()) {
          auto d = seq_degree(k[0], cd.r);
          for (int j = 0; j < cd.r; ++j) m[std::size_t(j)] += d[std::size_t(j)];
          break;
        }
        const auto pool = standard_pool(m);
        PolyDiff<Q> sv = expand(cas.cplus(0, 1, tensor_vectors({v, w})), pool);
        PolyDiff<Q> gm(2);
        const PolyDiff<Q> ev = expand(v, pool);
        for (const auto& [Ik, c] : ev.terms()) {
          const Seq& I = Ik[0];
          auto rest = pool;
          for (auto& col : rest)
            col.erase(std::remove_if(col.begin(), col.end(), [&](const ColoredIndex& x) { return contains(I, x); }),
                      col.end());
          const PolyDiff<Q> b = expand(w, rest);
          for (const auto& [jk, g] : gamma_map<Q>(I, c)) {
            const PolyDiff<Q> img = apply_operator(jk.second, hat, b);
            for (const auto& [kk, x] : img.terms())
              gm.add(MultiSeq{jk.first, kk[0]}, g * x);
          }
        }
        ++ch.cases;
        if (!(sv == gm)) ch.fail("S=" + to_string(ColorKey{S}) + " second=" + w.str());
      }
    }
  }
  return ch;
}

}  // namespace pdiff
