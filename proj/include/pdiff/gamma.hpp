#pragma once
// The operator-valued map Gamma: B -> B (x) End(B), zeta_I -> sum over I = L i K J of
// (-1)^|K| zeta_J (x) omega_{Li} omega_{K* i} Phi_i.

#include <map>
#include <tuple>
#include <vector>

#include "pdiff/polydiff.hpp"

namespace pdiff {

// "Multiply by the omega-words, after applying Phi_phi."  An empty word list means Phi alone.
struct OperatorExpr {
  std::vector<Seq> omegas;
  ColoredIndex phi;

  friend bool operator<(const OperatorExpr& a, const OperatorExpr& b) {
    return std::tie(a.omegas, a.phi) < std::tie(b.omegas, b.phi);
  }
  friend bool operator==(const OperatorExpr& a, const OperatorExpr& b) {
    return a.omegas == b.omegas && a.phi == b.phi;
  }
};

template <class C>
PolyDiff<C> apply_operator(const OperatorExpr& op, const PhiParams<C>& prm, const PolyDiff<C>& b) {
  PolyDiff<C> out = phi(op.phi, prm, b);
  for (const auto& w : op.omegas)
    if (w.size() > 1) out = omega_times(w, out);  // omega of a single index is 1
  return out;
}

// Formal sum of zeta_J (x) operator.
template <class C>
using GammaValue = std::map<std::pair<Seq, OperatorExpr>, C>;

template <class C>
void gamma_add(GammaValue<C>& g, const Seq& J, const OperatorExpr& op, const C& c) {
  if (coeff_is_zero(c)) return;
  auto [it, inserted] = g.emplace(std::make_pair(J, op), c);
  if (!inserted) {
    it->second += c;
    if (coeff_is_zero(it->second)) g.erase(it);
  }
}

template <class C>
GammaValue<C> gamma_map(const Seq& I, const C& scale = C(1)) {
  GammaValue<C> out;
  // I = L i K J, head first.
  for (std::size_t p = 0; p < I.size(); ++p) {
    const ColoredIndex i = I[p];
    Seq Li(I.begin(), I.begin() + long(p) + 1);
    for (std::size_t e = p + 1; e <= I.size(); ++e) {
      const Seq K(I.begin() + long(p) + 1, I.begin() + long(e));
      const Seq J(I.begin() + long(e), I.end());
      Seq Ksi(K.rbegin(), K.rend());
      Ksi.push_back(i);
      OperatorExpr op{{Li, Ksi}, i};
      gamma_add(out, J, op, C(scale * C(K.size() % 2 ? -1 : 1)));
    }
  }
  return out;
}

template <class C>
GammaValue<C> gamma_map(const PolyDiff<C>& a) {
  if (a.n() != 1) throw std::invalid_argument("gamma: single marked point only");
  GammaValue<C> out;
  for (const auto& [k, c] : a.terms())
    for (const auto& [jk, v] : gamma_map<C>(k[0], c)) gamma_add(out, jk.first, jk.second, v);
  return out;
}

// Pairs (first factor, operator applied to b) accumulated without any support rule,
// the two factors being independent.
template <class C>
using EvaluatedTensor = std::map<std::pair<Seq, MultiSeq>, C>;

template <class C>
void evaluated_add(EvaluatedTensor<C>& t, const Seq& J, const PolyDiff<C>& v, const C& c) {
  for (const auto& [k, x] : v.terms()) {
    C y = C(c * x);
    if (coeff_is_zero(y)) continue;
    auto [it, inserted] = t.emplace(std::make_pair(J, k), y);
    if (!inserted) {
      it->second += y;
      if (coeff_is_zero(it->second)) t.erase(it);
    }
  }
}

template <class C>
EvaluatedTensor<C> evaluate_gamma(const GammaValue<C>& g, const PhiParams<C>& prm, const PolyDiff<C>& b) {
  EvaluatedTensor<C> out;
  for (const auto& [jk, c] : g) evaluated_add(out, jk.first, apply_operator(jk.second, prm, b), c);
  return out;
}

}  // namespace pdiff
