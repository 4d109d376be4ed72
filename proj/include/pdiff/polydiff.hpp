#pragma once
// The formal shuffle algebra of logarithmic polydifferentials.
//
// A PolyDiff is a finite linear combination of basis elements zeta_I, one
// sequence per marked point.  Everything here is combinatorial; the rational
// model in ratfunc.hpp/concrete.hpp serves as the independent oracle.

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdiff/index.hpp"
#include "pdiff/poly.hpp"
#include "pdiff/rational.hpp"

namespace pdiff {

template <class C>
class PolyDiff {
 public:
  using Coeff = C;

  explicit PolyDiff(int n = 1) : n_(n) {
    if (n < 1) throw std::invalid_argument("PolyDiff needs at least one marked point");
  }

  static PolyDiff unit(int n = 1) {
    PolyDiff p(n);
    p.add(MultiSeq(n), C(1));
    return p;
  }

  static PolyDiff zeta(const MultiSeq& key, const C& coef = C(1)) {
    PolyDiff p(int(key.size()));
    p.add(key, coef);
    return p;
  }

  // Single marked point convenience.
  static PolyDiff zeta1(const Seq& s, const C& coef = C(1)) { return zeta(MultiSeq{s}, coef); }

  int n() const { return n_; }
  const std::map<MultiSeq, C>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  C coeff(const MultiSeq& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? C(0) : it->second;
  }

  void add(const MultiSeq& key, const C& coef) {
    if (int(key.size()) != n_) throw std::invalid_argument("key arity differs from PolyDiff arity");
    if (coeff_is_zero(coef) || has_repeat(key)) return;
    auto [it, inserted] = terms_.emplace(key, coef);
    if (!inserted) {
      it->second += coef;
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  PolyDiff& operator+=(const PolyDiff& o) {
    check_arity(o);
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  PolyDiff& operator-=(const PolyDiff& o) {
    check_arity(o);
    for (const auto& [k, c] : o.terms_) add(k, C(-c));
    return *this;
  }
  PolyDiff& operator*=(const C& s) {
    if (coeff_is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& kv : terms_) kv.second = C(kv.second * s);
    return *this;
  }
  friend PolyDiff operator+(PolyDiff a, const PolyDiff& b) { return a += b; }
  friend PolyDiff operator-(PolyDiff a, const PolyDiff& b) { return a -= b; }
  friend PolyDiff operator-(PolyDiff a) { return a *= C(-1); }
  friend PolyDiff operator*(PolyDiff a, const C& s) { return a *= s; }
  friend PolyDiff operator*(const C& s, PolyDiff a) { return a *= s; }
  friend bool operator==(const PolyDiff& a, const PolyDiff& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  // Terms ordered by total degree, then key.
  std::vector<std::pair<MultiSeq, C>> canonical_terms() const {
    std::vector<std::pair<MultiSeq, C>> out(terms_.begin(), terms_.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      auto la = total_length(a.first), lb = total_length(b.first);
      if (la != lb) return la < lb;
      return a.first < b.first;
    });
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : canonical_terms()) {
      if (!first) out += " + ";
      first = false;
      out += "(" + coeff_str(c) + ")*z" + to_string(k);
    }
    return out;
  }

 private:
  void check_arity(const PolyDiff& o) const {
    if (o.n_ != n_) throw std::invalid_argument("PolyDiff arity mismatch");
  }

  int n_;
  std::map<MultiSeq, C> terms_;
};

// Both tensor factors live on the same configuration space, so a pair whose
// supports overlap carries dt_x twice and vanishes.  With this convention the
// deconcatenation coproduct is multiplicative for all pairs of elements.
template <class C>
using PolyDiffTensor = std::map<std::pair<MultiSeq, MultiSeq>, C>;

template <class C>
void tensor_add(PolyDiffTensor<C>& t, const MultiSeq& a, const MultiSeq& b, const C& c) {
  if (coeff_is_zero(c) || has_repeat(a) || has_repeat(b)) return;
  if (!disjoint(support_of(a), support_of(b))) return;
  auto [it, inserted] = t.emplace(std::make_pair(a, b), c);
  if (!inserted) {
    it->second += c;
    if (coeff_is_zero(it->second)) t.erase(it);
  }
}

// ---------------------------------------------------------------------------
// Products.

namespace detail {
// Cartesian product over slots of per-slot candidate lists.
inline void slot_product(const std::vector<std::vector<Seq>>& per_slot,
                         const std::function<void(const MultiSeq&)>& emit) {
  MultiSeq cur(per_slot.size());
  auto rec = [&](auto&& self, std::size_t s) -> void {
    if (s == per_slot.size()) {
      emit(cur);
      return;
    }
    for (const auto& q : per_slot[s]) {
      cur[s] = q;
      self(self, s + 1);
    }
  };
  rec(rec, 0);
}
}  // namespace detail

inline void shuffle_keys(const MultiSeq& a, const MultiSeq& b,
                         const std::function<void(const MultiSeq&)>& emit) {
  std::vector<std::vector<Seq>> per_slot(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) per_slot[s] = shuffles(a[s], b[s]);
  detail::slot_product(per_slot, emit);
}

template <class C>
PolyDiff<C> shuffle_product(const PolyDiff<C>& a, const PolyDiff<C>& b) {
  if (a.n() != b.n()) throw std::invalid_argument("shuffle_product: arity mismatch");
  PolyDiff<C> out(a.n());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      if (!disjoint(support_of(ka), support_of(kb))) continue;
      C c = C(ca * cb);
      shuffle_keys(ka, kb, [&](const MultiSeq& k) { out.add(k, c); });
    }
  }
  return out;
}

template <class C>
PolyDiffTensor<C> coproduct(const PolyDiff<C>& a) {
  PolyDiffTensor<C> out;
  for (const auto& [key, c] : a.terms()) {
    const std::size_t n = key.size();
    MultiSeq left(n), right(n);
    auto rec = [&](auto&& self, std::size_t s) -> void {
      if (s == n) {
        tensor_add(out, left, right, c);
        return;
      }
      const Seq& q = key[s];
      for (std::size_t cut = 0; cut <= q.size(); ++cut) {
        left[s] = Seq(q.begin(), q.begin() + cut);
        right[s] = Seq(q.begin() + cut, q.end());
        self(self, s + 1);
      }
    };
    rec(rec, 0);
  }
  return out;
}

// Product in the tensor square, factorwise shuffle.
template <class C>
PolyDiffTensor<C> tensor_product(const PolyDiffTensor<C>& x, const PolyDiffTensor<C>& y) {
  PolyDiffTensor<C> out;
  for (const auto& [kx, cx] : x) {
    for (const auto& [ky, cy] : y) {
      std::vector<MultiSeq> lefts, rights;
      shuffle_keys(kx.first, ky.first, [&](const MultiSeq& k) { lefts.push_back(k); });
      shuffle_keys(kx.second, ky.second, [&](const MultiSeq& k) { rights.push_back(k); });
      C c = C(cx * cy);
      for (const auto& l : lefts)
        for (const auto& r : rights) tensor_add(out, l, r, c);
    }
  }
  return out;
}

// omega_{Ik} * b where word = Ik ends with k.  The factor only involves the
// variables of the word, so it acts in whichever slot holds k.
template <class C>
PolyDiff<C> omega_times(const Seq& word, const PolyDiff<C>& b) {
  if (word.empty()) throw std::invalid_argument("omega_times: the empty omega-word is zero by convention");
  if (has_repeat(word)) return PolyDiff<C>(b.n());
  const ColoredIndex k = word.back();
  const Seq head(word.begin(), word.end() - 1);
  PolyDiff<C> out(b.n());
  for (const auto& [key, c] : b.terms()) {
    for (std::size_t s = 0; s < key.size(); ++s) {
      const Seq& J = key[s];
      auto pos = std::find(J.begin(), J.end(), k);
      if (pos == J.end()) continue;
      const Seq before(J.begin(), pos);
      const Seq after(pos, J.end());
      for (const auto& K : shuffles(head, before)) {
        MultiSeq nk = key;
        nk[s] = concat(K, after);
        out.add(nk, c);
      }
    }
  }
  return out;
}

template <class C>
PolyDiff<C> component(const PolyDiff<C>& a, const Support& X) {
  Support sx = X;
  std::sort(sx.begin(), sx.end());
  PolyDiff<C> out(a.n());
  for (const auto& [k, c] : a.terms())
    if (support_of(k) == sx) out.add(k, c);
  return out;
}

// E_x = -res at t_x = infinity: strips a leading x in any slot.
template <class C>
PolyDiff<C> residue_at_infinity(const ColoredIndex& x, const PolyDiff<C>& a) {
  PolyDiff<C> out(a.n());
  for (const auto& [k, c] : a.terms()) {
    for (std::size_t s = 0; s < k.size(); ++s) {
      if (!k[s].empty() && k[s].front() == x) {
        MultiSeq nk = k;
        nk[s].erase(nk[s].begin());
        out.add(nk, c);
      }
    }
  }
  return out;
}

// E'_x = res at t_x = z_slot: strips x from the tail of that slot.
template <class C>
PolyDiff<C> residue_at_marked(const ColoredIndex& x, int slot, const PolyDiff<C>& a) {
  if (slot < 0 || slot >= a.n()) throw std::out_of_range("residue_at_marked: slot");
  PolyDiff<C> out(a.n());
  for (const auto& [k, c] : a.terms()) {
    if (!k[slot].empty() && k[slot].back() == x) {
      MultiSeq nk = k;
      nk[slot].pop_back();
      out.add(nk, c);
    }
  }
  return out;
}

// res_{t_x -> t_y}; the surviving coordinate keeps the label y.
template <class C>
PolyDiff<C> residue_diag(const ColoredIndex& x, const ColoredIndex& y, const PolyDiff<C>& a) {
  if (x == y) throw std::invalid_argument("residue_diag: x and y must differ");
  PolyDiff<C> out(a.n());
  for (const auto& [k, c] : a.terms()) {
    for (std::size_t s = 0; s < k.size(); ++s) {
      const Seq& q = k[s];
      for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        if (q[i] == x && q[i + 1] == y) {
          MultiSeq nk = k;
          nk[s].erase(nk[s].begin() + long(i));
          out.add(nk, c);
        } else if (q[i] == y && q[i + 1] == x) {
          MultiSeq nk = k;
          nk[s].erase(nk[s].begin() + long(i) + 1);
          out.add(nk, C(-c));
        }
      }
    }
  }
  return out;
}

// res_I for I = (i_N, ..., i_1): first t_{i_N} -> t_{i_{N-1}}, last t_{i_2} -> t_{i_1}.
template <class C>
PolyDiff<C> iterated_residue(const Seq& I, const PolyDiff<C>& a) {
  if (I.size() < 2) throw std::invalid_argument("iterated_residue: needs |I| >= 2");
  if (has_repeat(I)) throw std::invalid_argument("iterated_residue: I repeats");
  PolyDiff<C> cur = a;
  for (std::size_t j = 0; j + 1 < I.size(); ++j) cur = residue_diag(I[j], I[j + 1], cur);
  return cur;
}

// ---------------------------------------------------------------------------
// The operators Phi_x.

template <class C>
struct PhiParams {
  // p(x, slot): the coefficient of dt_x/(t_x - z_slot).
  std::function<C(const ColoredIndex&, int)> p;
  // c(x, y): the coefficient of dt_x dt_y/(t_x - t_y) contracted against dt_y.
  std::function<C(const ColoredIndex&, const ColoredIndex&)> c;
};

template <class C>
PolyDiff<C> phi(const ColoredIndex& x, const PhiParams<C>& prm, const PolyDiff<C>& a) {
  PolyDiff<C> out(a.n());
  for (const auto& [k, coef] : a.terms()) {
    bool present = false;
    for (const auto& s : k) present = present || contains(s, x);
    if (present) continue;
    for (int s = 0; s < int(k.size()); ++s) {
      const Seq& q = k[s];
      C running = prm.p(x, s);
      // Splitting q = q'' q' with q' the last j entries.
      for (std::size_t j = 0; j <= q.size(); ++j) {
        if (j > 0) running = C(running - prm.c(x, q[q.size() - j]));
        MultiSeq nk = k;
        Seq& t = nk[s];
        t.insert(t.end() - long(j), x);
        out.add(nk, C(coef * running));
      }
    }
  }
  return out;
}

// Closed form of [Phi_x, Phi_y].
template <class C>
PolyDiff<C> phi_commutator(const ColoredIndex& x, const ColoredIndex& y, const PhiParams<C>& prm,
                           const PolyDiff<C>& a) {
  if (x == y) throw std::invalid_argument("phi_commutator: x and y must differ");
  PolyDiff<C> out = omega_times(Seq{x, y}, phi(y, prm, a)) * C(-prm.c(x, y));
  out += omega_times(Seq{y, x}, phi(x, prm, a)) * C(prm.c(y, x));
  return out;
}

// Phi_{i_N} ... Phi_{i_1} applied to a (i_1 first).
template <class C>
PolyDiff<C> phi_word(const Seq& I, const PhiParams<C>& prm, const PolyDiff<C>& a) {
  PolyDiff<C> cur = a;
  for (auto it = I.rbegin(); it != I.rend(); ++it) cur = phi(*it, prm, cur);
  return cur;
}

// Multi-degree of a key: counts per color, length r.
inline std::vector<int> multi_degree(const MultiSeq& key, int r) {
  std::vector<int> d(std::size_t(r), 0);
  for (const auto& s : key)
    for (const auto& x : s) d.at(std::size_t(x.color))++;
  return d;
}

}  // namespace pdiff
