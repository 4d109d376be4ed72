#pragma once
// Highest-weight modules of Kac-Moody type algebras inside the shuffle algebra,
// in the basis zeta(S) indexed by tuples of color sequences.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdiff/concrete.hpp"
#include "pdiff/linalg.hpp"
#include "pdiff/polydiff.hpp"

namespace pdiff {

struct CartanData {
  int r = 0;
  std::vector<std::vector<int>> c;  // c[k][l] = alpha_l(coroot_k)

  int operator()(int k, int l) const { return c.at(std::size_t(k)).at(std::size_t(l)); }

  void validate() const {
    if (r < 1 || int(c.size()) != r) throw std::invalid_argument("cartan: matrix must be r x r");
    for (int k = 0; k < r; ++k) {
      if (int(c[std::size_t(k)].size()) != r) throw std::invalid_argument("cartan: matrix must be r x r");
      if ((*this)(k, k) != 2) throw std::invalid_argument("cartan: diagonal entries must equal 2");
      for (int l = 0; l < r; ++l) {
        if (k == l) continue;
        if ((*this)(k, l) > 0)
          throw std::invalid_argument("cartan: off-diagonal entry c[" + std::to_string(k + 1) + "][" +
                                      std::to_string(l + 1) + "] must be a nonpositive integer");
        if (((*this)(k, l) == 0) != ((*this)(l, k) == 0))
          throw std::invalid_argument("cartan: zero pattern must be symmetric");
      }
    }
  }

  static CartanData sl2() { return CartanData{1, {{2}}}; }
  static CartanData sl3() { return CartanData{2, {{2, -1}, {-1, 2}}}; }
  static CartanData rank2(int ckl, int clk) { return CartanData{2, {{2, ckl}, {clk, 2}}}; }
};

struct WeightData {
  std::vector<std::vector<int>> lambda;  // lambda[nu][k] = lambda_nu(coroot_k)

  int n() const { return int(lambda.size()); }
  int at(int nu, int k) const { return lambda.at(std::size_t(nu)).at(std::size_t(k)); }
  int total(int k) const {
    int s = 0;
    for (const auto& l : lambda) s += l.at(std::size_t(k));
    return s;
  }

  void validate(int r) const {
    if (lambda.empty()) throw std::invalid_argument("weights: need at least one marked point");
    for (const auto& l : lambda) {
      if (int(l.size()) != r) throw std::invalid_argument("weights: each weight needs r entries");
      for (int v : l)
        if (v < 0) throw std::invalid_argument("weights: entries must be nonnegative integers");
    }
  }
};

using ColorSeq = std::vector<int>;       // head first, colors 0-based
using ColorKey = std::vector<ColorSeq>;  // one per marked point

inline std::string to_string(const ColorKey& k) {
  std::string out = "[";
  for (std::size_t s = 0; s < k.size(); ++s) {
    if (s) out += ";";
    out += "(";
    for (std::size_t i = 0; i < k[s].size(); ++i) out += (i ? "," : "") + std::to_string(k[s][i] + 1);
    out += ")";
  }
  return out + "]";
}

inline std::vector<int> key_degree(const ColorKey& key, int r) {
  std::vector<int> d(std::size_t(r), 0);
  for (const auto& s : key)
    for (int c : s) d.at(std::size_t(c))++;
  return d;
}

class ColorSeqVec {
 public:
  explicit ColorSeqVec(int n = 1) : n_(n) {}
  static ColorSeqVec unit(int n) {
    ColorSeqVec v(n);
    v.add(ColorKey(std::size_t(n)), Q(1));
    return v;
  }
  static ColorSeqVec basis(const ColorKey& k) {
    ColorSeqVec v(int(k.size()));
    v.add(k, Q(1));
    return v;
  }

  int n() const { return n_; }
  const std::map<ColorKey, Q>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Q coeff(const ColorKey& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Q(0) : it->second;
  }

  void add(const ColorKey& k, const Q& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  ColorSeqVec& operator+=(const ColorSeqVec& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  ColorSeqVec& operator-=(const ColorSeqVec& o) {
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  ColorSeqVec& operator*=(const Q& s) {
    if (s == 0) terms_.clear();
    for (auto& kv : terms_) kv.second *= s;
    return *this;
  }
  friend ColorSeqVec operator+(ColorSeqVec a, const ColorSeqVec& b) { return a += b; }
  friend ColorSeqVec operator-(ColorSeqVec a, const ColorSeqVec& b) { return a -= b; }
  friend ColorSeqVec operator*(ColorSeqVec a, const Q& s) { return a *= s; }
  friend ColorSeqVec operator*(const Q& s, ColorSeqVec a) { return a *= s; }
  friend bool operator==(const ColorSeqVec& a, const ColorSeqVec& b) { return a.terms_ == b.terms_; }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      if (!first) out += " + ";
      first = false;
      out += "(" + c.get_str() + ")*z" + to_string(k);
    }
    return out;
  }

 private:
  int n_;
  std::map<ColorKey, Q> terms_;
};

// ---------------------------------------------------------------------------
// Generators.

// f~_k, slot-wise insertion with lambda := lambda_nu.
inline ColorSeqVec f_action(int k, const CartanData& cd, const WeightData& wts, const ColorSeqVec& v) {
  ColorSeqVec out(v.n());
  for (const auto& [key, coef] : v.terms()) {
    for (int s = 0; s < int(key.size()); ++s) {
      const ColorSeq& q = key[std::size_t(s)];
      Q running(wts.at(s, k));
      for (std::size_t j = 0; j <= q.size(); ++j) {
        if (j > 0) running -= cd(k, q[q.size() - j]);
        ColorKey nk = key;
        auto& t = nk[std::size_t(s)];
        t.insert(t.end() - long(j), k);
        out.add(nk, coef * running);
      }
    }
  }
  return out;
}

// e~_k strips a leading k in each slot.
inline ColorSeqVec e_action(int k, const ColorSeqVec& v) {
  ColorSeqVec out(v.n());
  for (const auto& [key, coef] : v.terms()) {
    for (std::size_t s = 0; s < key.size(); ++s) {
      if (!key[s].empty() && key[s].front() == k) {
        ColorKey nk = key;
        nk[s].erase(nk[s].begin());
        out.add(nk, coef);
      }
    }
  }
  return out;
}

// Slot-restricted versions, used for tensor-factor actions.
inline ColorSeqVec f_action_slot(int k, int slot, const CartanData& cd, const WeightData& wts, const ColorSeqVec& v) {
  ColorSeqVec out(v.n());
  for (const auto& [key, coef] : v.terms()) {
    const ColorSeq& q = key[std::size_t(slot)];
    Q running(wts.at(slot, k));
    for (std::size_t j = 0; j <= q.size(); ++j) {
      if (j > 0) running -= cd(k, q[q.size() - j]);
      ColorKey nk = key;
      auto& t = nk[std::size_t(slot)];
      t.insert(t.end() - long(j), k);
      out.add(nk, coef * running);
    }
  }
  return out;
}

inline ColorSeqVec e_action_slot(int k, int slot, const ColorSeqVec& v) {
  ColorSeqVec out(v.n());
  for (const auto& [key, coef] : v.terms()) {
    const auto& q = key[std::size_t(slot)];
    if (!q.empty() && q.front() == k) {
      ColorKey nk = key;
      nk[std::size_t(slot)].erase(nk[std::size_t(slot)].begin());
      out.add(nk, coef);
    }
  }
  return out;
}

inline Q cartan_eigenvalue(int k, const CartanData& cd, const WeightData& wts, const ColorKey& key) {
  Q e(wts.total(k));
  for (const auto& s : key)
    for (int c : s) e -= cd(k, c);
  return e;
}

inline ColorSeqVec cartan_action(int k, const CartanData& cd, const WeightData& wts, const ColorSeqVec& v) {
  ColorSeqVec out(v.n());
  for (const auto& [key, coef] : v.terms()) out.add(key, coef * cartan_eigenvalue(k, cd, wts, key));
  return out;
}

// f_{s_N} ... f_{s_1} v, with s_1 applied first; word stored head first.
inline ColorSeqVec f_word(const ColorSeq& word, const CartanData& cd, const WeightData& wts, ColorSeqVec v) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = f_action(*it, cd, wts, v);
  return v;
}

// ---------------------------------------------------------------------------
// Key enumeration and module slices.

// All n-tuples of color sequences with exactly deg[k] entries of color k.
inline std::vector<ColorKey> enumerate_keys(int n, const std::vector<int>& deg) {
  std::vector<ColorKey> out;
  ColorKey cur(static_cast<std::size_t>(n));
  std::vector<int> left = deg;
  int total = 0;
  for (int d : deg) total += d;
  // Place colors one position at a time: at each step either close the
  // current slot or append a color to it.
  auto rec = [&](auto&& self, int slot, int placed) -> void {
    if (slot == n - 1) {
      if (placed != total) {
        for (std::size_t c = 0; c < left.size(); ++c) {
          if (left[c] == 0) continue;
          left[c]--;
          cur[std::size_t(slot)].push_back(int(c));
          self(self, slot, placed + 1);
          cur[std::size_t(slot)].pop_back();
          left[c]++;
        }
        return;
      }
      out.push_back(cur);
      return;
    }
    // close this slot
    self(self, slot + 1, placed);
    for (std::size_t c = 0; c < left.size(); ++c) {
      if (left[c] == 0) continue;
      left[c]--;
      cur[std::size_t(slot)].push_back(int(c));
      self(self, slot, placed + 1);
      cur[std::size_t(slot)].pop_back();
      left[c]++;
    }
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<std::vector<int>> degrees_up_to(const std::vector<int>& bound) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(bound.size(), 0);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == bound.size()) {
      out.push_back(cur);
      return;
    }
    for (int d = 0; d <= bound[k]; ++d) {
      cur[k] = d;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int sa = 0, sb = 0;
    for (int x : a) sa += x;
    for (int x : b) sb += x;
    return sa != sb ? sa < sb : a < b;
  });
  return out;
}

struct ModuleSlice {
  std::vector<int> degree;               // weight = sum(lambda) - sum degree[k] alpha_k
  std::vector<ColorSeqVec> basis;
  std::vector<ColorSeq> words;           // f-monomial words when the basis consists of f-monomials
  std::size_t dim() const { return basis.size(); }
};

// The truncation of V~(lambda): all keys of multi-degree <= bound.
inline std::vector<ModuleSlice> build_module(const CartanData& cd, const WeightData& wts, const std::vector<int>& bound) {
  cd.validate();
  wts.validate(cd.r);
  std::vector<ModuleSlice> out;
  for (const auto& d : degrees_up_to(bound)) {
    ModuleSlice s;
    s.degree = d;
    for (const auto& k : enumerate_keys(wts.n(), d)) s.basis.push_back(ColorSeqVec::basis(k));
    out.push_back(std::move(s));
  }
  return out;
}

inline Matrix vectors_matrix(const std::vector<ColorSeqVec>& vs, std::vector<ColorKey>* keys = nullptr) {
  std::vector<std::map<ColorKey, Q>> raw;
  for (const auto& v : vs) raw.push_back(v.terms());
  return columns_matrix(raw, keys);
}

inline std::size_t span_rank(const std::vector<ColorSeqVec>& vs) { return vectors_matrix(vs).rank(); }

// Span of f-monomials applied to 1, grown degree by degree.  Basis vectors are
// f-monomials themselves (their words are recorded).
inline std::vector<ModuleSlice> generated_submodule(const CartanData& cd, const WeightData& wts,
                                                    const std::vector<int>& bound) {
  cd.validate();
  wts.validate(cd.r);
  std::map<std::vector<int>, ModuleSlice> slices;
  ModuleSlice top;
  top.degree.assign(std::size_t(cd.r), 0);
  top.basis.push_back(ColorSeqVec::unit(wts.n()));
  top.words.push_back({});
  std::vector<std::vector<int>> frontier{top.degree};
  slices[top.degree] = top;
  while (!frontier.empty()) {
    std::map<std::vector<int>, std::vector<std::pair<ColorSeq, ColorSeqVec>>> candidates;
    for (const auto& d : frontier) {
      const ModuleSlice& s = slices[d];
      for (int k = 0; k < cd.r; ++k) {
        std::vector<int> nd = d;
        nd[std::size_t(k)]++;
        if (nd[std::size_t(k)] > bound[std::size_t(k)]) continue;
        for (std::size_t b = 0; b < s.basis.size(); ++b) {
          ColorSeqVec v = f_action(k, cd, wts, s.basis[b]);
          if (v.is_zero()) continue;
          ColorSeq w = s.words[b];
          w.insert(w.begin(), k);
          candidates[nd].emplace_back(w, v);
        }
      }
    }
    frontier.clear();
    for (auto& [nd, cands] : candidates) {
      ModuleSlice s;
      s.degree = nd;
      for (auto& [w, v] : cands) {
        s.basis.push_back(v);
        if (span_rank(s.basis) < s.basis.size()) {
          s.basis.pop_back();
          continue;
        }
        s.words.push_back(w);
      }
      if (!s.basis.empty()) {
        slices[nd] = std::move(s);
        frontier.push_back(nd);
      }
    }
  }
  std::vector<ModuleSlice> out;
  for (auto& kv : slices) out.push_back(std::move(kv.second));
  std::sort(out.begin(), out.end(), [](const ModuleSlice& a, const ModuleSlice& b) {
    int sa = 0, sb = 0;
    for (int x : a.degree) sa += x;
    for (int x : b.degree) sb += x;
    return sa != sb ? sa < sb : a.degree < b.degree;
  });
  return out;
}

// Places single-slot vectors into the tensor product (n slots).
inline ColorSeqVec tensor_vectors(const std::vector<ColorSeqVec>& parts) {
  ColorSeqVec out(int(parts.size()));
  std::function<void(std::size_t, ColorKey&, Q)> rec = [&](std::size_t s, ColorKey& cur, Q c) {
    if (s == parts.size()) {
      out.add(cur, c);
      return;
    }
    for (const auto& [k, q] : parts[s].terms()) {
      cur.push_back(k.at(0));
      rec(s + 1, cur, c * q);
      cur.pop_back();
    }
  };
  ColorKey cur;
  rec(0, cur, Q(1));
  return out;
}

inline WeightData single_slot(const WeightData& wts, int nu) { return WeightData{{wts.lambda.at(std::size_t(nu))}}; }

// V(lambda_1) (x) ... (x) V(lambda_n), slices of multi-degree <= bound.
// Each tensor basis vector is a product of f-monomial basis vectors of the factors.
struct TensorModule {
  std::vector<std::vector<ModuleSlice>> factors;  // per slot, slices of V(lambda_nu)
  std::vector<ModuleSlice> slices;                // of the tensor product
  // For each tensor slice basis vector, the factor slice degrees and indices used.
  std::map<std::vector<int>, std::vector<std::vector<std::pair<std::vector<int>, std::size_t>>>> provenance;
};

inline const ModuleSlice* find_slice(const std::vector<ModuleSlice>& slices, const std::vector<int>& d) {
  for (const auto& s : slices)
    if (s.degree == d) return &s;
  return nullptr;
}

inline TensorModule tensor_module(const CartanData& cd, const WeightData& wts, const std::vector<int>& bound,
                                  const std::function<bool(const std::vector<int>&)>& keep = nullptr) {
  TensorModule tm;
  for (int nu = 0; nu < wts.n(); ++nu) tm.factors.push_back(generated_submodule(cd, single_slot(wts, nu), bound));
  std::map<std::vector<int>, ModuleSlice> acc;
  std::vector<std::pair<std::vector<int>, std::size_t>> choice;
  std::vector<ColorSeqVec> parts;
  std::function<void(int, std::vector<int>)> rec = [&](int nu, std::vector<int> d) {
    if (nu == wts.n()) {
      if (keep && !keep(d)) return;
      auto& s = acc[d];
      s.degree = d;
      s.basis.push_back(tensor_vectors(parts));
      tm.provenance[d].push_back(choice);
      return;
    }
    for (const auto& sl : tm.factors[std::size_t(nu)]) {
      std::vector<int> nd = d;
      bool ok = true;
      for (std::size_t k = 0; k < nd.size(); ++k) {
        nd[k] += sl.degree[k];
        ok = ok && nd[k] <= bound[k];
      }
      if (!ok) continue;
      for (std::size_t b = 0; b < sl.basis.size(); ++b) {
        choice.emplace_back(sl.degree, b);
        parts.push_back(sl.basis[b]);
        rec(nu + 1, nd);
        parts.pop_back();
        choice.pop_back();
      }
    }
  };
  rec(0, std::vector<int>(std::size_t(cd.r), 0));
  for (auto& kv : acc) tm.slices.push_back(std::move(kv.second));
  return tm;
}

// Vectors of the span of `basis` killed by every e_k.
inline std::vector<ColorSeqVec> primitive_subspace(int r, const std::vector<ColorSeqVec>& basis) {
  if (basis.empty()) return {};
  std::vector<ColorSeqVec> images;
  // Stack e_k images: distinct k land in disjoint key sets after tagging.
  std::vector<std::map<ColorKey, Q>> cols(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    for (int k = 0; k < r; ++k) {
      ColorSeqVec e = e_action(k, basis[j]);
      for (const auto& [key, q] : e.terms()) {
        ColorKey tagged = key;
        tagged.push_back(ColorSeq{-1 - k});
        cols[j][tagged] += q;
      }
    }
  }
  Matrix m = columns_matrix(cols);
  if (m.rows() == 0) return basis;
  Matrix ker = m.kernel();
  std::vector<ColorSeqVec> out;
  for (std::size_t f = 0; f < ker.cols(); ++f) {
    ColorSeqVec v(basis[0].n());
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (ker(j, f) != 0) v += basis[j] * ker(j, f);
    out.push_back(v);
  }
  return out;
}

// m with sum_nu lambda_nu = sum_k m_k alpha_k, when it exists in nonnegative integers.
inline std::optional<std::vector<int>> weight_zero_degree(const CartanData& cd, const WeightData& wts) {
  Matrix c(std::size_t(cd.r), std::size_t(cd.r));
  std::vector<Q> rhs(std::size_t(cd.r));
  for (int k = 0; k < cd.r; ++k) {
    rhs[std::size_t(k)] = wts.total(k);
    for (int l = 0; l < cd.r; ++l) c(std::size_t(k), std::size_t(l)) = cd(k, l);
  }
  auto inv = c.inverse();
  if (!inv) throw std::invalid_argument("weight-zero degree needs an invertible Cartan matrix");
  std::vector<int> m;
  for (int k = 0; k < cd.r; ++k) {
    Q v(0);
    for (int l = 0; l < cd.r; ++l) v += (*inv)(std::size_t(k), std::size_t(l)) * rhs[std::size_t(l)];
    if (v < 0 || v.get_den() != 1) return std::nullopt;
    m.push_back(int(v.get_num().get_si()));
  }
  return m;
}

struct Invariants {
  std::vector<int> degree;                 // the multi-degree m
  std::vector<ColorSeqVec> weight_zero;    // basis of V(lambda)_0
  std::vector<ColorSeqVec> basis;          // basis of V(lambda)^g
};

inline Invariants invariants(const CartanData& cd, const WeightData& wts) {
  cd.validate();
  wts.validate(cd.r);
  Invariants inv;
  auto m = weight_zero_degree(cd, wts);
  if (!m) return inv;
  inv.degree = *m;
  TensorModule tm = tensor_module(cd, wts, *m, [&](const std::vector<int>& d) { return d == *m; });
  if (const ModuleSlice* s = find_slice(tm.slices, *m)) inv.weight_zero = s->basis;
  inv.basis = primitive_subspace(cd.r, inv.weight_zero);
  return inv;
}

// ---------------------------------------------------------------------------
// Expansion of zeta(S) over a finite pool M: sum of zeta_I over injective,
// color-respecting liftings of S into M.

inline std::vector<std::vector<ColoredIndex>> standard_pool(const std::vector<int>& m) {
  std::vector<std::vector<ColoredIndex>> pool(m.size());
  for (std::size_t k = 0; k < m.size(); ++k)
    for (int o = 0; o < m[k]; ++o) pool[k].push_back(ColoredIndex{int(k), o});
  return pool;
}

inline void lift_key(const ColorKey& key, const std::vector<std::vector<ColoredIndex>>& pool,
                     const std::function<void(const MultiSeq&)>& emit) {
  MultiSeq cur(key.size());
  std::vector<std::vector<bool>> used(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k) used[k].assign(pool[k].size(), false);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t s, std::size_t i) {
    if (s == key.size()) {
      emit(cur);
      return;
    }
    if (i == key[s].size()) {
      rec(s + 1, 0);
      return;
    }
    std::size_t c = std::size_t(key[s][i]);
    if (c >= pool.size()) return;
    for (std::size_t j = 0; j < pool[c].size(); ++j) {
      if (used[c][j]) continue;
      used[c][j] = true;
      cur[s].push_back(pool[c][j]);
      rec(s, i + 1);
      cur[s].pop_back();
      used[c][j] = false;
    }
  };
  rec(0, 0);
}

inline PolyDiff<Q> expand(const ColorSeqVec& v, const std::vector<std::vector<ColoredIndex>>& pool) {
  PolyDiff<Q> out(v.n());
  for (const auto& [key, c] : v.terms()) lift_key(key, pool, [&](const MultiSeq& k) { out.add(k, c); });
  return out;
}

inline ColorKey colors_of(const MultiSeq& k) {
  ColorKey out(k.size());
  for (std::size_t s = 0; s < k.size(); ++s)
    for (const auto& x : k[s]) out[s].push_back(x.color);
  return out;
}

// Inverse of expand on symmetric elements: reads the coefficient of one lift per key.
// Throws if the element is not invariant under relabelling inside color classes.
inline ColorSeqVec contract(const PolyDiff<Q>& a, const std::vector<std::vector<ColoredIndex>>& pool) {
  ColorSeqVec out(a.n());
  std::map<ColorKey, Q> seen;
  for (const auto& [k, c] : a.terms()) {
    ColorKey ck = colors_of(k);
    auto it = seen.find(ck);
    if (it == seen.end()) seen.emplace(ck, c);
    else if (it->second != c) throw std::domain_error("contract: element is not symmetric in its pool");
  }
  for (const auto& [ck, c] : seen) out.add(ck, c);
  if (!(expand(out, pool) == a)) throw std::domain_error("contract: element is not a full symmetric expansion");
  return out;
}

inline std::size_t total_dimension(const std::vector<ModuleSlice>& slices) {
  std::size_t d = 0;
  for (const auto& s : slices) d += s.dim();
  return d;
}

// PhiParams for a single marked point with p_i = lambda(coroot of color i), c_{i,j} = c_{color i, color j}.
inline PhiParams<Q> rep_params(const CartanData& cd, const WeightData& wts) {
  PhiParams<Q> prm;
  prm.p = [cd, wts](const ColoredIndex& x, int slot) { return Q(wts.at(slot, x.color)); };
  prm.c = [cd](const ColoredIndex& x, const ColoredIndex& y) { return Q(cd(x.color, y.color)); };
  return prm;
}

inline PolyDiff<Q> sum_phi(const std::vector<ColoredIndex>& xs, const PhiParams<Q>& prm, const PolyDiff<Q>& a) {
  PolyDiff<Q> out(a.n());
  for (const auto& x : xs) out += phi(x, prm, a);
  return out;
}

inline std::vector<Support> subsets_of_size(const std::vector<ColoredIndex>& xs, int N) {
  std::vector<Support> out;
  Support cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (int(cur.size()) == N) {
      Support X = cur;
      std::sort(X.begin(), X.end());
      out.push_back(X);
      return;
    }
    for (std::size_t j = i; j < xs.size(); ++j) {
      cur.push_back(xs[j]);
      rec(j + 1);
      cur.pop_back();
    }
  };
  if (N >= 0) rec(0);
  return out;
}

struct SerreReport {
  int k = 0, l = 0, N = 0;
  bool identity_holds = true;     // the displayed operator identity, on every test element
  bool serre_vanishes = true;     // only meaningful when N = 1 - c_{k,l}
  bool serre_applicable = false;
  std::string witness;
};

// Checks (ad f_k)^N/N! f_l against its closed form on {1, zeta(s)} for a single
// marked point, with f_k = sum of Phi_x over a finite pool of color k.
inline SerreReport serre_verify(const CartanData& cd, const WeightData& wts, int k, int l, int N,
                                const IdentityOptions& opt = {}) {
  cd.validate();
  if (k == l) throw std::invalid_argument("serre_verify: k and l must differ");
  if (N < 1) throw std::invalid_argument("serre_verify: N must be positive");
  WeightData w1 = single_slot(wts, 0);
  w1.validate(cd.r);
  std::vector<int> m(std::size_t(cd.r), 1);
  m[std::size_t(k)] = N + 2;
  m[std::size_t(l)] = 2;
  auto pool = standard_pool(m);
  auto prm = rep_params(cd, w1);
  const auto& J = pool[std::size_t(k)];
  const auto& O = pool[std::size_t(l)];
  const Q c(cd(k, l)), cc(cd(l, k));
  Q pre(1);
  for (int j = 1; j < N; ++j) pre *= c + j;

  std::vector<PolyDiff<Q>> tests{PolyDiff<Q>::unit(1)};
  for (int s = 0; s < cd.r; ++s) tests.push_back(expand(ColorSeqVec::basis(ColorKey{ColorSeq{s}}), pool));

  SerreReport rep{k, l, N, true, true, N == 1 - cd(k, l), ""};
  for (const auto& a : tests) {
    // (ad F)^N G = sum_j binom(N,j) (-1)^j F^{N-j} G F^j
    PolyDiff<Q> lhs(1);
    PolyDiff<Q> fj = a;
    Q binom(1);
    for (int j = 0; j <= N; ++j) {
      PolyDiff<Q> term = sum_phi(O, prm, fj);
      for (int t = 0; t < N - j; ++t) term = sum_phi(J, prm, term);
      lhs += term * (j % 2 ? -binom : binom);
      binom = binom * (N - j) / (j + 1);
      fj = sum_phi(J, prm, fj);
    }
    lhs *= 1 / factorial_q(N);
    // Closed form: for each o of color l and each N-subset X of color k,
    //   (c dt_X Phi_o + c' dt_o sum_{i in X} dt_{X-i} Phi_i) / prod_{x in X} (t_o - t_x).
    ConcretePolyDiff rhs;
    std::map<ColoredIndex, ConcretePolyDiff> phi_a;
    for (const auto& x : J) phi_a[x] = realize(phi(x, prm, a));
    for (const auto& o : O) {
      ConcretePolyDiff phi_o = realize(phi(o, prm, a));
      for (const auto& X : subsets_of_size(J, N)) {
        RatFunc den(Q(1));
        for (const auto& x : X) den = den * RatFunc::inverse(t_of(o) - t_of(x));
        ConcretePolyDiff part = (ConcretePolyDiff::dt(X) * phi_o).times(RatFunc(c));
        for (const auto& i : X) {
          Support Xi = support_minus(X, i);
          Xi.insert(std::upper_bound(Xi.begin(), Xi.end(), o), o);
          part += (ConcretePolyDiff::dt(Xi) * phi_a[i]).times(RatFunc(cc));
        }
        rhs += part.times(den);
      }
    }
    rhs = rhs.times(RatFunc(pre));
    auto res = identity_test(realize(lhs), rhs, opt);
    if (!res.equal) {
      rep.identity_holds = false;
      rep.witness = "test element " + a.str() + ": " + res.witness;
    }
    if (rep.serre_applicable && !lhs.is_zero()) {
      rep.serre_vanishes = false;
      if (rep.witness.empty()) rep.witness = "Serre element nonzero on " + a.str();
    }
  }
  return rep;
}

}  // namespace pdiff
