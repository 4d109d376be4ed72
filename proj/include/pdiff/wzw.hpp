#pragma once
// The level-l subspace of the invariants: the highest-root operator, the
// operator E(z) = sum_nu z_nu e^(nu), its kernel, and the diagonal vanishing
// criterion that characterizes that kernel.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdiff/concrete.hpp"
#include "pdiff/connection.hpp"
#include "pdiff/kacmoody.hpp"
#include "pdiff/residues.hpp"

namespace pdiff {

struct LevelConfig {
  int level = 1;
  std::vector<int> highest_root;  // coefficients on the simple roots
  int coxeter = 2;
  int dual_coxeter = 2;
  std::vector<Q> z;

  // Distinct small integers summing to zero.
  static std::vector<Q> default_points(int n) {
    std::vector<Q> z;
    for (int nu = 0; nu < n; ++nu) z.push_back(Q(2 * nu - (n - 1)));
    return z;
  }

  static LevelConfig standard(const CartanData& cd, int level, std::vector<Q> z) {
    LevelConfig cfg;
    cfg.level = level;
    cfg.z = std::move(z);
    if (cd.r == 1 && cd(0, 0) == 2) {
      cfg.highest_root = {1};
      cfg.coxeter = cfg.dual_coxeter = 2;
    } else if (cd.r == 2 && cd.c == CartanData::sl3().c) {
      cfg.highest_root = {1, 1};
      cfg.coxeter = cfg.dual_coxeter = 3;
    } else {
      throw std::invalid_argument("level config: highest root data must be supplied for this Cartan matrix");
    }
    return cfg;
  }

  void validate(const CartanData& cd, int n) const {
    if (level < 1) throw std::invalid_argument("level config: level must be positive");
    if (int(highest_root.size()) != cd.r) throw std::invalid_argument("level config: highest root has wrong rank");
    int len = 0;
    for (int a : highest_root) {
      if (a < 0) throw std::invalid_argument("level config: negative highest root coefficient");
      len += a;
    }
    if (len != coxeter - 1) throw std::invalid_argument("level config: highest root length must be h - 1");
    if (int(z.size()) != n) throw std::invalid_argument("level config: need one point per weight");
    for (std::size_t a = 0; a < z.size(); ++a)
      for (std::size_t b = a + 1; b < z.size(); ++b)
        if (z[a] == z[b]) throw std::invalid_argument("level config: points must be distinct");
  }

  // Level-matched normalization: q is the symmetrizer of the Cartan matrix,
  // scaled so that q(highest root) = 1/(dual Coxeter + level).
  CasimirSpec casimir(const CartanData& cd) const {
    std::vector<Q> q(std::size_t(cd.r), Q(0));
    q[0] = 1;
    for (bool grew = true; grew;) {
      grew = false;
      for (int k = 0; k < cd.r; ++k)
        for (int l = 0; l < cd.r; ++l)
          if (q[std::size_t(k)] != 0 && q[std::size_t(l)] == 0 && cd(k, l) != 0) {
            q[std::size_t(l)] = q[std::size_t(k)] * cd(k, l) / cd(l, k);
            grew = true;
          }
    }
    if (std::any_of(q.begin(), q.end(), [](const Q& x) { return x == 0; }))
      throw std::invalid_argument("level config: Cartan matrix must be indecomposable");
    Q theta(0);
    for (int k = 0; k < cd.r; ++k)
      for (int l = 0; l < cd.r; ++l)
        theta += Q(highest_root.at(std::size_t(k)) * highest_root.at(std::size_t(l))) * q[std::size_t(k)] * cd(k, l);
    theta /= 2;
    const Q scale = make_q(1, dual_coxeter + level) / theta;
    for (auto& x : q) x *= scale;
    return CasimirSpec{q, {}};
  }
};

// Every ordering of the highest root's color content.
inline std::vector<ColorSeq> highest_root_words(const LevelConfig& cfg) {
  ColorSeq w;
  for (std::size_t k = 0; k < cfg.highest_root.size(); ++k)
    for (int a = 0; a < cfg.highest_root[k]; ++a) w.push_back(int(k));
  std::vector<ColorSeq> out;
  do out.push_back(w);
  while (std::next_permutation(w.begin(), w.end()));
  return out;
}

inline ColorSeq colors_of(const Seq& I) {
  ColorSeq out;
  for (const auto& x : I) out.push_back(x.color);
  return out;
}

// [[e_{w0}, e_{w1}], ..., e_{w_last}] acting on one slot.
inline ColorSeqVec e_bracket_slot(const ColorSeq& word, int slot, const ColorSeqVec& v) {
  if (word.empty()) throw std::invalid_argument("e_bracket_slot: empty word");
  std::function<ColorSeqVec(std::size_t, const ColorSeqVec&)> apply = [&](std::size_t upto, const ColorSeqVec& u) {
    if (upto == 0) return e_action_slot(word[0], slot, u);
    ColorSeqVec a = apply(upto - 1, e_action_slot(word[upto], slot, u));
    a -= e_action_slot(word[upto], slot, apply(upto - 1, u));
    return a;
  };
  return apply(word.size() - 1, v);
}

// Residues strip the tail of a slot while e_action_slot strips the head, so the
// residue route realizes the opposite Lie algebra: a nested bracket of length N
// comes out multiplied by (-1)^(N-1).
inline Q residue_bracket_sign(std::size_t length) { return length % 2 == 0 ? Q(-1) : Q(1); }

inline ColorSeqVec e_operator_vec(const LevelConfig& cfg, const ColorSeq& word, const ColorSeqVec& v) {
  ColorSeqVec out(v.n());
  for (int nu = 0; nu < v.n(); ++nu) out += e_bracket_slot(word, nu, v) * cfg.z.at(std::size_t(nu));
  return out;
}

// res_I for |I| >= 2 and the identity for a single index.
inline PolyDiff<Q> residue_along(const Seq& I, const PolyDiff<Q>& a) {
  return I.size() >= 2 ? iterated_residue(I, a) : a;
}

// Throws if res_I(a) still has a pole along t_{last of I} = t_j.
inline void require_no_diagonal_poles(const Seq& I, const PolyDiff<Q>& r) {
  const ColoredIndex y = I.back();
  Support seen;
  for (const auto& [k, c] : r.terms())
    for (const auto& j : support_of(k))
      if (j != y && !std::binary_search(seen.begin(), seen.end(), j)) seen.insert(std::upper_bound(seen.begin(), seen.end(), j), j);
  for (const auto& j : seen)
    if (!residue_diag(y, j, r).is_zero())
      throw std::domain_error("pole obstruction: residue along t" + to_string(y) + " = t" + to_string(j));
}

// res_{t_I = z_slot} res_I(a): the highest-root generator acting in one slot.
inline PolyDiff<Q> highest_root_action(int slot, const PolyDiff<Q>& a, const Seq& I) {
  const PolyDiff<Q> r = residue_along(I, a);
  require_no_diagonal_poles(I, r);
  return residue_at_marked(I.back(), slot, r);
}

inline PolyDiff<Q> e_operator(const LevelConfig& cfg, const Seq& I, const PolyDiff<Q>& a) {
  PolyDiff<Q> out(a.n());
  for (int nu = 0; nu < a.n(); ++nu) out += highest_root_action(nu, a, I) * cfg.z.at(std::size_t(nu));
  return out;
}

struct EOperatorRoutes {
  ConcretePolyDiff by_points;    // sum_nu z_nu res_{t_I = z_nu} res_I
  ConcretePolyDiff at_infinity;  // -res_{t_I = oo} t_I res_I
  bool agree = false;
};

// Both routes in the rational model with symbolic marked points.
inline EOperatorRoutes e_operator_routes(const Seq& I, const PolyDiff<Q>& a) {
  EOperatorRoutes out;
  const ColoredIndex y = I.back();
  const ConcretePolyDiff r = realize(residue_along(I, a));
  for (int nu = 0; nu < a.n(); ++nu) out.by_points += concrete_residue(r, y, z_of(nu)).times(RatFunc(z_of(nu)));
  out.at_infinity -= concrete_residue_at_infinity(r.times(RatFunc(t_of(y))), y);
  out.agree = identity_test(out.by_points, out.at_infinity).equal;
  return out;
}

// ---------------------------------------------------------------------------
// The fibre of the level-l subspace.

struct WzwFiber {
  std::vector<ColorSeqVec> invariants;
  Matrix kernel;                    // columns: coordinates on `invariants`
  std::vector<ColorSeqVec> basis;   // the kernel as vectors
  std::size_t dim() const { return basis.size(); }
};

inline ColorSeqVec combine(const std::vector<ColorSeqVec>& vs, const std::vector<Q>& coords, int n) {
  ColorSeqVec out(n);
  for (std::size_t j = 0; j < vs.size(); ++j)
    if (coords[j] != 0) out += vs[j] * coords[j];
  return out;
}

inline ColorSeqVec e_power(const LevelConfig& cfg, const ColorSeq& word, int p, ColorSeqVec v) {
  for (int i = 0; i < p; ++i) v = e_operator_vec(cfg, word, v);
  return v;
}

// Matrix of v -> E^p v on the given vectors, with rows indexed by the keys of the images.
inline Matrix image_matrix(const std::vector<ColorSeqVec>& images) {
  std::vector<std::map<ColorKey, Q>> cols;
  for (const auto& v : images) cols.push_back(v.terms());
  return columns_matrix(cols);
}

inline WzwFiber wzw_fiber(const CartanData& cd, const WeightData& wts, const LevelConfig& cfg) {
  cfg.validate(cd, wts.n());
  WzwFiber w;
  w.invariants = invariants(cd, wts).basis;
  const std::size_t d = w.invariants.size();
  if (d == 0) {
    w.kernel = Matrix(0, 0);
    return w;
  }
  const ColorSeq word = highest_root_words(cfg).front();
  std::vector<ColorSeqVec> images;
  for (const auto& v : w.invariants) images.push_back(e_power(cfg, word, cfg.level + 1, v));
  Matrix K = image_matrix(images);
  w.kernel = K.rows() == 0 ? Matrix::identity(d) : K.kernel();
  for (std::size_t c = 0; c < w.kernel.cols(); ++c) w.basis.push_back(combine(w.invariants, w.kernel.column(c), wts.n()));
  return w;
}

// ---------------------------------------------------------------------------
// The diagonal vanishing criterion.

// Index sequences of the pool whose colors spell a highest-root word.
inline std::vector<Seq> highest_root_sequences(const LevelConfig& cfg, const ColorPool& pool) {
  std::vector<Seq> out;
  for (const auto& word : highest_root_words(cfg)) {
    Seq cur;
    std::function<void(std::size_t)> rec = [&](std::size_t p) {
      if (p == word.size()) {
        out.push_back(cur);
        return;
      }
      const auto k = std::size_t(word[p]);
      if (k >= pool.size()) return;
      for (const auto& x : pool[k]) {
        if (contains(cur, x)) continue;
        cur.push_back(x);
        rec(p + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }
  return out;
}

// Unordered (1+l)-tuples of pairwise disjoint highest-root sequences.
inline std::vector<std::vector<Seq>> criterion_tuples(const LevelConfig& cfg, const ColorPool& pool) {
  const auto seqs = highest_root_sequences(cfg, pool);
  const std::size_t want = std::size_t(cfg.level) + 1;
  std::vector<std::vector<Seq>> out;
  std::vector<Seq> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (cur.size() == want) {
      out.push_back(cur);
      return;
    }
    for (std::size_t s = from; s < seqs.size(); ++s) {
      bool ok = true;
      for (const auto& c : cur)
        for (const auto& x : seqs[s]) ok = ok && !contains(c, x);
      if (!ok) continue;
      cur.push_back(seqs[s]);
      rec(s + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// res_{I_0} ... res_{I_l}(a) restricted to t_{I_0} = ... = t_{I_l}, with the marked points fixed.
inline ConcretePolyDiff diagonal_restriction(const std::vector<Seq>& tuple, const std::vector<Q>& z,
                                             const PolyDiff<Q>& a) {
  PolyDiff<Q> r = a;
  for (const auto& I : tuple) r = residue_along(I, r);
  ConcretePolyDiff f = realize(r);
  for (std::size_t nu = 0; nu < z.size(); ++nu) f = f.substitute(var_z(int(nu)), Poly(z[nu]));
  ConcretePolyDiff out;
  const Poly base = t_of(tuple.front().back());
  for (const auto& [X, g] : f.terms()) {
    RatFunc h = g.reduced();
    try {
      for (std::size_t k = 1; k < tuple.size(); ++k) h = h.substitute(var_t(tuple[k].back()), base);
    } catch (const HigherOrderPole&) {
      throw std::domain_error("pole obstruction: diagonal " + to_string(tuple));
    }
    out.add(X, h);
  }
  return out;
}

struct CriterionRow {
  std::vector<Seq> tuple;
  bool vanishes;
};

struct CriterionReport {
  std::vector<CriterionRow> rows;
  bool holds() const {
    return std::all_of(rows.begin(), rows.end(), [](const CriterionRow& r) { return r.vanishes; });
  }
};

inline CriterionReport ramadas_report(const LevelConfig& cfg, const ColorPool& pool, const PolyDiff<Q>& a) {
  CriterionReport rep;
  for (const auto& tuple : criterion_tuples(cfg, pool)) {
    const auto g = diagonal_restriction(tuple, cfg.z, a);
    bool zero = true;
    for (const auto& [X, h] : g.terms()) zero = zero && h.is_zero_exact();
    rep.rows.push_back({tuple, zero});
  }
  return rep;
}

inline bool ramadas_criterion(const LevelConfig& cfg, const ColorPool& pool, const PolyDiff<Q>& a) {
  return ramadas_report(cfg, pool, a).holds();
}

// The subspace of the invariants satisfying the criterion, as coordinates: the
// restricted coefficients are put over a common denominator and their numerators
// must satisfy the same linear relation.
inline Matrix ramadas_subspace(const CartanData& cd, const WeightData& wts, const LevelConfig& cfg,
                               const std::vector<ColorSeqVec>& invs) {
  const std::size_t d = invs.size();
  if (d == 0) return Matrix(0, 0);
  const auto m = invariants(cd, wts).degree;
  const ColorPool pool = standard_pool(m);
  std::vector<PolyDiff<Q>> expanded;
  for (const auto& v : invs) expanded.push_back(expand(v, pool));
  std::vector<std::map<std::pair<std::size_t, Monomial>, Q>> rows_by_col(d);
  std::size_t block = 0;
  for (const auto& tuple : criterion_tuples(cfg, pool)) {
    std::vector<ConcretePolyDiff> gs;
    std::set<Support> supports;
    for (const auto& e : expanded) {
      gs.push_back(diagonal_restriction(tuple, cfg.z, e));
      for (const auto& [X, h] : gs.back().terms()) supports.insert(X);
    }
    for (const auto& X : supports) {
      // Common denominator of the d coefficients.
      Den lcm;
      std::vector<RatFunc> hs;
      for (const auto& g : gs) {
        hs.push_back(g.coeff(X).combined());
        for (const auto& [den, num] : hs.back().terms())
          for (const auto& [f, mult] : den) lcm[f] = std::max(lcm[f], mult);
      }
      for (std::size_t j = 0; j < d; ++j)
        for (const auto& [den, num] : hs[j].terms()) {
          Poly t = num;
          for (const auto& [f, mult] : lcm) {
            auto it = den.find(f);
            const int have = it == den.end() ? 0 : it->second;
            if (mult > have) t = t * poly_pow(f, unsigned(mult - have));
          }
          for (const auto& [mono, c] : t.terms()) rows_by_col[j][{block, mono}] += c;
        }
      ++block;
    }
  }
  std::vector<std::map<std::pair<std::size_t, Monomial>, Q>> cols;
  for (auto& col : rows_by_col) {
    std::map<std::pair<std::size_t, Monomial>, Q> clean;
    for (const auto& [k, c] : col)
      if (c != 0) clean.emplace(k, c);
    cols.push_back(clean);
  }
  Matrix A = columns_matrix(cols);
  return A.rows() == 0 ? Matrix::identity(d) : A.kernel();
}

// Two column spans are equal.
inline bool same_span(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) return a.cols() == 0 && b.cols() == 0;
  Matrix ab(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) ab(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) ab(i, a.cols() + j) = b(i, j);
  }
  const std::size_t r = ab.rank();
  return r == a.rank() && r == b.rank();
}

// ---------------------------------------------------------------------------
// The level-l subspace is preserved by the KZ connection with level-matched
// Casimir: for w in ker K(z), K = E^{1+l}, one needs (d_nu K) w + K A_nu w = 0,
// where A_nu = sum_mu Omega_{nu mu}/(z_nu - z_mu) and nabla = d - A.

struct WzwFlatnessReport {
  std::size_t fiber_dim = 0;
  std::vector<std::string> failures;
  bool flat() const { return failures.empty(); }
};

inline WzwFlatnessReport wzw_flatness(const CartanData& cd, const WeightData& wts, const LevelConfig& cfg,
                                      const CasimirSpec& spec) {
  WzwFlatnessReport rep;
  const WzwFiber fib = wzw_fiber(cd, wts, cfg);
  rep.fiber_dim = fib.dim();
  Pairing pr(cd, wts, spec);
  CasimirAction cas(pr);
  const ColorSeq word = highest_root_words(cfg).front();
  const int n = wts.n();
  const int p = cfg.level + 1;
  for (int nu = 0; nu < n; ++nu)
    for (std::size_t b = 0; b < fib.basis.size(); ++b) {
      const ColorSeqVec& w = fib.basis[b];
      // d_nu K w = sum_j E^j e^(nu) E^(p-1-j) w
      ColorSeqVec lhs(n);
      for (int j = 0; j < p; ++j)
        lhs += e_power(cfg, word, j, e_bracket_slot(word, nu, e_power(cfg, word, p - 1 - j, w)));
      ColorSeqVec Aw(n);
      for (int mu = 0; mu < n; ++mu) {
        if (mu == nu) continue;
        const Q inv = 1 / (cfg.z[std::size_t(nu)] - cfg.z[std::size_t(mu)]);
        Aw += cas.apply(std::min(nu, mu), std::max(nu, mu), w) * Q(inv);
      }
      lhs += e_power(cfg, word, p, Aw);
      if (!lhs.is_zero()) rep.failures.push_back("slot " + std::to_string(nu + 1) + " frame vector " + std::to_string(b));
    }
  return rep;
}

}  // namespace pdiff
