#pragma once
// Casimir operators on tensor products, the KZ connection, and the Gauss-Manin
// connection on the spaces of logarithmic forms.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdiff/concrete.hpp"
#include "pdiff/kacmoody.hpp"
#include "pdiff/linalg.hpp"
#include "pdiff/polydiff.hpp"

namespace pdiff {

// q_k = q^C(alpha_k) and optionally the pairings P_{nu,mu} = C(lambda_nu, lambda_mu).
struct CasimirSpec {
  std::vector<Q> q;
  std::optional<Matrix> P;

  static CasimirSpec uniform(int r, const Q& c) { return CasimirSpec{std::vector<Q>(std::size_t(r), c), {}}; }

  void validate(const CartanData& cd) const {
    if (int(q.size()) != cd.r) throw std::invalid_argument("casimir: need one q per simple root");
    for (const auto& x : q)
      if (x == 0) throw std::invalid_argument("casimir: q^C(alpha_k) must be nonzero");
    for (int k = 0; k < cd.r; ++k)
      for (int l = 0; l < cd.r; ++l)
        if (q[std::size_t(k)] * cd(k, l) != q[std::size_t(l)] * cd(l, k))
          throw std::invalid_argument("casimir: q_k c_kl = q_l c_lk fails for k=" + std::to_string(k + 1) +
                                      ", l=" + std::to_string(l + 1));
  }
};

// All pairings between the lambda_nu and the simple roots.
class Pairing {
 public:
  Pairing(const CartanData& cd, const WeightData& wts, const CasimirSpec& spec) : cd_(cd), wts_(wts), spec_(spec) {
    spec.validate(cd);
    wts.validate(cd.r);
    const std::size_t r = std::size_t(cd.r), n = std::size_t(wts.n());
    B_ = Matrix(r, r);
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t l = 0; l < r; ++l) B_(k, l) = spec.q[k] * cd(int(k), int(l));
    if (spec.P) {
      if (spec.P->rows() != n || spec.P->cols() != n) throw std::invalid_argument("casimir: P must be n x n");
      P_ = *spec.P;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (P_(a, b) != P_(b, a)) throw std::invalid_argument("casimir: P must be symmetric");
    } else {
      auto inv = B_.inverse();
      if (!inv) throw std::invalid_argument("casimir: C(alpha_k, alpha_l) is singular, so P must be supplied");
      // lambda_nu = sum_l x_l alpha_l with B x = (C(lambda_nu, alpha_k))_k.
      P_ = Matrix(n, n);
      for (std::size_t a = 0; a < n; ++a) {
        std::vector<Q> x(r);
        for (std::size_t l = 0; l < r; ++l)
          for (std::size_t k = 0; k < r; ++k) x[l] += (*inv)(l, k) * lambda_alpha(int(a), int(k));
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t l = 0; l < r; ++l) P_(a, b) += x[l] * lambda_alpha(int(b), int(l));
      }
    }
  }

  const CartanData& cartan() const { return cd_; }
  const WeightData& weights() const { return wts_; }
  const CasimirSpec& spec() const { return spec_; }
  const Matrix& P() const { return P_; }
  const Matrix& B() const { return B_; }

  Q alpha_alpha(int k, int l) const { return B_(std::size_t(k), std::size_t(l)); }
  Q lambda_alpha(int nu, int k) const { return spec_.q.at(std::size_t(k)) * wts_.at(nu, k); }
  Q lambda_lambda(int nu, int mu) const { return P_(std::size_t(nu), std::size_t(mu)); }

  // C(lambda_nu - alpha_d, lambda_mu - alpha_e) for root-lattice degrees d, e.
  Q c0(int nu, const std::vector<int>& d, int mu, const std::vector<int>& e) const {
    Q out = lambda_lambda(nu, mu);
    for (int k = 0; k < cd_.r; ++k) {
      out -= Q(d[std::size_t(k)]) * lambda_alpha(mu, k);
      out -= Q(e[std::size_t(k)]) * lambda_alpha(nu, k);
      for (int l = 0; l < cd_.r; ++l) out += Q(d[std::size_t(k)] * e[std::size_t(l)]) * alpha_alpha(k, l);
    }
    return out;
  }

 private:
  CartanData cd_;
  WeightData wts_;
  CasimirSpec spec_;
  Matrix B_, P_;
};

inline std::vector<int> seq_degree(const ColorSeq& s, int r) {
  std::vector<int> d(std::size_t(r), 0);
  for (int c : s) d.at(std::size_t(c))++;
  return d;
}

// [f_T] = ad(f_{t_M}) ... ad(f_{t_2}) (f_{t_1}) acting on one slot.
inline ColorSeqVec bracket_word_slot(const ColorSeq& T, int slot, const CartanData& cd, const WeightData& wts,
                                     const ColorSeqVec& v) {
  if (T.empty()) return ColorSeqVec(v.n());
  if (T.size() == 1) return f_action_slot(T[0], slot, cd, wts, v);
  const ColorSeq rest(T.begin() + 1, T.end());
  ColorSeqVec out = f_action_slot(T[0], slot, cd, wts, bracket_word_slot(rest, slot, cd, wts, v));
  out -= bracket_word_slot(rest, slot, cd, wts, f_action_slot(T[0], slot, cd, wts, v));
  return out;
}

// The operators C_{nu,mu} = C_0 + C_+ + C_- on V(lambda_1) x ... x V(lambda_n),
// realized on ColorSeqVec elements of the tensor product.
class CasimirAction {
 public:
  explicit CasimirAction(Pairing pr) : pr_(std::move(pr)) {}

  const Pairing& pairing() const { return pr_; }

  ColorSeqVec c0(int nu, int mu, const ColorSeqVec& v) const {
    const int r = pr_.cartan().r;
    ColorSeqVec out(v.n());
    for (const auto& [key, c] : v.terms())
      out.add(key, c * pr_.c0(nu, seq_degree(key[std::size_t(nu)], r), mu, seq_degree(key[std::size_t(mu)], r)));
    return out;
  }

  // The part in sum_{alpha > 0} g_alpha (x) g_{-alpha}, with the positive root acting
  // in slot a: slot a is written in f-monomials, slot b receives iterated brackets.
  ColorSeqVec raising(int a, int b, const ColorSeqVec& v) const {
    const CartanData& cd = pr_.cartan();
    const WeightData& wts = pr_.weights();
    ColorSeqVec out(v.n());
    // Split v = sum_R u_R (x) zeta_R with u_R in slot a.
    std::map<std::pair<ColorKey, std::vector<int>>, std::map<ColorSeq, Q>> groups;
    for (const auto& [key, c] : v.terms()) {
      ColorKey rest = key;
      rest[std::size_t(a)].clear();
      groups[{rest, seq_degree(key[std::size_t(a)], cd.r)}][key[std::size_t(a)]] += c;
    }
    for (const auto& [gk, u] : groups) {
      const auto& [rest, deg] = gk;
      const SlotSlice& sl = slot_slice(a, deg);
      std::vector<Q> rhs(sl.keys.size());
      for (const auto& [s, c] : u) {
        auto it = sl.index.find(s);
        if (it == sl.index.end()) throw std::domain_error("casimir: vector leaves the module V(lambda)");
        rhs[it->second] = c;
      }
      auto x = sl.mat.solve(rhs);
      if (!x) throw std::domain_error("casimir: vector leaves the module V(lambda)");
      const ColorSeqVec zr = ColorSeqVec::basis(rest);
      for (std::size_t j = 0; j < x->size(); ++j) {
        if ((*x)[j] == 0) continue;
        const ColorSeq& S = sl.words[j];
        const std::size_t N = S.size();
        for (std::size_t mask = 1; mask < (std::size_t(1) << N); ++mask) {
          ColorSeq T, ST;
          std::size_t last = 0;
          for (std::size_t p = 0; p < N; ++p) {
            if (mask >> p & 1) {
              T.push_back(S[p]);
              last = p;
            } else {
              ST.push_back(S[p]);
            }
          }
          // C(alpha_{l(T)}, lambda - alpha of the tail of S after l(T)).
          const int l = S[last];
          Q coef = pr_.lambda_alpha(a, l);
          for (std::size_t p = last + 1; p < N; ++p) coef -= pr_.alpha_alpha(l, S[p]);
          if (coef == 0) continue;
          ColorSeqVec left = f_word(ST, cd, single_slot(wts, a), ColorSeqVec::unit(1));
          ColorSeqVec right = bracket_word_slot(T, b, cd, wts, zr);
          for (const auto& [lk, lc] : left.terms())
            for (const auto& [rk, rc] : right.terms()) {
              ColorKey k = rk;
              k[std::size_t(a)] = lk[0];
              out.add(k, (*x)[j] * coef * lc * rc);
            }
        }
      }
    }
    return out;
  }

  ColorSeqVec cplus(int nu, int mu, const ColorSeqVec& v) const { return raising(nu, mu, v); }
  ColorSeqVec cminus(int nu, int mu, const ColorSeqVec& v) const { return raising(mu, nu, v); }

  ColorSeqVec apply(int nu, int mu, const ColorSeqVec& v) const {
    ColorSeqVec out = c0(nu, mu, v);
    out += cplus(nu, mu, v);
    out += cminus(nu, mu, v);
    return out;
  }

 private:
  struct SlotSlice {
    std::vector<ColorSeq> words;
    std::vector<ColorSeq> keys;
    std::map<ColorSeq, std::size_t> index;
    Matrix mat;
  };

  const SlotSlice& slot_slice(int slot, const std::vector<int>& deg) const {
    auto ck = std::make_pair(slot, deg);
    auto it = cache_.find(ck);
    if (it != cache_.end()) return it->second;
    SlotSlice s;
    auto slices = generated_submodule(pr_.cartan(), single_slot(pr_.weights(), slot), deg);
    if (const ModuleSlice* ms = find_slice(slices, deg)) {
      std::vector<ColorKey> keys;
      s.mat = vectors_matrix(ms->basis, &keys);
      s.words = ms->words;
      for (std::size_t i = 0; i < keys.size(); ++i) {
        s.keys.push_back(keys[i][0]);
        s.index[keys[i][0]] = i;
      }
    } else {
      s.mat = Matrix(0, 0);
    }
    return cache_.emplace(ck, std::move(s)).first->second;
  }

  Pairing pr_;
  mutable std::map<std::pair<int, std::vector<int>>, SlotSlice> cache_;
};

// ---------------------------------------------------------------------------
// Connection matrices.

struct ConnectionMatrices {
  std::vector<std::string> labels;
  std::map<std::pair<int, int>, Matrix> omega;  // keyed by (nu, mu), nu < mu, 0-based
};

// Coordinates of f(b_j) in the basis b, as columns.  Throws if some image leaves the span.
inline Matrix matrix_on_basis(const std::vector<ColorSeqVec>& basis,
                              const std::function<ColorSeqVec(const ColorSeqVec&)>& f, const std::string& what) {
  const std::size_t d = basis.size();
  Matrix out(d, d);
  if (d == 0) return out;
  std::vector<ColorKey> keys;
  Matrix B = vectors_matrix(basis, &keys);
  std::map<ColorKey, std::size_t> idx;
  for (std::size_t i = 0; i < keys.size(); ++i) idx[keys[i]] = i;
  for (std::size_t j = 0; j < d; ++j) {
    ColorSeqVec img = f(basis[j]);
    std::vector<Q> rhs(keys.size());
    for (const auto& [k, c] : img.terms()) {
      auto it = idx.find(k);
      if (it == idx.end()) throw std::domain_error(what + ": image leaves the span of the basis");
      rhs[it->second] = c;
    }
    auto x = B.solve(rhs);
    if (!x) throw std::domain_error(what + ": image leaves the span of the basis");
    for (std::size_t i = 0; i < d; ++i) out(i, j) = (*x)[i];
  }
  return out;
}

inline std::vector<std::string> basis_labels(const std::vector<ColorSeqVec>& basis) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < basis.size(); ++i) out.push_back("v" + std::to_string(i + 1));
  return out;
}

inline ConnectionMatrices kz_matrices(const CasimirAction& cas, const std::vector<ColorSeqVec>& basis) {
  ConnectionMatrices cm;
  cm.labels = basis_labels(basis);
  const int n = cas.pairing().weights().n();
  for (int nu = 0; nu < n; ++nu)
    for (int mu = nu + 1; mu < n; ++mu)
      cm.omega[{nu, mu}] =
          matrix_on_basis(basis, [&](const ColorSeqVec& v) { return cas.apply(nu, mu, v); }, "kz");
  return cm;
}

struct FlatnessReport {
  bool flat = true;
  int relations = 0;
  std::vector<std::string> failures;
};

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline FlatnessReport flatness_check(const ConnectionMatrices& cm, int n) {
  FlatnessReport rep;
  auto om = [&](int a, int b) -> const Matrix& { return cm.omega.at({std::min(a, b), std::max(a, b)}); };
  auto note = [&](bool ok, const std::string& what) {
    ++rep.relations;
    if (!ok) {
      rep.flat = false;
      rep.failures.push_back(what);
    }
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        note(commutator(om(a, b), om(a, c) + om(b, c)).is_zero(),
             "[O" + std::to_string(a + 1) + std::to_string(b + 1) + ", O" + std::to_string(a + 1) +
                 std::to_string(c + 1) + " + O" + std::to_string(b + 1) + std::to_string(c + 1) + "]");
        for (int d = c + 1; d < n; ++d) {
          if (d == a || d == b) continue;
          note(commutator(om(a, b), om(c, d)).is_zero(), "[O" + std::to_string(a + 1) + std::to_string(b + 1) +
                                                              ", O" + std::to_string(c + 1) + std::to_string(d + 1) +
                                                              "]");
        }
      }
  return rep;
}

// ---------------------------------------------------------------------------
// The Gauss-Manin side.

namespace detail {

inline MultiSeq with_slot(MultiSeq k, int s, Seq q) {
  k[std::size_t(s)] = std::move(q);
  return k;
}

// (z_a - z_b)/(t_i - z_b) zeta_key, where i sits at position pos of slot a.
inline PolyDiff<Q> move_point(const MultiSeq& key, int a, int b, std::size_t pos) {
  const Seq& I = key[std::size_t(a)];
  const ColoredIndex i = I[pos];
  Seq Ippi(I.begin(), I.begin() + long(pos) + 1);
  const Seq Ip(I.begin() + long(pos) + 1, I.end());
  const int n = int(key.size());
  PolyDiff<Q> out = PolyDiff<Q>::zeta(key);
  for (std::size_t cut = 0; cut <= Ip.size(); ++cut) {
    Seq I2(Ip.begin(), Ip.begin() + long(cut)), I1(Ip.begin() + long(cut), Ip.end());
    Seq moved(I2.rbegin(), I2.rend());
    moved.push_back(i);
    MultiSeq extra(static_cast<std::size_t>(n));
    extra[std::size_t(b)] = moved;
    auto prod = shuffle_product(PolyDiff<Q>::zeta(with_slot(key, a, I1)), PolyDiff<Q>::zeta(extra));
    out -= omega_times(Ippi, prod) * Q(cut % 2 ? -1 : 1);
  }
  return out;
}

// (z_a - z_b)/(t_i - t_j) zeta_key with i in slot a (position pi), j in slot b (position pj).
inline PolyDiff<Q> move_pair(const MultiSeq& key, int a, int b, std::size_t pi, std::size_t pj) {
  PolyDiff<Q> out = PolyDiff<Q>::zeta(key);
  auto half = [&](int s, int o, std::size_t p, const ColoredIndex& other) {
    const Seq& I = key[std::size_t(s)];
    const ColoredIndex i = I[p];
    Seq Ippij(I.begin(), I.begin() + long(p) + 1);
    Ippij.push_back(other);
    const Seq Ip(I.begin() + long(p) + 1, I.end());
    (void)o;
    for (std::size_t cut = 0; cut <= Ip.size(); ++cut) {
      Seq I2(Ip.begin(), Ip.begin() + long(cut)), I1(Ip.begin() + long(cut), Ip.end());
      Seq w2(I2.rbegin(), I2.rend());
      w2.push_back(i);
      auto t = omega_times(w2, omega_times(Ippij, PolyDiff<Q>::zeta(with_slot(key, s, I1))));
      out -= t * Q(cut % 2 ? -1 : 1);
    }
  };
  half(a, b, pi, key[std::size_t(b)][pj]);
  half(b, a, pj, key[std::size_t(a)][pi]);
  return out;
}

}  // namespace detail

// For a repetition-free key over n marked points, returns G_{nu,mu} for mu != nu with
// the covariant derivative along z_nu equal to sum_mu G_{nu,mu} / (z_nu - z_mu).
inline std::map<int, PolyDiff<Q>> gm_derivative(int nu, const Pairing& pr, const MultiSeq& key) {
  const int n = int(key.size());
  if (has_repeat(key)) throw std::invalid_argument("gm: key repeats an index");
  std::map<int, PolyDiff<Q>> out;
  const Seq& I = key[std::size_t(nu)];
  for (int mu = 0; mu < n; ++mu) {
    if (mu == nu) continue;
    const Seq& J = key[std::size_t(mu)];
    PolyDiff<Q> g = PolyDiff<Q>::zeta(key, pr.lambda_lambda(nu, mu));
    for (std::size_t p = 0; p < J.size(); ++p)
      g -= detail::move_point(key, mu, nu, p) * pr.lambda_alpha(nu, J[p].color);
    for (std::size_t p = 0; p < I.size(); ++p)
      g -= detail::move_point(key, nu, mu, p) * pr.lambda_alpha(mu, I[p].color);
    for (std::size_t p = 0; p < I.size(); ++p)
      for (std::size_t s = 0; s < J.size(); ++s)
        g += detail::move_pair(key, nu, mu, p, s) * pr.alpha_alpha(I[p].color, J[s].color);
    out.emplace(mu, std::move(g));
  }
  return out;
}

inline std::map<int, PolyDiff<Q>> gm_derivative(int nu, const Pairing& pr, const PolyDiff<Q>& a) {
  std::map<int, PolyDiff<Q>> out;
  for (int mu = 0; mu < a.n(); ++mu)
    if (mu != nu) out.emplace(mu, PolyDiff<Q>(a.n()));
  for (const auto& [k, c] : a.terms())
    for (auto& [mu, g] : gm_derivative(nu, pr, k)) out.at(mu) += g * c;
  return out;
}

// -eta(d~_nu) for the given key, read off from the full logarithmic form eta in
// the rational model.  Independent of the formal expansion above.
inline RatFunc eta_contraction(int nu, const Pairing& pr, const MultiSeq& key) {
  const int n = int(key.size());
  std::map<ColoredIndex, int> slot_of;
  Seq all;
  for (int s = 0; s < n; ++s)
    for (const auto& x : key[std::size_t(s)]) {
      slot_of[x] = s;
      all.push_back(x);
    }
  auto moves = [&](const ColoredIndex& x) { return slot_of.at(x) == nu ? 1 : 0; };
  RatFunc eta;
  // sum_{kappa, i} C(alpha_i, lambda_kappa) d(t_i - z_kappa)/(t_i - z_kappa)
  for (const auto& i : all)
    for (int k = 0; k < n; ++k) {
      int v = moves(i) - (k == nu ? 1 : 0);
      if (v != 0) eta += RatFunc(pr.lambda_alpha(k, i.color) * v) * RatFunc::inverse(t_of(i) - z_of(k));
    }
  // -1/2 sum_{i != j} C(alpha_i, alpha_j) d(t_i - t_j)/(t_i - t_j)
  for (const auto& i : all)
    for (const auto& j : all) {
      if (i == j) continue;
      int v = moves(i) - moves(j);
      if (v != 0)
        eta -= RatFunc(pr.alpha_alpha(i.color, j.color) * v / 2) * RatFunc::inverse(t_of(i) - t_of(j));
    }
  // -sum_{kappa < mu} C(lambda_kappa, lambda_mu) d(z_kappa - z_mu)/(z_kappa - z_mu)
  for (int k = 0; k < n; ++k)
    for (int m = k + 1; m < n; ++m) {
      int v = (k == nu ? 1 : 0) - (m == nu ? 1 : 0);
      if (v != 0) eta -= RatFunc(pr.lambda_lambda(k, m) * v) * RatFunc::inverse(z_of(k) - z_of(m));
    }
  return -eta;
}

// Matrices of G_{nu,mu} on a space of color-sequence vectors embedded over the
// standard pool of multi-degree m.
inline ConnectionMatrices gm_matrices(const Pairing& pr, const std::vector<ColorSeqVec>& basis,
                                      const std::vector<int>& m) {
  ConnectionMatrices cm;
  cm.labels = basis_labels(basis);
  const int n = pr.weights().n();
  const auto pool = standard_pool(m);
  std::vector<std::map<int, PolyDiff<Q>>> images;
  for (int nu = 0; nu < n; ++nu)
    for (int mu = nu + 1; mu < n; ++mu) {
      cm.omega[{nu, mu}] = matrix_on_basis(
          basis,
          [&](const ColorSeqVec& v) {
            auto g = gm_derivative(nu, pr, expand(v, pool));
            try {
              return contract(g.at(mu), pool);
            } catch (const std::domain_error&) {
              throw std::domain_error("not invariant under GM");
            }
          },
          "gm");
    }
  return cm;
}

}  // namespace pdiff
