#pragma once
// The rational model: polydifferentials as explicit rational coefficients of dt_X.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdiff/polydiff.hpp"
#include "pdiff/ratfunc.hpp"

namespace pdiff {

class ConcretePolyDiff {
 public:
  const std::map<Support, RatFunc>& terms() const { return terms_; }

  void add(const Support& X, const RatFunc& f) {
    if (f.is_trivially_zero()) return;
    auto [it, inserted] = terms_.emplace(X, f);
    if (!inserted) {
      it->second += f;
      if (it->second.is_trivially_zero()) terms_.erase(it);
    }
  }

  RatFunc coeff(const Support& X) const {
    auto it = terms_.find(X);
    return it == terms_.end() ? RatFunc() : it->second;
  }

  ConcretePolyDiff& operator+=(const ConcretePolyDiff& o) {
    for (const auto& [X, f] : o.terms_) add(X, f);
    return *this;
  }
  ConcretePolyDiff& operator-=(const ConcretePolyDiff& o) {
    for (const auto& [X, f] : o.terms_) add(X, -f);
    return *this;
  }
  friend ConcretePolyDiff operator+(ConcretePolyDiff a, const ConcretePolyDiff& b) { return a += b; }
  friend ConcretePolyDiff operator-(ConcretePolyDiff a, const ConcretePolyDiff& b) { return a -= b; }

  // Pointwise product; dt_x dt_x = 0 kills overlapping supports.
  friend ConcretePolyDiff operator*(const ConcretePolyDiff& a, const ConcretePolyDiff& b) {
    ConcretePolyDiff out;
    for (const auto& [Xa, fa] : a.terms_)
      for (const auto& [Xb, fb] : b.terms_)
        if (disjoint(Xa, Xb)) out.add(support_union(Xa, Xb), fa * fb);
    return out;
  }

  ConcretePolyDiff times(const RatFunc& g) const {
    ConcretePolyDiff out;
    for (const auto& [X, f] : terms_) out.add(X, f * g);
    return out;
  }

  static ConcretePolyDiff function(const RatFunc& f) {
    ConcretePolyDiff out;
    out.add(Support{}, f);
    return out;
  }

  // dt_X with coefficient 1.
  static ConcretePolyDiff dt(const Support& X) {
    Support s = X;
    std::sort(s.begin(), s.end());
    ConcretePolyDiff out;
    out.add(s, RatFunc(Q(1)));
    return out;
  }

  ConcretePolyDiff substitute(Var v, const Poly& value) const {
    ConcretePolyDiff out;
    for (const auto& [X, f] : terms_) out.add(X, f.substitute(v, value));
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [X, f] : terms_) {
      out += "{";
      for (std::size_t i = 0; i < X.size(); ++i) out += (i ? "," : "") + to_string(X[i]);
      out += "}: " + f.str() + "\n";
    }
    return out;
  }

 private:
  std::map<Support, RatFunc> terms_;
};

inline Poly t_of(const ColoredIndex& x) { return pvar(var_t(x)); }
inline Poly z_of(int slot) { return pvar(var_z(slot)); }

// Coefficient of zeta_I(z_slot) as a rational function.
inline RatFunc realize_seq(const Seq& I, int slot) {
  RatFunc f(Q(1));
  for (std::size_t j = 0; j + 1 < I.size(); ++j) f = f * RatFunc::inverse(t_of(I[j]) - t_of(I[j + 1]));
  if (!I.empty()) f = f * RatFunc::inverse(t_of(I.back()) - z_of(slot));
  return f;
}

inline RatFunc realize_key(const MultiSeq& key) {
  RatFunc f(Q(1));
  for (int s = 0; s < int(key.size()); ++s) f = f * realize_seq(key[s], s);
  return f;
}

template <class C>
ConcretePolyDiff realize(const PolyDiff<C>& a) {
  ConcretePolyDiff out;
  for (const auto& [k, c] : a.terms()) out.add(support_of(k), realize_key(k) * RatFunc(coeff_to_poly(c)));
  return out;
}

// omega_I = dt_{i_N} ... dt_{i_2} / prod (t_{i_k} - t_{i_{k-1}}); omega_(i) = 1.
inline ConcretePolyDiff realize_omega(const Seq& I) {
  if (I.empty()) return ConcretePolyDiff();
  RatFunc f(Q(1));
  for (std::size_t j = 0; j + 1 < I.size(); ++j) f = f * RatFunc::inverse(t_of(I[j]) - t_of(I[j + 1]));
  ConcretePolyDiff out;
  out.add(support_of(Seq(I.begin(), I.end() - 1)), f);
  return out;
}

// ---------------------------------------------------------------------------
// Residues in the rational model, acting on the component containing dt_x.

inline ConcretePolyDiff concrete_residue(const ConcretePolyDiff& a, const ColoredIndex& x, const Poly& point) {
  ConcretePolyDiff out;
  const Var v = var_t(x);
  for (const auto& [X, f] : a.terms()) {
    if (!std::binary_search(X.begin(), X.end(), x)) continue;
    out.add(support_minus(X, x), f.residue(v, point));
  }
  return out;
}

inline ConcretePolyDiff concrete_residue_at_infinity(const ConcretePolyDiff& a, const ColoredIndex& x) {
  ConcretePolyDiff out;
  const Var v = var_t(x);
  for (const auto& [X, f] : a.terms()) {
    if (!std::binary_search(X.begin(), X.end(), x)) continue;
    out.add(support_minus(X, x), f.residue_at_infinity(v));
  }
  return out;
}

// E_x = -res_{t_x = oo}
inline ConcretePolyDiff concrete_E(const ConcretePolyDiff& a, const ColoredIndex& x) {
  ConcretePolyDiff r = concrete_residue_at_infinity(a, x);
  ConcretePolyDiff out;
  for (const auto& [X, f] : r.terms()) out.add(X, -f);
  return out;
}

inline ConcretePolyDiff concrete_Eprime(const ConcretePolyDiff& a, const ColoredIndex& x, int slot) {
  return concrete_residue(a, x, z_of(slot));
}

inline ConcretePolyDiff concrete_res_diag(const ConcretePolyDiff& a, const ColoredIndex& x, const ColoredIndex& y) {
  return concrete_residue(a, x, t_of(y));
}

inline ConcretePolyDiff concrete_iterated_residue(const Seq& I, const ConcretePolyDiff& a) {
  ConcretePolyDiff cur = a;
  for (std::size_t j = 0; j + 1 < I.size(); ++j) cur = concrete_res_diag(cur, I[j], I[j + 1]);
  return cur;
}

// Phi_x as multiplication by (sum_nu p_{x,nu}/(t_x - z_nu) - sum_{j in X} c_{x,j}/(t_x - t_j)) dt_x.
template <class C>
ConcretePolyDiff concrete_phi(const ColoredIndex& x, const PhiParams<C>& prm, int n, const ConcretePolyDiff& a) {
  ConcretePolyDiff out;
  for (const auto& [X, f] : a.terms()) {
    if (std::binary_search(X.begin(), X.end(), x)) continue;
    RatFunc g;
    for (int s = 0; s < n; ++s) g += RatFunc(coeff_to_poly(prm.p(x, s))) * RatFunc::inverse(t_of(x) - z_of(s));
    for (const auto& j : X) g -= RatFunc(coeff_to_poly(prm.c(x, j))) * RatFunc::inverse(t_of(x) - t_of(j));
    Support nx = X;
    nx.insert(std::upper_bound(nx.begin(), nx.end(), x), x);
    out.add(nx, f * g);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Identity testing.

struct IdentityOptions {
  int trials = 20;
  std::uint64_t seed = 1;
  // Exact normalization is tried when a coefficient has at most this many terms.
  std::size_t exact_term_limit = 24;
  // If true, never attempt exact normalization.
  bool random_only = false;
};

struct IdentityResult {
  bool equal = true;
  bool exact = true;            // every support decided by exact normalization
  int samples = 0;
  std::string witness;          // first failing support / point
};

inline bool rat_is_zero(const RatFunc& f, const IdentityOptions& opt, Rng& rng, IdentityResult& res) {
  if (f.is_trivially_zero()) return true;
  if (!opt.random_only && f.size() <= opt.exact_term_limit) return f.is_zero_exact();
  res.exact = false;
  auto vars = f.variables();
  int found = 0;
  for (int attempt = 0; found < opt.trials; ++attempt) {
    if (attempt > 50 * opt.trials + 100) throw std::runtime_error("degenerate sample: no valid evaluation point");
    std::map<Var, Q> pt;
    for (Var v : vars) pt[v] = rng.rational(1000000, 1);
    if (f.denominators_vanish_at(pt)) continue;
    ++found;
    ++res.samples;
    if (f.evaluate_full(pt) != 0) {
      res.witness = "nonzero at a sample point";
      return false;
    }
  }
  return true;
}

inline IdentityResult identity_test(const ConcretePolyDiff& lhs, const ConcretePolyDiff& rhs,
                                    const IdentityOptions& opt = {}) {
  IdentityResult res;
  Rng rng(opt.seed);
  ConcretePolyDiff diff = lhs - rhs;
  for (const auto& [X, f] : diff.terms()) {
    if (!rat_is_zero(f, opt, rng, res)) {
      res.equal = false;
      std::string xs;
      for (const auto& x : X) xs += to_string(x) + " ";
      res.witness = "support {" + xs + "}: " + res.witness;
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Moebius pullback t -> (a t + b)/(c t + d) on every t and z variable.

struct Moebius {
  Q a, b, c, d;
  Q det() const { return a * d - b * c; }
};

namespace detail {
// Image of an affine factor under the substitution, as numerator/denominator factors.
inline void pull_factor(const Poly& f, const Moebius& s, Poly& num_out, std::vector<Poly>& den_out) {
  auto vars = f.variables();
  std::vector<Var> vs(vars.begin(), vars.end());
  auto lin = [&](Var v) { return pvar(v) * s.c + Poly(s.d); };
  if (vs.size() == 1) {
    Var v = vs[0];
    Q k = linear_coefficient(f, v);
    Q kappa = Q(-f.substitute(v, Poly(Q(0))).constant_term() / k);  // f = k (v - kappa)
    num_out = (pvar(v) * Q(s.a - kappa * s.c) + Poly(Q(s.b - kappa * s.d))) * k;
    den_out.push_back(lin(v));
    return;
  }
  if (vs.size() == 2 && f.substitute(vs[0], Poly(Q(0))).substitute(vs[1], Poly(Q(0))).is_zero() &&
      linear_coefficient(f, vs[0]) == -linear_coefficient(f, vs[1])) {
    Q k = linear_coefficient(f, vs[0]);
    num_out = (pvar(vs[0]) - pvar(vs[1])) * Q(k * s.det());
    den_out.push_back(lin(vs[0]));
    den_out.push_back(lin(vs[1]));
    return;
  }
  throw std::invalid_argument("moebius_pullback: unsupported denominator factor " + f.str());
}
}  // namespace detail

inline RatFunc moebius_pullback(const RatFunc& f, const Moebius& s) {
  if (s.det() == 0) throw std::invalid_argument("moebius_pullback: singular matrix");
  RatFunc out;
  for (const auto& [den, num] : f.terms()) {
    // Numerator: v^e -> (a v + b)^e (c v + d)^(D-e) / (c v + d)^D.
    RatFunc term(Q(1));
    Poly pulled;
    auto vars = num.variables();
    std::map<Var, unsigned> D;
    for (Var v : vars)
      if (is_t_var(v) || is_z_var(v)) D[v] = num.degree_in(v);
    for (const auto& [m, coef] : num.terms()) {
      Poly t(coef);
      std::map<Var, unsigned> used;
      for (const auto& [v, e] : m) {
        if (!D.count(v)) {
          t = t * poly_pow(pvar(v), e);
          continue;
        }
        used[v] = e;
      }
      for (const auto& [v, Dv] : D) {
        unsigned e = used.count(v) ? used[v] : 0;
        t = t * poly_pow(pvar(v) * s.a + Poly(s.b), e) * poly_pow(pvar(v) * s.c + Poly(s.d), Dv - e);
      }
      pulled += t;
    }
    term = RatFunc(pulled);
    for (const auto& [v, Dv] : D)
      for (unsigned i = 0; i < Dv; ++i) term = term * (s.c == 0 ? RatFunc(Q(1 / s.d)) : RatFunc::inverse(pvar(v) * s.c + Poly(s.d)));
    for (const auto& [fac, mult] : den) {
      Poly n;
      std::vector<Poly> ds;
      detail::pull_factor(fac, s, n, ds);
      for (int i = 0; i < mult; ++i) {
        if (n.is_constant()) term = term * RatFunc(Q(1 / n.constant_term()));
        else term = term * RatFunc::inverse(n);
        for (const auto& g : ds) term = term * RatFunc(g);
      }
    }
    out += term;
  }
  return out;
}

inline ConcretePolyDiff moebius_pullback(const ConcretePolyDiff& a, const Moebius& s) {
  ConcretePolyDiff out;
  for (const auto& [X, f] : a.terms()) {
    RatFunc g = moebius_pullback(f, s);
    for (const auto& x : X) {
      // dt_x -> det/(c t_x + d)^2 dt_x
      RatFunc jac(s.det());
      if (s.c == 0) jac = RatFunc(Q(s.det() / (s.d * s.d)));
      else jac = jac * RatFunc::inverse(t_of(x) * s.c + Poly(s.d)) * RatFunc::inverse(t_of(x) * s.c + Poly(s.d));
      g = g * jac;
    }
    out.add(X, g);
  }
  return out;
}

}  // namespace pdiff
