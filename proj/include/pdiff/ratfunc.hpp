#pragma once
// Rational functions whose denominators are products of affine-linear forms.
//
// A RatFunc is kept as a sum of terms numerator/denominator, grouped by the
// (factored) denominator.  Factors are never multiplied out unless a common
// denominator is explicitly requested.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdiff/poly.hpp"

namespace pdiff {

struct HigherOrderPole : std::domain_error {
  using std::domain_error::domain_error;
};

// Affine-linear factors are normalized so that the coefficient of their
// smallest variable is 1.  Returns (scale, normalized) with L = scale*normalized.
inline std::pair<Q, Poly> normalize_linear(const Poly& L) {
  if (L.total_degree() > 1) throw std::invalid_argument("normalize_linear: not affine");
  auto vars = L.variables();
  if (vars.empty()) throw std::invalid_argument("normalize_linear: constant form");
  Var v = *vars.begin();
  Q s = L.coefficients_in(v).at(1).constant_term();
  Poly n = L * Q(1 / s);
  return {s, n};
}

inline Q linear_coefficient(const Poly& L, Var v) {
  auto cs = L.coefficients_in(v);
  return cs.size() > 1 ? cs[1].constant_term() : Q(0);
}

inline Q q_pow(const Q& q, unsigned e) {
  Q r(1);
  for (unsigned i = 0; i < e; ++i) r *= q;
  return r;
}

inline Poly poly_pow(const Poly& p, unsigned e) {
  Poly r(Q(1));
  for (unsigned i = 0; i < e; ++i) r = r * p;
  return r;
}

using Den = std::map<Poly, int>;  // normalized linear factor -> multiplicity

class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(const Poly& p) {  // NOLINT(google-explicit-constructor)
    if (!p.is_zero()) terms_.emplace(Den{}, p);
  }
  RatFunc(const Q& q) : RatFunc(Poly(q)) {}  // NOLINT

  // 1/L for an affine form L.
  static RatFunc inverse(const Poly& L) {
    auto [s, n] = normalize_linear(L);
    RatFunc r;
    r.add_term(Den{{n, 1}}, Poly(Q(1 / s)));
    return r;
  }

  const std::map<Den, Poly>& terms() const { return terms_; }
  bool is_trivially_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Den& d, const Poly& num) {
    if (num.is_zero()) return;
    auto [it, inserted] = terms_.emplace(d, num);
    if (!inserted) {
      it->second += num;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  RatFunc& operator+=(const RatFunc& o) {
    for (const auto& [d, p] : o.terms_) add_term(d, p);
    return *this;
  }
  RatFunc& operator-=(const RatFunc& o) {
    for (const auto& [d, p] : o.terms_) add_term(d, -p);
    return *this;
  }
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator-(RatFunc a) {
    for (auto& kv : a.terms_) kv.second = -kv.second;
    return a;
  }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    RatFunc out;
    for (const auto& [da, pa] : a.terms_) {
      for (const auto& [db, pb] : b.terms_) {
        Den d = da;
        for (const auto& [f, m] : db) d[f] += m;
        out.add_term(d, pa * pb);
      }
    }
    return out;
  }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

  std::set<Var> variables() const {
    std::set<Var> out;
    for (const auto& [d, p] : terms_) {
      auto pv = p.variables();
      out.insert(pv.begin(), pv.end());
      for (const auto& [f, m] : d) {
        auto fv = f.variables();
        out.insert(fv.begin(), fv.end());
      }
    }
    return out;
  }

  // Substitutes an affine expression for v.
  RatFunc substitute(Var v, const Poly& value) const {
    RatFunc out;
    for (const auto& [d, p] : terms_) {
      Poly num = p.substitute(v, value);
      Den nd;
      for (const auto& [f, m] : d) {
        Poly g = f.substitute(v, value);
        if (g.is_zero()) throw HigherOrderPole("substitution lands on a polar locus");
        if (g.is_constant()) {
          num *= q_pow(Q(1 / g.constant_term()), unsigned(m));
        } else {
          auto [s, n] = normalize_linear(g);
          num *= q_pow(Q(1 / s), unsigned(m));
          nd[n] += m;
        }
      }
      out.add_term(nd, num);
    }
    return out;
  }

  RatFunc evaluate(const std::map<Var, Q>& point) const {
    RatFunc cur = *this;
    for (const auto& [v, q] : point) cur = cur.substitute(v, Poly(q));
    return cur;
  }

  // Full evaluation; throws if a denominator vanishes.
  Q evaluate_full(const std::map<Var, Q>& point) const {
    Q total(0);
    for (const auto& [d, p] : terms_) {
      Q den(1);
      for (const auto& [f, m] : d) {
        Q fv = f.evaluate_full(point);
        if (fv == 0) throw HigherOrderPole("evaluation at a pole");
        den *= q_pow(fv, unsigned(m));
      }
      total += p.evaluate_full(point) / den;
    }
    return total;
  }

  bool denominators_vanish_at(const std::map<Var, Q>& point) const {
    for (const auto& [d, p] : terms_)
      for (const auto& [f, m] : d)
        if (f.evaluate_full(point) == 0) return true;
    return false;
  }

  // One term over the least common denominator.
  RatFunc combined() const {
    if (terms_.size() <= 1) return *this;
    Den lcm;
    for (const auto& [d, p] : terms_)
      for (const auto& [f, m] : d) lcm[f] = std::max(lcm[f], m);
    Poly num;
    for (const auto& [d, p] : terms_) {
      Poly t = p;
      for (const auto& [f, m] : lcm) {
        auto it = d.find(f);
        int have = it == d.end() ? 0 : it->second;
        if (m > have) t = t * poly_pow(f, unsigned(m - have));
      }
      num += t;
    }
    RatFunc out;
    out.add_term(lcm, num);
    return out;
  }

  // Combines and cancels every linear factor that divides the numerator.
  RatFunc reduced() const {
    RatFunc c = combined();
    if (c.terms_.empty()) return c;
    Den d = c.terms_.begin()->first;
    Poly num = c.terms_.begin()->second;
    Den nd;
    for (const auto& [f, m] : d) {
      int left = m;
      while (left > 0) {
        Poly q;
        if (!divide_linear(num, f, q)) break;
        num = q;
        --left;
      }
      if (left > 0) nd[f] = left;
    }
    RatFunc out;
    out.add_term(nd, num);
    return out;
  }

  bool is_zero_exact() const { return combined().terms_.empty(); }

  // Residue of f dv at v = point (point affine, free of v).
  RatFunc residue(Var v, const Poly& point) const {
    RatFunc out;
    RatFunc bad;
    for (const auto& [d, p] : terms_) {
      int m = 0;
      for (const auto& [f, mult] : d)
        if (vanishes_on(f, v, point)) m += mult;
      if (m == 0) continue;
      if (m > 1) {
        bad.add_term(d, p);
        continue;
      }
      out += simple_residue(d, p, v, point);
    }
    if (!bad.terms_.empty()) {
      RatFunc r = bad.reduced();
      for (const auto& [d, p] : r.terms_) {
        int m = 0;
        for (const auto& [f, mult] : d)
          if (vanishes_on(f, v, point)) m += mult;
        if (m > 1) throw HigherOrderPole("higher-order pole at " + var_name(v) + " = " + point.str());
        if (m == 1) out += simple_residue(d, p, v, point);
      }
    }
    return out;
  }

  // Residue of f dv at v = infinity, via the expansion of f in 1/v.
  RatFunc residue_at_infinity(Var v) const {
    RatFunc out;
    for (const auto& [d, p] : terms_) {
      std::vector<Poly> us;  // -beta/kappa for each factor kappa*v + beta, with multiplicity
      Q kappa_prod(1);
      Den rest;
      for (const auto& [f, m] : d) {
        Q kappa = linear_coefficient(f, v);
        if (kappa == 0) {
          rest[f] = m;
          continue;
        }
        Poly beta = f - Poly::variable(v) * kappa;
        for (int i = 0; i < m; ++i) {
          us.push_back(beta * Q(-1 / kappa));
          kappa_prod *= kappa;
        }
      }
      const int deg_d = int(us.size());
      auto ns = p.coefficients_in(v);
      const int top = int(ns.size()) - 1 - deg_d + 1;
      if (top < 0) continue;
      // h[s] = complete homogeneous symmetric polynomial of degree s in us.
      std::vector<Poly> h(std::size_t(top) + 1);
      h[0] = Poly(Q(1));
      for (const auto& u : us) {
        std::vector<Poly> nh = h;
        for (int s = 1; s <= top; ++s) {
          Poly acc;
          Poly upow(Q(1));
          for (int k = 1; k <= s; ++k) {
            upow = upow * u;
            acc += upow * h[std::size_t(s - k)];
          }
          nh[std::size_t(s)] = h[std::size_t(s)] + acc;
        }
        h = std::move(nh);
      }
      Poly coef;
      for (int e = 0; e < int(ns.size()); ++e) {
        int s = e - deg_d + 1;
        if (s >= 0) coef += ns[std::size_t(e)] * h[std::size_t(s)];
      }
      out.add_term(rest, coef * Q(-1 / kappa_prod));
    }
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [d, p] : terms_) {
      if (!first) out += " + ";
      first = false;
      out += "(" + p.str() + ")";
      for (const auto& [f, m] : d) {
        out += "/(" + f.str() + ")";
        if (m > 1) out += "^" + std::to_string(m);
      }
    }
    return out;
  }

 private:
  static bool vanishes_on(const Poly& f, Var v, const Poly& point) {
    if (linear_coefficient(f, v) == 0) return false;
    return f.substitute(v, point).is_zero();
  }

  static RatFunc simple_residue(const Den& d, const Poly& p, Var v, const Poly& point) {
    Den rest;
    Q kappa(0);
    for (const auto& [f, m] : d) {
      if (vanishes_on(f, v, point)) kappa = linear_coefficient(f, v);
      else rest[f] = m;
    }
    RatFunc t;
    t.add_term(rest, p * Q(1 / kappa));
    return t.substitute(v, point);
  }

  // Exact division of num by the normalized affine form f, if possible.
  static bool divide_linear(const Poly& num, const Poly& f, Poly& quotient) {
    Var v = *f.variables().begin();
    Poly r = f - Poly::variable(v);  // f = v + r
    if (!num.substitute(v, -r).is_zero()) return false;
    auto cs = num.coefficients_in(v);
    const std::size_t D = cs.size() - 1;
    if (D == 0) return false;
    std::vector<Poly> q(D);
    q[D - 1] = cs[D];
    for (std::size_t e = D - 1; e >= 1; --e) q[e - 1] = cs[e] - r * q[e];
    quotient = Poly::from_coefficients(v, q);
    return true;
  }

  std::map<Den, Poly> terms_;
};

inline Poly derivative(const Poly& p, Var v) {
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    Monomial rest;
    unsigned e = 0;
    for (const auto& [w, k] : m) {
      if (w == v) {
        e = k;
        if (k > 1) rest.emplace_back(w, k - 1);
      } else {
        rest.emplace_back(w, k);
      }
    }
    if (e > 0) out.add_term(rest, c * Q(long(e)));
  }
  return out;
}

// Partial derivative; a factor L^m contributes -m L'/L with L' constant.
inline RatFunc derivative(const RatFunc& f, Var v) {
  RatFunc out;
  for (const auto& [den, num] : f.terms()) {
    out.add_term(den, derivative(num, v));
    for (const auto& [fac, mult] : den) {
      const Q k = linear_coefficient(fac, v);
      if (k == 0) continue;
      Den d = den;
      d[fac] += 1;
      out.add_term(d, num * Q(-k * mult));
    }
  }
  return out;
}

}  // namespace pdiff
