#pragma once
// Sparse multivariate polynomials over Q.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pdiff/index.hpp"
#include "pdiff/rational.hpp"

namespace pdiff {

using Monomial = std::vector<std::pair<Var, unsigned>>;  // sorted by variable

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == a.end() || j->first < i->first) {
      out.push_back(*j++);
    } else {
      out.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return out;
}

class Poly {
 public:
  Poly() = default;
  Poly(const Q& c) {  // NOLINT(google-explicit-constructor): scalars embed
    if (c != 0) terms_.emplace(Monomial{}, c);
  }
  Poly(long c) : Poly(Q(c)) {}  // NOLINT
  Poly(int c) : Poly(Q(c)) {}   // NOLINT

  static Poly variable(Var v) {
    Poly p;
    p.terms_.emplace(Monomial{{v, 1u}}, Q(1));
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }
  Q constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Q(0) : it->second;
  }
  const std::map<Monomial, Q>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& m, const Q& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Poly& operator*=(const Q& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& kv : terms_) kv.second *= s;
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& kv : a.terms_) kv.second = -kv.second;
    return a;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(monomial_mul(ma, mb), ca * cb);
    return out;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend Poly operator*(Poly a, const Q& s) { return a *= s; }
  friend Poly operator*(const Q& s, Poly a) { return a *= s; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const Poly& a, const Poly& b) { return a.terms_ < b.terms_; }

  unsigned degree_in(Var v) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_)
      for (const auto& [w, e] : m)
        if (w == v && e > d) d = e;
    return d;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) {
      unsigned s = 0;
      for (const auto& [w, e] : m) s += e;
      if (s > d) d = s;
    }
    return d;
  }

  std::set<Var> variables() const {
    std::set<Var> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [w, e] : m) out.insert(w);
    return out;
  }

  // Coefficients as a polynomial in v: result[e] multiplies v^e.
  std::vector<Poly> coefficients_in(Var v) const {
    std::vector<Poly> out(degree_in(v) + 1);
    for (const auto& [m, c] : terms_) {
      Monomial rest;
      unsigned e = 0;
      for (const auto& [w, k] : m) {
        if (w == v) e = k; else rest.emplace_back(w, k);
      }
      out[e].add_term(rest, c);
    }
    return out;
  }

  static Poly from_coefficients(Var v, const std::vector<Poly>& cs) {
    Poly out;
    Poly power(Q(1));
    const Poly x = variable(v);
    for (const auto& c : cs) {
      out += c * power;
      power = power * x;
    }
    return out;
  }

  Poly substitute(Var v, const Poly& value) const {
    auto cs = coefficients_in(v);
    if (cs.size() == 1) return *this;
    Poly out = cs.back();
    for (std::size_t e = cs.size() - 1; e-- > 0;) out = out * value + cs[e];
    return out;
  }

  // Substitutes the variables present in the map; others stay symbolic.
  Poly evaluate(const std::map<Var, Q>& point) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
      Q coef = c;
      Monomial rest;
      for (const auto& [w, e] : m) {
        auto it = point.find(w);
        if (it == point.end()) {
          rest.emplace_back(w, e);
        } else {
          Q p;
          mpz_class num, den;
          mpz_pow_ui(num.get_mpz_t(), it->second.get_num_mpz_t(), e);
          mpz_pow_ui(den.get_mpz_t(), it->second.get_den_mpz_t(), e);
          p = Q(num, den);
          coef *= p;
        }
      }
      out.add_term(rest, coef);
    }
    return out;
  }

  Q evaluate_full(const std::map<Var, Q>& point) const {
    Poly r = evaluate(point);
    if (!r.is_constant()) throw std::invalid_argument("evaluate_full: point misses variables");
    return r.constant_term();
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      std::string cs = c.get_str();
      if (!first) out += (c < 0 ? " - " : " + ");
      else if (c < 0) out += "-";
      first = false;
      Q a = abs(c);
      bool unit = (a == 1) && !m.empty();
      if (!unit) out += a.get_str();
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (!unit || i > 0) out += "*";
        out += var_name(m[i].first);
        if (m[i].second > 1) out += "^" + std::to_string(m[i].second);
      }
    }
    return out;
  }

 private:
  std::map<Monomial, Q> terms_;
};

inline Poly pvar(Var v) { return Poly::variable(v); }

// Coefficient-ring adapters used by the templated algebra code.
inline bool coeff_is_zero(const Q& q) { return q == 0; }
inline bool coeff_is_zero(const Poly& p) { return p.is_zero(); }
inline Poly coeff_to_poly(const Q& q) { return Poly(q); }
inline const Poly& coeff_to_poly(const Poly& p) { return p; }
inline std::string coeff_str(const Q& q) { return q.get_str(); }
inline std::string coeff_str(const Poly& p) { return p.str(); }

}  // namespace pdiff
