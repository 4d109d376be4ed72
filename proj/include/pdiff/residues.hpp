#pragma once
// The logarithmic form eta over a finite pool, its residues along the boundary
// divisors Delta(X), Delta_oo(X), Delta_nu(X), and the Aomoto differential -xi.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "pdiff/concrete.hpp"
#include "pdiff/connection.hpp"
#include "pdiff/kacmoody.hpp"

namespace pdiff {

using ColorPool = std::vector<std::vector<ColoredIndex>>;

inline std::vector<ColoredIndex> flatten(const ColorPool& pool) {
  std::vector<ColoredIndex> out;
  for (const auto& col : pool) out.insert(out.end(), col.begin(), col.end());
  std::sort(out.begin(), out.end());
  return out;
}

// One summand coef * d log(L) of eta.
struct LogTerm {
  enum class Kind { PointMarked, PointPoint, MarkedMarked };
  Kind kind;
  ColoredIndex i{}, j{};
  int nu = -1, mu = -1;
  Q coef;

  Poly form() const {
    switch (kind) {
      case Kind::PointMarked: return t_of(i) - z_of(nu);
      case Kind::PointPoint: return t_of(i) - t_of(j);
      case Kind::MarkedMarked: return z_of(nu) - z_of(mu);
    }
    return Poly();
  }

  std::string label() const {
    switch (kind) {
      case Kind::PointMarked: return "t" + to_string(i) + "-z" + std::to_string(nu + 1);
      case Kind::PointPoint: return "t" + to_string(i) + "-t" + to_string(j);
      case Kind::MarkedMarked: return "z" + std::to_string(nu + 1) + "-z" + std::to_string(mu + 1);
    }
    return "";
  }
};

struct EtaForm {
  std::vector<LogTerm> terms;  // point pairs appear once per ordered pair
  ConcretePolyDiff xi;         // the part along the fibre, a degree-one form
};

inline EtaForm eta_form(const Pairing& pr, const ColorPool& pool) {
  const auto M = flatten(pool);
  const int n = pr.weights().n();
  EtaForm eta;
  for (int nu = 0; nu < n; ++nu)
    for (const auto& i : M)
      eta.terms.push_back({LogTerm::Kind::PointMarked, i, {}, nu, -1, pr.lambda_alpha(nu, i.color)});
  for (const auto& i : M)
    for (const auto& j : M)
      if (i != j)
        eta.terms.push_back(
            {LogTerm::Kind::PointPoint, i, j, -1, -1, Q(-pr.alpha_alpha(i.color, j.color) / 2)});
  for (int nu = 0; nu < n; ++nu)
    for (int mu = nu + 1; mu < n; ++mu)
      eta.terms.push_back({LogTerm::Kind::MarkedMarked, {}, {}, nu, mu, -pr.lambda_lambda(nu, mu)});

  // The dt-part: d log(t_i - t_j) contributes dt_i/(t_i - t_j) and dt_j/(t_j - t_i).
  for (const auto& term : eta.terms) {
    if (term.kind == LogTerm::Kind::MarkedMarked) continue;
    const RatFunc inv = RatFunc::inverse(term.form());
    eta.xi.add(Support{term.i}, inv * RatFunc(term.coef));
    if (term.kind == LogTerm::Kind::PointPoint) eta.xi.add(Support{term.j}, inv * RatFunc(-term.coef));
  }
  return eta;
}

// xi = sum_k q_k xi_k with xi_k built from the Cartan data alone.
inline ConcretePolyDiff xi_from_components(const Pairing& pr, const ColorPool& pool) {
  const auto M = flatten(pool);
  const auto& cd = pr.cartan();
  const auto& wts = pr.weights();
  ConcretePolyDiff out;
  for (int k = 0; k < cd.r; ++k) {
    const Q qk = pr.spec().q.at(std::size_t(k));
    for (const auto& i : M) {
      if (i.color != k) continue;
      RatFunc g;
      for (int nu = 0; nu < wts.n(); ++nu) g += RatFunc(Q(wts.at(nu, k))) * RatFunc::inverse(t_of(i) - z_of(nu));
      for (const auto& j : M)
        if (j != i) g -= RatFunc(Q(cd(k, j.color))) * RatFunc::inverse(t_of(i) - t_of(j));
      out.add(Support{i}, g * RatFunc(qk));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary divisors and their residues.

struct Divisor {
  enum class Kind { Diagonal, Infinity, Marked };
  Kind kind;
  Support X;
  int nu = -1;

  std::string label() const {
    std::string xs;
    for (std::size_t a = 0; a < X.size(); ++a) xs += (a ? "," : "") + to_string(X[a]);
    switch (kind) {
      case Kind::Diagonal: return "D({" + xs + "})";
      case Kind::Infinity: return "Doo({" + xs + "})";
      case Kind::Marked: return "D" + std::to_string(nu + 1) + "({" + xs + "})";
    }
    return "";
  }
};

namespace detail {
inline Var eps_var() { return var_param("__eps"); }
inline Var base_var() { return var_param("__base"); }
inline Var blowup_var(const ColoredIndex& x) { return var_param("__u" + to_string(x)); }
}  // namespace detail

// Order of vanishing of an affine form along the divisor, read off from the
// blow-up parametrization: t_x = base + eps u_x near a diagonal, t_x = z_nu + eps u_x
// near a marked point and t_x = u_x / eps near infinity, with u generic.
inline int divisor_order(const Poly& L, const Divisor& D) {
  const Var eps = detail::eps_var();
  Poly f = L;
  if (D.kind == Divisor::Kind::Infinity) {
    // After t_x -> u_x / eps the form is lead / eps + (terms free of eps).
    Poly lead;
    for (const auto& x : D.X) lead += pvar(detail::blowup_var(x)) * linear_coefficient(L, var_t(x));
    return lead.is_zero() ? 0 : -1;
  }
  const Poly centre = D.kind == Divisor::Kind::Diagonal ? pvar(detail::base_var()) : z_of(D.nu);
  for (const auto& x : D.X) f = f.substitute(var_t(x), centre + pvar(eps) * pvar(detail::blowup_var(x)));
  const auto cs = f.coefficients_in(eps);
  for (std::size_t e = 0; e < cs.size(); ++e)
    if (!cs[e].is_zero()) return int(e);
  throw std::invalid_argument("divisor_order: form vanishes identically");
}

struct BoundaryResidue {
  Divisor divisor;
  Q direct;                   // -res computed from the log terms
  std::optional<Q> closed;    // the quadratic-form value, when it applies
  bool agree() const { return !closed || *closed == direct; }
};

inline Q minus_residue_direct(const EtaForm& eta, const Divisor& D) {
  Q res(0);
  for (const auto& term : eta.terms) {
    const int ord = divisor_order(term.form(), D);
    if (ord != 0) res += term.coef * Q(ord);
  }
  return -res;
}

// Sum of lambda_nu equals alpha_M, needed for the closed form at infinity.
inline bool pool_has_weight_zero(const Pairing& pr, const ColorPool& pool) {
  const auto& cd = pr.cartan();
  for (int k = 0; k < cd.r; ++k) {
    long lhs = pr.weights().total(k), rhs = 0;
    for (int l = 0; l < cd.r && l < int(pool.size()); ++l) rhs += long(cd(k, l)) * long(pool[std::size_t(l)].size());
    if (lhs != rhs) return false;
  }
  return true;
}

inline std::optional<Q> minus_residue_closed(const Pairing& pr, const Divisor& D, bool weight_zero) {
  Q aa(0), rho_a(0);
  for (const auto& x : D.X) {
    rho_a += pr.spec().q.at(std::size_t(x.color));
    for (const auto& y : D.X) aa += pr.alpha_alpha(x.color, y.color);
  }
  const Q half = aa / 2;
  switch (D.kind) {
    case Divisor::Kind::Diagonal: return Q(half - rho_a);
    case Divisor::Kind::Infinity:
      if (!weight_zero) return std::nullopt;
      return Q(half + rho_a);
    case Divisor::Kind::Marked: {
      Q la(0);
      for (const auto& x : D.X) la += pr.lambda_alpha(D.nu, x.color);
      return Q(half - rho_a - la);
    }
  }
  return std::nullopt;
}

inline std::vector<Divisor> boundary_divisors(const ColorPool& pool, int n) {
  const auto M = flatten(pool);
  std::vector<Divisor> out;
  const std::size_t N = M.size();
  for (std::size_t mask = 1; mask < (std::size_t(1) << N); ++mask) {
    Support X;
    for (std::size_t b = 0; b < N; ++b)
      if (mask >> b & 1) X.push_back(M[b]);
    if (X.size() >= 2) out.push_back({Divisor::Kind::Diagonal, X});
    out.push_back({Divisor::Kind::Infinity, X});
    for (int nu = 0; nu < n; ++nu) out.push_back({Divisor::Kind::Marked, X, nu});
  }
  return out;
}

inline std::vector<BoundaryResidue> boundary_residues(const Pairing& pr, const ColorPool& pool) {
  const EtaForm eta = eta_form(pr, pool);
  const bool wz = pool_has_weight_zero(pr, pool);
  std::vector<BoundaryResidue> out;
  for (const auto& D : boundary_divisors(pool, pr.weights().n()))
    out.push_back({D, minus_residue_direct(eta, D), minus_residue_closed(pr, D, wz)});
  return out;
}

// ---------------------------------------------------------------------------
// Integrality of the residue values.

enum class Integrality { PositiveInteger, Zero, NegativeInteger, NonInteger };

inline Integrality classify_value(const Q& v) {
  if (v.get_den() != 1) return Integrality::NonInteger;
  if (v > 0) return Integrality::PositiveInteger;
  if (v == 0) return Integrality::Zero;
  return Integrality::NegativeInteger;
}

inline std::string to_string(Integrality c) {
  switch (c) {
    case Integrality::PositiveInteger: return "pos-integer";
    case Integrality::Zero: return "nonneg-integer";
    case Integrality::NegativeInteger: return "integer";
    case Integrality::NonInteger: return "non-integer";
  }
  return "";
}

inline bool in_nonnegative_part(Integrality c) { return c == Integrality::PositiveInteger || c == Integrality::Zero; }
inline bool in_positive_part(Integrality c) { return c == Integrality::PositiveInteger; }

struct ClassifiedDivisor {
  Divisor divisor;
  Q value;
  Integrality cls;
};

inline std::vector<ClassifiedDivisor> integrality_classification(const Pairing& pr, const ColorPool& pool) {
  std::vector<ClassifiedDivisor> out;
  for (const auto& b : boundary_residues(pr, pool)) out.push_back({b.divisor, b.direct, classify_value(b.direct)});
  return out;
}

// ---------------------------------------------------------------------------
// The Aomoto differential a -> -xi a.  In degree |M| - 1 the product with xi is
// sum_x q_x Phi_x with p = lambda(coroot) and c = Cartan entries; in lower degrees
// Phi_x drops the terms dt_j/(t_x - t_j) for j outside the support, so the
// formal version is restricted to that degree.

inline PolyDiff<Q> aomoto_differential(const Pairing& pr, const ColorPool& pool, const PolyDiff<Q>& a) {
  const auto M = flatten(pool);
  const std::size_t m = M.size();
  const auto prm = rep_params(pr.cartan(), pr.weights());
  PolyDiff<Q> out(a.n());
  for (const auto& [k, c] : a.terms()) {
    if (total_length(k) + 1 != m) throw std::invalid_argument("aomoto_differential: degree must be |M| - 1");
    for (const auto& x : support_of(k))
      if (!std::binary_search(M.begin(), M.end(), x))
        throw std::invalid_argument("aomoto_differential: index outside the pool");
  }
  for (const auto& x : M) out -= phi(x, prm, a) * pr.spec().q.at(std::size_t(x.color));
  return out;
}

// All keys of degree |M| - 1 over the pool.
inline std::vector<MultiSeq> codegree_one_keys(const ColorPool& pool, int n) {
  std::vector<MultiSeq> out;
  std::vector<int> m;
  for (const auto& col : pool) m.push_back(int(col.size()));
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] == 0) continue;
    auto d = m;
    --d[k];
    for (const auto& ck : enumerate_keys(n, d)) lift_key(ck, pool, [&](const MultiSeq& key) { out.push_back(key); });
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct CoprimitiveReport {
  std::size_t top_dim = 0;          // dim of the weight-zero part of the free module
  std::size_t image_rank = 0;       // rank of sum_k f_k into it
  std::size_t coprimitive_dim = 0;
  std::size_t invariants = 0;
  std::size_t invariants_in_quotient = 0;
  std::size_t form_image_rank = 0;  // rank of -xi on forms of degree |M| - 1
  std::size_t form_invariants_in_quotient = 0;
  bool symmetric_part_matches = true;  // -xi on expansions equals -sum_k q_k f_k
  bool injective() const {
    return invariants_in_quotient == invariants && form_invariants_in_quotient == invariants;
  }
};

inline CoprimitiveReport coprimitive_report(const Pairing& pr) {
  const auto& cd = pr.cartan();
  const auto& wts = pr.weights();
  CoprimitiveReport rep;
  const auto inv = invariants(cd, wts);
  if (inv.degree.empty()) return rep;
  const auto& m = inv.degree;
  const ColorPool pool = standard_pool(m);
  const int n = wts.n();

  // On the free module: weight-zero keys modulo the images of the f_k.
  const auto top_keys = enumerate_keys(n, m);
  rep.top_dim = top_keys.size();
  std::vector<ColorSeqVec> images;
  for (int k = 0; k < cd.r; ++k) {
    if (m[std::size_t(k)] == 0) continue;
    auto d = m;
    --d[std::size_t(k)];
    for (const auto& key : enumerate_keys(n, d)) {
      ColorSeqVec u(n);
      u.add(key, Q(1));
      ColorSeqVec fu = f_action(k, cd, wts, u);
      images.push_back(fu);
      PolyDiff<Q> lhs = aomoto_differential(pr, pool, expand(u, pool));
      PolyDiff<Q> rhs = expand(fu, pool) * Q(-pr.spec().q.at(std::size_t(k)));
      if (!(lhs == rhs)) rep.symmetric_part_matches = false;
    }
  }
  rep.image_rank = span_rank(images);
  rep.coprimitive_dim = rep.top_dim - rep.image_rank;
  rep.invariants = inv.basis.size();
  auto with_inv = images;
  with_inv.insert(with_inv.end(), inv.basis.begin(), inv.basis.end());
  rep.invariants_in_quotient = span_rank(with_inv) - rep.image_rank;

  // On forms: the image of -xi from degree |M| - 1, against expanded invariants.
  std::vector<PolyDiff<Q>> form_images;
  for (const auto& key : codegree_one_keys(pool, n))
    form_images.push_back(aomoto_differential(pr, pool, PolyDiff<Q>::zeta(key)));
  auto rank_of = [](const std::vector<PolyDiff<Q>>& vs) {
    std::map<MultiSeq, std::size_t> col;
    for (const auto& v : vs)
      for (const auto& [k, c] : v.terms()) col.emplace(k, col.size());
    Matrix mat(vs.size(), col.size());
    for (std::size_t r = 0; r < vs.size(); ++r)
      for (const auto& [k, c] : vs[r].terms()) mat(r, col.at(k)) = c;
    return mat.rank();
  };
  rep.form_image_rank = rank_of(form_images);
  auto forms_with_inv = form_images;
  for (const auto& v : inv.basis) forms_with_inv.push_back(expand(v, pool));
  rep.form_invariants_in_quotient = rank_of(forms_with_inv) - rep.form_image_rank;
  return rep;
}

}  // namespace pdiff
