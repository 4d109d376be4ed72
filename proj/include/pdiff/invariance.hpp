#pragma once
// Checks in the rational model: Moebius invariance of realized primitive vectors,
// its infinitesimal form, the residue theorem, and the boundary residue table.

#include <set>
#include <string>
#include <vector>

#include "pdiff/concrete.hpp"
#include "pdiff/identities.hpp"
#include "pdiff/kacmoody.hpp"
#include "pdiff/residues.hpp"

namespace pdiff {

struct RealizedVector {
  std::string label;
  ConcretePolyDiff form;
};

// Realized primitive vectors of the module generated by the highest weight
// vectors, in every multi-degree up to `bound`, expanded over a pool of that degree.
inline std::vector<RealizedVector> realized_primitives(const CartanData& cd, const WeightData& wts,
                                                       const std::vector<int>& bound) {
  std::vector<RealizedVector> out;
  TensorModule tm = tensor_module(cd, wts, bound);
  for (const auto& sl : tm.slices) {
    const auto prim = primitive_subspace(cd.r, sl.basis);
    const auto pool = standard_pool(sl.degree);
    for (std::size_t a = 0; a < prim.size(); ++a) {
      std::string lbl = "deg(";
      for (std::size_t k = 0; k < sl.degree.size(); ++k) lbl += (k ? "," : "") + std::to_string(sl.degree[k]);
      out.push_back({lbl + ")#" + std::to_string(a), realize(expand(prim[a], pool))});
    }
  }
  return out;
}

inline Moebius random_moebius(Rng& rng) {
  for (;;) {
    Moebius s{Q(rng.uniform(-9, 9)), Q(rng.uniform(-9, 9)), Q(rng.uniform(1, 9)), Q(rng.uniform(-9, 9))};
    if (rng.uniform(0, 1)) s.c = -s.c;
    if (s.det() != 0) return s;
  }
}

inline Check check_moebius_invariance(const std::vector<RealizedVector>& vs, int maps = 5, std::uint64_t seed = 17) {
  Check ch{"Moebius pullback fixes primitives"};
  Rng rng(seed);
  std::vector<Moebius> sigmas;
  for (int k = 0; k < maps; ++k) sigmas.push_back(random_moebius(rng));
  IdentityOptions opt;
  opt.seed = seed;
  for (const auto& v : vs)
    for (const auto& s : sigmas) {
      ++ch.cases;
      if (!identity_test(moebius_pullback(v.form, s), v.form, opt).equal)
        ch.fail(v.label + " sigma=(" + s.a.get_str() + "," + s.b.get_str() + "," + s.c.get_str() + "," +
                s.d.get_str() + ")");
    }
  return ch;
}

// Derivative at s = 0 of the pullback under t -> t/(s t + 1), applied to every
// t- and z-coordinate: the vector field -v^2 d/dv, with dt_x picking up -2 t_x.
inline ConcretePolyDiff lower_triangular_derivative(const ConcretePolyDiff& a) {
  ConcretePolyDiff out;
  for (const auto& [X, f] : a.terms()) {
    RatFunc g;
    for (Var v : f.variables()) {
      if (!is_t_var(v) && !is_z_var(v)) continue;
      g -= RatFunc(pvar(v) * pvar(v)) * derivative(f, v);
    }
    for (const auto& x : X) g -= f * RatFunc(t_of(x) * Q(2));
    out.add(X, g);
  }
  return out;
}

inline Check check_infinitesimal_invariance(const std::vector<RealizedVector>& vs) {
  Check ch{"lower-triangular generator kills primitives"};
  for (const auto& v : vs) {
    ++ch.cases;
    if (!identity_test(lower_triangular_derivative(v.form), ConcretePolyDiff()).equal) ch.fail(v.label);
  }
  return ch;
}

// Poles in v of a rational function, as points v = point.
inline std::vector<Poly> finite_poles(const RatFunc& f, Var v) {
  std::set<Poly> pts;
  for (const auto& [den, num] : f.terms())
    for (const auto& [fac, m] : den) {
      const Q k = linear_coefficient(fac, v);
      if (k == 0) continue;
      pts.insert((pvar(v) - fac * Q(1 / k)));
    }
  return {pts.begin(), pts.end()};
}

// For every coefficient and every coordinate, the residues over all poles
// on the sphere (including infinity) sum to zero.
inline Check check_residue_theorem(const std::vector<RealizedVector>& vs) {
  Check ch{"residue theorem on realized vectors"};
  for (const auto& v : vs)
    for (const auto& [X, f] : v.form.terms())
      for (const auto& x : X) {
        const Var t = var_t(x);
        RatFunc total = f.residue_at_infinity(t);
        for (const auto& p : finite_poles(f, t)) total += f.residue(t, p);
        ++ch.cases;
        if (!identity_test(ConcretePolyDiff::function(total), ConcretePolyDiff()).equal)
          ch.fail(v.label + " coordinate " + to_string(x));
      }
  return ch;
}

// Direct against closed form for every divisor over the weight-zero pool.
inline Check check_boundary_residues(const CartanData& cd, const WeightData& wts, const CasimirSpec& spec) {
  Check ch{"boundary residues of eta"};
  const auto m = weight_zero_degree(cd, wts);
  if (!m) throw std::invalid_argument("boundary residues: weights admit no weight-zero pool");
  Pairing pr(cd, wts, spec);
  const auto pool = standard_pool(*m);
  for (const auto& b : boundary_residues(pr, pool)) {
    ++ch.cases;
    if (!b.closed) ch.fail(b.divisor.label() + ": no closed form");
    else if (!b.agree())
      ch.fail(b.divisor.label() + ": direct " + b.direct.get_str() + " closed " + b.closed->get_str());
  }
  const EtaForm eta = eta_form(pr, pool);
  ++ch.cases;
  if (!identity_test(eta.xi, xi_from_components(pr, pool)).equal) ch.fail("xi against sum q_k xi_k");
  return ch;
}

}  // namespace pdiff
