#include <gtest/gtest.h>

#include "pdiff/invariance.hpp"
#include "pdiff/residues.hpp"

using namespace pdiff;

namespace {

void expect_pass(const Check& c) { EXPECT_TRUE(c.pass) << c.name << ": " << c.detail; }

WeightData sl2w(std::vector<int> ls) {
  WeightData w;
  for (int l : ls) w.lambda.push_back({l});
  return w;
}

const Divisor* find_label(const std::vector<BoundaryResidue>& rs, Divisor::Kind kind, std::size_t size, int nu = -1) {
  for (const auto& r : rs)
    if (r.divisor.kind == kind && r.divisor.X.size() == size && r.divisor.nu == nu) return &r.divisor;
  return nullptr;
}

Q value_of(const std::vector<BoundaryResidue>& rs, const Divisor* d) {
  for (const auto& r : rs)
    if (&r.divisor == d) return r.direct;
  throw std::logic_error("label not found");
}

}  // namespace

TEST(Eta, Coefficients) {
  const Q c = make_q(1, 3);
  Pairing pr(CartanData::sl2(), sl2w({1, 1, 2}), CasimirSpec::uniform(1, c));
  const auto pool = standard_pool({2});
  const EtaForm eta = eta_form(pr, pool);
  std::size_t seen = 0;
  for (const auto& t : eta.terms) {
    switch (t.kind) {
      case LogTerm::Kind::PointPoint: EXPECT_EQ(t.coef, -c); break;  // -1/2 * 2c
      case LogTerm::Kind::PointMarked: EXPECT_EQ(t.coef, c * (t.nu == 2 ? 2 : 1)); break;
      case LogTerm::Kind::MarkedMarked: EXPECT_EQ(t.coef, -pr.lambda_lambda(t.nu, t.mu)); break;
    }
    ++seen;
  }
  EXPECT_EQ(seen, 3u * 2 + 2 + 3);
  // C(lambda_1, lambda_2) for sl(2): c * 1 * 1 / 2.
  EXPECT_EQ(pr.lambda_lambda(0, 1), c / 2);
  EXPECT_TRUE(identity_test(eta.xi, xi_from_components(pr, pool)).equal);
}

TEST(Eta, XiOfThreeColorsSl3) {
  Pairing pr(CartanData::sl3(), WeightData{{{1, 1}, {1, 1}}}, CasimirSpec::uniform(2, make_q(1, 4)));
  const auto pool = standard_pool({2, 2});
  EXPECT_TRUE(identity_test(eta_form(pr, pool).xi, xi_from_components(pr, pool)).equal);
}

TEST(BoundaryResidue, Sl2Examples) {
  for (const Q c : {Q(1), make_q(1, 3), make_q(2, 7)}) {
    Pairing pr(CartanData::sl2(), sl2w({1, 1, 1, 1}), CasimirSpec::uniform(1, c));
    const auto rs = boundary_residues(pr, standard_pool({2}));
    EXPECT_EQ(value_of(rs, find_label(rs, Divisor::Kind::Diagonal, 2)), 2 * c);
    EXPECT_EQ(value_of(rs, find_label(rs, Divisor::Kind::Infinity, 2)), 6 * c);
    EXPECT_EQ(value_of(rs, find_label(rs, Divisor::Kind::Marked, 1, 0)), -c);
    EXPECT_EQ(value_of(rs, find_label(rs, Divisor::Kind::Infinity, 1)), 2 * c);
  }
}

TEST(BoundaryResidue, DirectMatchesClosedForm) {
  struct Case {
    CartanData cd;
    WeightData wts;
  };
  const std::vector<Case> cases = {
      {CartanData::sl2(), sl2w({1, 1})},       {CartanData::sl2(), sl2w({1, 1, 1, 1})},
      {CartanData::sl2(), sl2w({1, 1, 2})},    {CartanData::sl2(), sl2w({2, 2, 2, 2})},
      {CartanData::sl2(), sl2w({3, 1, 2})},    {CartanData::sl3(), WeightData{{{1, 0}, {0, 1}}}},
      {CartanData::sl3(), WeightData{{{1, 1}, {1, 1}}}}, {CartanData::sl3(), WeightData{{{1, 0}, {1, 0}, {1, 0}}}},
  };
  for (const auto& cs : cases)
    for (const Q q : {Q(1), make_q(1, 3)}) expect_pass(check_boundary_residues(cs.cd, cs.wts, CasimirSpec::uniform(cs.cd.r, q)));
}

TEST(BoundaryResidue, OrdersAlongDivisors) {
  const ColoredIndex x{0, 0}, y{0, 1}, w{0, 2};
  const Divisor diag{Divisor::Kind::Diagonal, {x, y}};
  const Divisor inf{Divisor::Kind::Infinity, {x}};
  const Divisor mk{Divisor::Kind::Marked, {x, y}, 1};
  EXPECT_EQ(divisor_order(t_of(x) - t_of(y), diag), 1);
  EXPECT_EQ(divisor_order(t_of(x) - t_of(w), diag), 0);
  EXPECT_EQ(divisor_order(t_of(x) - z_of(0), diag), 0);
  EXPECT_EQ(divisor_order(t_of(x) - t_of(w), inf), -1);
  EXPECT_EQ(divisor_order(t_of(y) - z_of(0), inf), 0);
  EXPECT_EQ(divisor_order(t_of(y) - z_of(1), mk), 1);
  EXPECT_EQ(divisor_order(t_of(y) - z_of(0), mk), 0);
  EXPECT_EQ(divisor_order(z_of(0) - z_of(1), mk), 0);
}

TEST(BoundaryResidue, ClosedFormNeedsWeightZeroAtInfinity) {
  // Sum of weights 3 is not 2 alpha: the infinity formula does not apply and is not reported.
  Pairing pr(CartanData::sl2(), sl2w({1, 2}), CasimirSpec::uniform(1, Q(1)));
  for (const auto& r : boundary_residues(pr, standard_pool({2}))) {
    if (r.divisor.kind == Divisor::Kind::Infinity) EXPECT_FALSE(r.closed.has_value());
    else EXPECT_TRUE(r.agree()) << r.divisor.label();
  }
  EXPECT_THROW(check_boundary_residues(CartanData::sl2(), sl2w({1, 2}), CasimirSpec::uniform(1, Q(1))),
               std::invalid_argument);
}

TEST(BoundaryResidue, CorruptedTermIsDetected) {
  Pairing pr(CartanData::sl2(), sl2w({1, 1, 1, 1}), CasimirSpec::uniform(1, Q(1)));
  const auto pool = standard_pool({2});
  EtaForm eta = eta_form(pr, pool);
  for (auto& t : eta.terms)
    if (t.kind == LogTerm::Kind::PointMarked && t.nu == 2) t.coef += 1;
  const Divisor d{Divisor::Kind::Marked, {ColoredIndex{0, 0}}, 2};
  EXPECT_NE(minus_residue_direct(eta, d), *minus_residue_closed(pr, d, true));
}

TEST(Integrality, Classification) {
  EXPECT_EQ(classify_value(Q(0)), Integrality::Zero);
  EXPECT_TRUE(in_nonnegative_part(Integrality::Zero));
  EXPECT_FALSE(in_positive_part(Integrality::Zero));
  EXPECT_EQ(classify_value(2 * make_q(1, 2)), Integrality::PositiveInteger);
  EXPECT_EQ(classify_value(2 * make_q(1, 3)), Integrality::NonInteger);
  EXPECT_EQ(classify_value(Q(-3)), Integrality::NegativeInteger);

  // sl(2), weights (1,1,0), c = 1/2: the residue at the third point is zero,
  // the diagonal of the single index pool is absent, Doo({x}) = 2c = 1.
  Pairing pr(CartanData::sl2(), sl2w({1, 1, 0}), CasimirSpec::uniform(1, make_q(1, 2)));
  for (const auto& cdv : integrality_classification(pr, standard_pool({1}))) {
    const auto& d = cdv.divisor;
    if (d.kind == Divisor::Kind::Marked && d.nu == 2) EXPECT_EQ(cdv.cls, Integrality::Zero);
    if (d.kind == Divisor::Kind::Marked && d.nu != 2) EXPECT_EQ(cdv.cls, Integrality::NonInteger);  // -1/2
    if (d.kind == Divisor::Kind::Infinity) EXPECT_EQ(cdv.cls, Integrality::PositiveInteger);
  }
}

TEST(Aomoto, DegreeZeroGivesMinusXi) {
  Pairing pr(CartanData::sl2(), sl2w({1, 1}), CasimirSpec::uniform(1, make_q(1, 3)));
  const auto pool = standard_pool({1});
  const auto d1 = aomoto_differential(pr, pool, PolyDiff<Q>::unit(2));
  ConcretePolyDiff minus_xi;
  minus_xi -= eta_form(pr, pool).xi;
  EXPECT_TRUE(identity_test(realize(d1), minus_xi).equal);
  EXPECT_THROW(aomoto_differential(pr, standard_pool({2}), PolyDiff<Q>::unit(2)), std::invalid_argument);
}

TEST(Aomoto, MatchesProductWithXi) {
  struct Case {
    CartanData cd;
    WeightData wts;
    Q q;
  };
  const std::vector<Case> cases = {{CartanData::sl2(), sl2w({1, 1, 1, 1}), make_q(1, 3)},
                                   {CartanData::sl2(), sl2w({1, 1, 2}), Q(1)},
                                   {CartanData::sl3(), WeightData{{{1, 0}, {0, 1}}}, make_q(1, 4)}};
  for (const auto& cs : cases) {
    Pairing pr(cs.cd, cs.wts, CasimirSpec::uniform(cs.cd.r, cs.q));
    const auto pool = standard_pool(*weight_zero_degree(cs.cd, cs.wts));
    const auto xi = eta_form(pr, pool).xi;
    for (const auto& key : codegree_one_keys(pool, cs.wts.n())) {
      const auto a = PolyDiff<Q>::zeta(key);
      ConcretePolyDiff rhs;
      rhs -= xi * realize(a);
      EXPECT_TRUE(identity_test(realize(aomoto_differential(pr, pool, a)), rhs).equal) << to_string(key);
    }
  }
}

TEST(Aomoto, InvariantsInjectIntoCoprimitives) {
  Pairing pr(CartanData::sl2(), sl2w({1, 1, 1, 1}), CasimirSpec::uniform(1, make_q(1, 3)));
  const auto rep = coprimitive_report(pr);
  EXPECT_EQ(rep.invariants, 2u);  // Clebsch-Gordan: two copies of the trivial rep in V1^(x4)
  EXPECT_TRUE(rep.symmetric_part_matches);
  EXPECT_TRUE(rep.injective());
  EXPECT_EQ(rep.top_dim, 4u * 3 / 2 + 4);  // keys of degree 2 over four slots
  EXPECT_GE(rep.coprimitive_dim, rep.invariants);

  for (const auto& wts : {sl2w({1, 1}), sl2w({1, 1, 2}), sl2w({2, 2})}) {
    const auto r = coprimitive_report(Pairing(CartanData::sl2(), wts, CasimirSpec::uniform(1, Q(1))));
    EXPECT_TRUE(r.symmetric_part_matches);
    EXPECT_TRUE(r.injective());
    EXPECT_EQ(r.invariants, 1u);
  }
  const auto r3 = coprimitive_report(
      Pairing(CartanData::sl3(), WeightData{{{1, 0}, {0, 1}}}, CasimirSpec::uniform(2, make_q(1, 4))));
  EXPECT_TRUE(r3.symmetric_part_matches);
  EXPECT_TRUE(r3.injective());
  EXPECT_EQ(r3.invariants, 1u);
}

TEST(Invariance, MoebiusFixesPrimitives) {
  const auto v1 = realized_primitives(CartanData::sl2(), sl2w({1, 1, 1, 1}), {2});
  const auto v2 = realized_primitives(CartanData::sl2(), sl2w({1, 1, 2}), {2});
  const auto v3 = realized_primitives(CartanData::sl3(), WeightData{{{1, 0}, {0, 1}}}, {1, 1});
  EXPECT_GE(v1.size(), 2u + 3 + 1);  // weight 0, 2 and 4 primitives
  for (const auto* vs : {&v1, &v2, &v3}) {
    expect_pass(check_moebius_invariance(*vs, 5));
    expect_pass(check_infinitesimal_invariance(*vs));
  }
}

TEST(Invariance, NonPrimitiveIsMoved) {
  // f in the first slot only: not killed by e.
  ColorSeqVec v(2);
  v.add(ColorKey{{0}, {}}, Q(1));
  const std::vector<RealizedVector> vs{{"f(x)1", realize(expand(v, standard_pool({1})))}};
  EXPECT_FALSE(check_moebius_invariance(vs, 5).pass);
  EXPECT_FALSE(check_infinitesimal_invariance(vs).pass);
}

TEST(Invariance, TranslationsFixEverything) {
  ColorSeqVec v(2);
  v.add(ColorKey{{0, 0}, {0}}, Q(1));
  const auto f = realize(expand(v, standard_pool({3})));
  EXPECT_TRUE(identity_test(moebius_pullback(f, {1, 7, 0, 1}), f).equal);
}

TEST(Invariance, DerivativeOfRationalFunction) {
  const ColoredIndex x{0, 0};
  const Var t = var_t(x);
  // d/dt (t^2/(t - z)^2) = 2t/(t - z)^2 - 2t^2/(t - z)^3
  RatFunc f = RatFunc(t_of(x) * t_of(x)) * RatFunc::inverse(t_of(x) - z_of(0)) * RatFunc::inverse(t_of(x) - z_of(0));
  RatFunc g = RatFunc(t_of(x) * Q(2)) * RatFunc::inverse(t_of(x) - z_of(0)) * RatFunc::inverse(t_of(x) - z_of(0)) -
              RatFunc(t_of(x) * t_of(x) * Q(2)) * RatFunc::inverse(t_of(x) - z_of(0)) *
                  RatFunc::inverse(t_of(x) - z_of(0)) * RatFunc::inverse(t_of(x) - z_of(0));
  EXPECT_TRUE(identity_test(ConcretePolyDiff::function(derivative(f, t)), ConcretePolyDiff::function(g)).equal);
}

TEST(Invariance, ResidueTheorem) {
  expect_pass(check_residue_theorem(realized_primitives(CartanData::sl2(), sl2w({1, 1, 1, 1}), {2})));
  expect_pass(check_residue_theorem(realized_primitives(CartanData::sl3(), WeightData{{{1, 1}, {1, 1}}}, {1, 1})));
}
