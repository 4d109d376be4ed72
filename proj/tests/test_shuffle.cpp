#include <gtest/gtest.h>

#include <algorithm>

#include "pdiff/concrete.hpp"
#include "pdiff/polydiff.hpp"

using namespace pdiff;

namespace {

ColoredIndex ix(int k) { return ColoredIndex{0, k}; }
Seq sq(std::initializer_list<int> ks) {
  Seq s;
  for (int k : ks) s.push_back(ix(k));
  return s;
}
using PD = PolyDiff<Q>;
PD z1(std::initializer_list<int> ks) { return PD::zeta1(sq(ks)); }

// Oracle: every permutation of a+b keeping both internal orders, found by brute force.
std::vector<Seq> brute_shuffles(const Seq& a, const Seq& b) {
  Seq all = concat(a, b);
  std::vector<int> pos(all.size());
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = int(i);
  std::vector<Seq> out;
  do {
    // pos[j] = which original slot goes to position j
    int ia = -1, ib = int(a.size()) - 1;
    bool ok = true;
    for (int p : pos) {
      if (p < int(a.size())) {
        ok = ok && p > ia;
        ia = p;
      } else {
        ok = ok && p > ib;
        ib = p;
      }
    }
    if (ok) {
      Seq s;
      for (int p : pos) s.push_back(all[std::size_t(p)]);
      out.push_back(s);
    }
  } while (std::next_permutation(pos.begin(), pos.end()));
  return out;
}

PD random_element(Rng& rng, int pool, int max_deg, int terms) {
  PD out(1);
  for (int t = 0; t < terms; ++t) {
    int len = int(rng.uniform(0, max_deg));
    std::vector<int> ks(static_cast<std::size_t>(pool));
    for (int i = 0; i < pool; ++i) ks[std::size_t(i)] = i;
    std::shuffle(ks.begin(), ks.end(), rng.engine());
    Seq s;
    for (int i = 0; i < len; ++i) s.push_back(ix(ks[std::size_t(i)]));
    out.add(MultiSeq{s}, rng.nonzero_rational());
  }
  return out;
}

}  // namespace

TEST(Shuffle, ZetaNormalization) {
  EXPECT_EQ(PD::zeta(MultiSeq{sq({1, 1}), {}}).size(), 0u);
  EXPECT_EQ(PD::zeta(MultiSeq{{}, {}}), PD::unit(2));
}

TEST(Shuffle, ProductExamples) {
  EXPECT_EQ(shuffle_product(z1({1}), z1({2})), z1({1, 2}) + z1({2, 1}));
  EXPECT_TRUE(shuffle_product(z1({1}), z1({1})).is_zero());
  EXPECT_EQ(shuffle_product(z1({2, 1}), z1({3})), z1({2, 1, 3}) + z1({2, 3, 1}) + z1({3, 2, 1}));
}

TEST(Shuffle, AgreesWithBruteForceEnumeration) {
  std::vector<Seq> cases = {sq({}), sq({1}), sq({1, 2}), sq({1, 2, 3})};
  std::vector<Seq> others = {sq({}), sq({4}), sq({4, 5}), sq({5, 4, 6})};
  for (const auto& a : cases) {
    for (const auto& b : others) {
      auto x = shuffles(a, b);
      auto y = brute_shuffles(a, b);
      std::sort(x.begin(), x.end());
      std::sort(y.begin(), y.end());
      EXPECT_EQ(x, y);
    }
  }
}

TEST(Shuffle, CoproductExamples) {
  auto d = coproduct(z1({2, 1}));
  PolyDiffTensor<Q> expect;
  tensor_add(expect, MultiSeq{{}}, MultiSeq{sq({2, 1})}, Q(1));
  tensor_add(expect, MultiSeq{sq({2})}, MultiSeq{sq({1})}, Q(1));
  tensor_add(expect, MultiSeq{sq({2, 1})}, MultiSeq{{}}, Q(1));
  EXPECT_EQ(d, expect);
  auto one = coproduct(PD::unit());
  ASSERT_EQ(one.size(), 1u);
  auto lhs = coproduct(shuffle_product(z1({1}), z1({2})));
  auto rhs = tensor_product(coproduct(z1({1})), coproduct(z1({2})));
  EXPECT_EQ(lhs, rhs);
}

TEST(Shuffle, BialgebraLawsOnRandomElements) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    PD a = random_element(rng, 6, 2, 3), b = random_element(rng, 6, 2, 3), c = random_element(rng, 6, 1, 2);
    EXPECT_EQ(shuffle_product(a, b), shuffle_product(b, a));
    EXPECT_EQ(shuffle_product(shuffle_product(a, b), c), shuffle_product(a, shuffle_product(b, c)));
    EXPECT_EQ(shuffle_product(PD::unit(), a), a);
    EXPECT_EQ(coproduct(shuffle_product(a, b)), tensor_product(coproduct(a), coproduct(b)));
  }
}

TEST(Shuffle, OmegaTimesExamples) {
  EXPECT_EQ(omega_times(sq({1, 2}), z1({2})), z1({1, 2}));
  EXPECT_EQ(omega_times(sq({2}), z1({2, 1})), z1({2, 1}));
  EXPECT_EQ(omega_times(sq({3, 1}), z1({2, 1})), z1({3, 2, 1}) + z1({2, 3, 1}));
  EXPECT_THROW(omega_times(Seq{}, z1({1})), std::invalid_argument);
  // Rational model: omega_(3,1) * zeta_(2,1).
  auto lhs = realize_omega(sq({3, 1})) * realize(z1({2, 1}));
  auto rhs = realize(z1({3, 2, 1}) + z1({2, 3, 1}));
  EXPECT_TRUE(identity_test(lhs, rhs).equal);
}

TEST(Shuffle, Component) {
  EXPECT_EQ(component(z1({1}) + z1({2}), Support{ix(1)}), z1({1}));
  EXPECT_EQ(component(PD::unit(), Support{}), PD::unit());
  EXPECT_TRUE(component(z1({2, 1}), Support{ix(1)}).is_zero());
}

TEST(Residues, FormalExamples) {
  EXPECT_EQ(residue_at_infinity(ix(1), z1({1, 2})), z1({2}));
  EXPECT_TRUE(residue_at_infinity(ix(1), z1({2, 1})).is_zero());
  EXPECT_TRUE(residue_at_infinity(ix(1), PD::unit()).is_zero());
  EXPECT_EQ(residue_at_marked(ix(1), 0, z1({2, 1})), z1({2}));
  EXPECT_TRUE(residue_at_marked(ix(1), 0, z1({1, 2})).is_zero());
  EXPECT_EQ(residue_diag(ix(1), ix(2), z1({3, 1, 2})), z1({3, 2}));
  EXPECT_EQ(residue_diag(ix(1), ix(2), z1({3, 2, 1})), -z1({3, 2}));
  EXPECT_TRUE(residue_diag(ix(1), ix(2), z1({1, 3, 2})).is_zero());
  EXPECT_THROW(residue_diag(ix(1), ix(1), z1({1})), std::invalid_argument);
}

TEST(Residues, RationalModelExamples) {
  // res_{t1=z1} 1/(t1 - z1) = 1
  RatFunc f = RatFunc::inverse(t_of(ix(1)) - z_of(0));
  EXPECT_TRUE((f.residue(var_t(ix(1)), z_of(0)) - RatFunc(Q(1))).is_zero_exact());
  auto r = concrete_res_diag(realize(z1({2, 1})), ix(2), ix(1));
  EXPECT_TRUE(identity_test(r, realize(z1({1}))).equal);
  auto e = concrete_E(realize(z1({1, 2})), ix(1));
  EXPECT_TRUE(identity_test(e, realize(z1({2}))).equal);
  // t/(t - z) dt has residue -z at infinity.
  RatFunc g = RatFunc(t_of(ix(1))) * f;
  EXPECT_TRUE((g.residue_at_infinity(var_t(ix(1))) + RatFunc(z_of(0))).is_zero_exact());
  // A double pole is reported.
  RatFunc h = f * f;
  EXPECT_THROW(h.residue(var_t(ix(1)), z_of(0)), HigherOrderPole);
}

TEST(Residues, CancellingDoublePoleIsHandled) {
  // 1/(t-z)^2 - 1/(t-z)^2 + 1/(t-z) : residue 1 after cancellation.
  RatFunc f = RatFunc::inverse(t_of(ix(1)) - z_of(0));
  RatFunc h = f * f * RatFunc(t_of(ix(1)) - z_of(0));
  EXPECT_TRUE((h.residue(var_t(ix(1)), z_of(0)) - RatFunc(Q(1))).is_zero_exact());
}

TEST(Phi, BetaOpExamples) {
  const Var p1 = var_param("p1"), p2 = var_param("p2"), c21 = var_param("c21"), c12 = var_param("c12");
  PhiParams<Poly> prm;
  prm.p = [&](const ColoredIndex& x, int) { return pvar(x.ordinal == 1 ? p1 : p2); };
  prm.c = [&](const ColoredIndex& x, const ColoredIndex&) { return pvar(x.ordinal == 1 ? c12 : c21); };
  using PP = PolyDiff<Poly>;
  auto one = PP::unit();
  EXPECT_EQ(phi(ix(1), prm, one), PP::zeta1(sq({1}), pvar(p1)));
  EXPECT_EQ(phi(ix(2), prm, PP::zeta1(sq({1}))),
            PP::zeta1(sq({1, 2}), pvar(p2)) + PP::zeta1(sq({2, 1}), pvar(p2) - pvar(c21)));
  EXPECT_TRUE(phi(ix(1), prm, PP::zeta1(sq({1}))).is_zero());
  // Closed-form commutator against double application.
  auto direct = phi(ix(1), prm, phi(ix(2), prm, one)) - phi(ix(2), prm, phi(ix(1), prm, one));
  auto closed = phi_commutator(ix(1), ix(2), prm, one);
  EXPECT_EQ(direct, closed);
  EXPECT_EQ(closed, PP::zeta1(sq({1, 2}), -(pvar(c12) * pvar(p2))) + PP::zeta1(sq({2, 1}), pvar(c21) * pvar(p1)));
  auto t3 = PP::zeta1(sq({3}));
  EXPECT_EQ(phi(ix(1), prm, phi(ix(2), prm, t3)) - phi(ix(2), prm, phi(ix(1), prm, t3)),
            phi_commutator(ix(1), ix(2), prm, t3));
  // Rational model oracle for Phi.
  auto lhs = realize(phi(ix(2), prm, PP::zeta1(sq({1, 3}))));
  auto rhs = concrete_phi(ix(2), prm, 1, realize(PP::zeta1(sq({1, 3}))));
  EXPECT_TRUE(identity_test(lhs, rhs).equal);
}

TEST(Moebius, BasicPullbacks) {
  auto f = realize(z1({2, 1}));
  EXPECT_TRUE(identity_test(moebius_pullback(f, {1, 0, 0, 1}), f).equal);
  EXPECT_TRUE(identity_test(moebius_pullback(f, {1, 5, 0, 1}), f).equal);
  // sigma^* zeta_i = (cz+d)/(c t_i + d) zeta_i
  Moebius s{2, 1, 3, 5};
  auto g = realize(z1({1}));
  RatFunc factor = RatFunc(z_of(0) * Q(3) + Poly(Q(5))) * RatFunc::inverse(t_of(ix(1)) * Q(3) + Poly(Q(5)));
  EXPECT_TRUE(identity_test(moebius_pullback(g, s), g.times(factor)).equal);
}
