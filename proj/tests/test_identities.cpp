#include <gtest/gtest.h>

#include "pdiff/identities.hpp"

using namespace pdiff;

namespace {
void expect_pass(const Check& c) {
  EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
  EXPECT_GT(c.cases, 0) << c.name;
}
}  // namespace

TEST(Identities, Bialgebra) { expect_pass(check_bialgebra(5, 4)); }
TEST(Identities, ProductRealization) { expect_pass(check_product_realization(4, 4)); }
TEST(Identities, ResidueRules) { expect_pass(check_residue_rules(4, 3)); }
TEST(Identities, PhiRealization) { expect_pass(check_phi_realization(3, 3)); }
TEST(Identities, FlagResidue) { expect_pass(check_flag_residue(4, 3, 4)); }
TEST(Identities, IteratedResidueRealization) { expect_pass(check_iterated_residue_realization(3, 3)); }
TEST(Identities, IntrinsicIndependence) { expect_pass(check_intrinsic_independence(3)); }
TEST(Identities, PolynomialGenerator) { expect_pass(check_polynomial_generator(3)); }
TEST(Identities, MixedShuffle) { expect_pass(check_mixed_shuffle(2, 5)); }
TEST(Identities, MixedShuffle2) { expect_pass(check_mixed_shuffle2(2, 5)); }
TEST(Identities, SumProduct) { expect_pass(check_sum_product(4, 3)); }
TEST(Identities, Power) { expect_pass(check_power(3)); }
TEST(Identities, BracketIdentity) { expect_pass(check_bracket_identity(3)); }
TEST(Identities, SerreType) { expect_pass(check_serre_type(3)); }
TEST(Identities, EFCommutator) { expect_pass(check_ef_commutator(3, 3)); }

// Negative controls: a wrong closed form must be detected.
TEST(Identities, NegativeControls) {
  auto a = realize(PolyDiff<Q>::zeta1(pool_seq(0, {1, 2})));
  auto b = realize(PolyDiff<Q>::zeta1(pool_seq(0, {2, 1})));
  EXPECT_FALSE(identity_test(a, b).equal);
  IdentityOptions rnd{20, 1, 0, true};
  EXPECT_FALSE(identity_test(a, b, rnd).equal);
}
