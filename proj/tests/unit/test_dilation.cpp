#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "opsim/dilation.hpp"
#include "opsim/error.hpp"
#include "opsim/instances.hpp"
#include "opsim/rng.hpp"

using namespace opsim;

namespace {
Operator jordan(double a) {
  Operator T = Operator::Zero(2, 2);
  T(0, 1) = a;
  return T;
}
}  // namespace

TEST(Crho, Examples) {
  auto r = crho_positivity(jordan(2.0), RhoSeq::constant(2.0), 0.999, 256, 8);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(r.min_eig, 1.0 - 0.999, 1e-12);
  r = crho_positivity(jordan(2.0), RhoSeq::constant(1.0), 0.999, 256, 8);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_GT(std::abs(r.witness), 0.5);
  r = crho_positivity(Operator::Zero(2, 2), RhoSeq::constant(0.5), 0.9, 64, 4);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(r.min_eig, 1.0, 1e-15);
  EXPECT_THROW(crho_positivity(jordan(1.0), RhoSeq::constant(1.0), 1.0, 64, 4), InputError);
}

TEST(Crho, TailControlledOrInconclusive) {
  const Operator big = gen_instance("normal", 3, 1.5, 1);
  EXPECT_EQ(crho_positivity(big, RhoSeq::constant(1.0), 0.9, 64, 16).verdict, Verdict::Inconclusive);
}

TEST(Crho, ContractionsAndExpansions) {
  for (int seed = 0; seed < 5; ++seed) {
    const Operator T = gen_instance("contraction", 3, 0.95, seed);
    EXPECT_EQ(crho_positivity(T, RhoSeq::constant(1.0), 0.95, 128, 200).verdict, Verdict::Pass);
    const Operator N = gen_instance("gaussian", 3, 0.0, seed);
    const Operator big = N * (1.2 / op_norm(N));
    EXPECT_EQ(crho_positivity(big, RhoSeq::constant(1.0), 0.999, 512, 8).verdict, Verdict::Fail);
  }
  EXPECT_EQ(crho_positivity(jordan(1.9), RhoSeq::constant(2.0), 0.999, 128, 4).verdict, Verdict::Pass);
  EXPECT_EQ(crho_positivity(jordan(2.2), RhoSeq::constant(2.0), 0.999, 128, 4).verdict, Verdict::Fail);
}

TEST(RhoDilation, SchaefferSource) {
  for (int seed = 0; seed < 5; ++seed) {
    const Operator T = gen_instance("contraction", 3, 1.0, seed);
    const auto d = schaeffer_dilation(T, 8);
    EXPECT_LE(rho_dilation_check(T, d.U, d.embed, RhoSeq::constant(1.0), 8), 1e-10);
    const auto d2 = schaeffer_dilation(T, 6);
    EXPECT_LE(rho_dilation_check(2.0 * T, d2.U, d2.embed, RhoSeq::constant(2.0), 1), 1e-10);
  }
  Operator U = Operator::Zero(2, 2);
  U(0, 1) = U(1, 0) = 1.0;
  const Operator V = Operator::Identity(2, 2).leftCols(1);
  EXPECT_EQ(rho_dilation_check(Operator::Zero(1, 1), U, V, RhoSeq::constant(1.0), 1), 0.0);
  EXPECT_THROW(rho_dilation_check(Operator::Zero(1, 1), 2.0 * U, V, RhoSeq::constant(1.0), 1), Error);
}

TEST(Racz, Examples) {
  EXPECT_EQ(racz_deficiency(RhoSeq::constant(1.3), 2, 1.3, 100).partial, 0.0);
  const auto p = racz_deficiency(RhoSeq::power(1.0, 1.0, 1.0), 1, 1.0, 1000000);
  ASSERT_TRUE(p.converged);
  ASSERT_TRUE(p.tail_estimate.has_value());
  EXPECT_NEAR(p.partial + *p.tail_estimate, std::numbers::pi * std::numbers::pi / 6.0, 1e-6);
  EXPECT_FALSE(racz_deficiency(RhoSeq::power(1.0, 1.0, 0.5), 1, 1.0, 100000).converged);
}

TEST(Racz, PipelineBound) {
  const Operator T = gen_instance("contraction", 2, 0.8, 3);
  const auto dil = schaeffer_dilation(T, 12);
  const auto r = racz_pipeline(T, dil, RhoSeq::constant(1.0), 2, 1.0, 5);
  EXPECT_TRUE(r.ok);
  EXPECT_LE(r.dilation_defect, 1e-10);
}

TEST(RhoSeq, Parsing) {
  EXPECT_EQ(RhoSeq::parse("const:2")(5), 2.0);
  const auto t = RhoSeq::parse("table:1,2,3");
  EXPECT_EQ(t(2), 2.0);
  EXPECT_EQ(t(9), 3.0);
  EXPECT_THROW(RhoSeq::parse("const:-1"), InputError);
  EXPECT_THROW(RhoSeq::parse("nonsense"), InputError);
  EXPECT_EQ(RhoSeq::from_json(t.to_json())(3), 3.0);
}
