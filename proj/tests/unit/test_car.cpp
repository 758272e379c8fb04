#include <cmath>

#include <gtest/gtest.h>

#include "opsim/car.hpp"
#include "opsim/error.hpp"
#include "opsim/rng.hpp"
#include "oracles.hpp"

using namespace opsim;

TEST(Car, SmallSystems) {
  const auto one = car_generators(1);
  const Operator C0 = one.generators[0];
  Operator A = Operator::Zero(2, 2);
  A(0, 1) = 1.0;
  EXPECT_EQ(C0, A);
  EXPECT_EQ(Operator(C0 * C0.adjoint() + C0.adjoint() * C0), Operator::Identity(2, 2));
  const auto two = car_generators(2);
  const Operator X = two.generators[0], Y = two.generators[1];
  EXPECT_TRUE(Operator(X * Y + Y * X).isZero(1e-15));
  for (int m = 1; m <= 6; ++m) EXPECT_NEAR(op_norm(car_generators(m).generators[0]), 1.0, 1e-14);
  EXPECT_THROW(car_generators(0), InputError);
  EXPECT_THROW(car_generators(13), InputError);
}

TEST(Car, Defects) {
  const auto d = car_defects(car_generators(6));
  EXPECT_LE(d.anticommute, 1e-12);
  EXPECT_LE(d.canonical, 1e-12);
}

TEST(Car, LambdaIsometric) {
  const auto sys = car_generators(3);
  Vector u = Vector::Zero(3);
  u(0) = 0.6;
  u(1) = 0.8;
  EXPECT_NEAR(oracles::spectral_norm(Operator(lambda_of(sys, u))), 1.0, 1e-12);
  EXPECT_TRUE(Operator(lambda_of(sys, Vector::Zero(3))).isZero(0.0));
}

TEST(Hankel, Examples) {
  const auto e0 = AlphaSeq::explicit_values({1.0});
  const auto sys = car_generators(3);
  const Operator Y = hankel(e0, 2, sys);
  EXPECT_NEAR(op_norm(Y), 1.0, 1e-14);
  EXPECT_EQ(Operator(Y.topLeftCorner(8, 8)), Operator(sys.generators[0]));
  EXPECT_TRUE(Operator(hankel(AlphaSeq::explicit_values({0.0}), 2, sys)).isZero(0.0));
  EXPECT_THROW(hankel(e0, 3, 4), InputError);
  Rng rng(8);
  std::vector<double> a(6);
  for (auto& x : a) x = rng.gaussian();
  const auto alpha = AlphaSeq::explicit_values(a);
  const auto sys8 = car_generators(8);
  for (int n = 0; n <= 3; ++n) {
    const double norm = op_norm(shifted_hankel(alpha, n, 3, sys8));
    EXPECT_LE(norm, (n + 1) * std::sqrt(alpha.tail(n)) + 1e-10);
  }
}

TEST(Foguel, Examples) {
  const auto zero = foguel_hankel(AlphaSeq::explicit_values({0.0}), 2, 3);
  EXPECT_TRUE(Operator(zero.R - zero.R0).isZero(0.0));
  EXPECT_LE(op_norm(zero.R0), 1.0 + 1e-14);
  const auto one = foguel_hankel(AlphaSeq::explicit_values({0.5}), 1, 2);
  EXPECT_EQ(one.R.rows(), 8);
  const auto e0 = foguel_hankel(AlphaSeq::explicit_values({1.0}), 2, 4);
  EXPECT_NEAR(power_diff_norm(e0, 1), 1.0, 1e-14);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(power_diff_norm(zero, n), 0.0);
}

TEST(Foguel, IdentityMatchesSubtraction) {
  Rng rng(12);
  std::vector<double> a(5);
  for (auto& x : a) x = rng.gaussian();
  const auto fh = foguel_hankel(AlphaSeq::explicit_values(a), 3, 6);
  for (int n = 1; n <= 4; ++n) EXPECT_NEAR(power_diff_norm(fh, n), power_diff_norm_direct(fh, n), 1e-10);
}

TEST(Foguel, LiteralBoundCounterexample) {
  const auto alpha = AlphaSeq::explicit_values({1.0});
  const auto fh = foguel_hankel(alpha, 2, 4);
  EXPECT_GT(power_diff_norm(fh, 1), power_diff_bound_literal(alpha, 1) + 0.5);
  EXPECT_LE(power_diff_norm(fh, 1), power_diff_bound_shifted(alpha, 1) + 1e-12);
}

TEST(Foguel, WeightedTailSumBoundsSquaredDifferences) {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> a(5);
    for (auto& x : a) x = rng.gaussian();
    const auto alpha = AlphaSeq::explicit_values(a);
    const auto fh = foguel_hankel(alpha, 3, 5);
    double lhs = 0.0;
    for (int n = 1; n <= 5; ++n) lhs += std::pow(power_diff_norm(fh, n), 2);
    const auto tails = alpha.tails(4);
    double rhs = 0.0;
    for (int n = 0; n <= 4; ++n) rhs += (n + 1.0) * (n + 1.0) * tails[n];
    EXPECT_LE(lhs, rhs + 1e-8);
    EXPECT_NEAR(rhs, abel_swap_check(a).rhs, 1e-12 * rhs);
  }
}
