#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "opsim/error.hpp"
#include "opsim/linalg.hpp"
#include "opsim/rng.hpp"
#include "oracles.hpp"

using namespace opsim;

TEST(PsdSqrt, DiagonalAndIdentity) {
  Operator D = Operator::Zero(2, 2);
  D(0, 0) = 4.0;
  D(1, 1) = 9.0;
  const Operator R = psd_sqrt(D);
  EXPECT_DOUBLE_EQ(R(0, 0).real(), 2.0);
  EXPECT_DOUBLE_EQ(R(1, 1).real(), 3.0);
  EXPECT_EQ(psd_sqrt(Operator::Identity(3, 3)), Operator::Identity(3, 3));
}

TEST(PsdSqrt, SquaresBack) {
  Operator G(2, 2);
  G << 2.0, 1.0, 1.0, 2.0;
  const Operator R = psd_sqrt(G);
  EXPECT_LT((R * R - G).norm(), 1e-10);
  Vector v(2);
  v << 1.0, 1.0;
  EXPECT_NEAR((R * v - std::sqrt(3.0) * v).norm(), 0.0, 1e-12);
  v << 1.0, -1.0;
  EXPECT_NEAR((R * v - v).norm(), 0.0, 1e-12);
}

TEST(PsdSqrt, RejectsIndefinite) {
  Operator G = Operator::Identity(2, 2);
  G(1, 1) = -1.0;
  EXPECT_THROW(psd_sqrt(G), Error);
}

TEST(MatpolyEval, Examples) {
  Operator A = Operator::Zero(2, 2);
  A(0, 0) = 2.0;
  A(1, 1) = 3.0;
  EXPECT_EQ(matpoly_eval(MatrixPolynomial::scalar({0.0, 1.0}), A), A);

  MatrixPolynomial P(2);
  P.entry(0, 0) = {1.0};
  P.entry(0, 1) = {0.0, 1.0};
  P.entry(1, 1) = {1.0};
  Operator t(1, 1);
  t(0, 0) = 0.3;
  const Operator E = matpoly_eval(P, t);
  EXPECT_EQ(E(0, 1), Complex(0.3));
  EXPECT_EQ(E(1, 0), Complex(0.0));
  EXPECT_EQ(E(0, 0), Complex(1.0));

  Operator J = Operator::Zero(2, 2);
  J(0, 1) = 1.0;
  EXPECT_TRUE(matpoly_eval(MatrixPolynomial::scalar({0.0, 0.0, 1.0}), J).isZero(0.0));
}

TEST(CircleSupNorm, Examples) {
  EXPECT_NEAR(circle_sup_norm(MatrixPolynomial::scalar({0, 0, 0, 1})).value(), 1.0, 1e-12);
  EXPECT_NEAR(circle_sup_norm(MatrixPolynomial::scalar({1, 1})).value(), 2.0, 1e-12);
  MatrixPolynomial P(2);
  P.entry(0, 0) = {0.0, 1.0};
  P.entry(1, 1) = {1.0};
  EXPECT_NEAR(circle_sup_norm(P).value(), 1.0, 1e-12);
  EXPECT_THROW(circle_sup_norm(P, 128), InputError);
}

TEST(CircleSupNorm, BoundsTruncatedShiftCalculus) {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Complex> c(5);
    for (auto& x : c) x = rng.complex_gaussian();
    const auto p = MatrixPolynomial::scalar(c);
    const double sup = circle_sup_norm(p).value();
    double prev = 0.0;
    for (int N = 2; N <= 24; N += 2) {
      Operator S = Operator::Zero(N, N);
      for (int i = 0; i + 1 < N; ++i) S(i + 1, i) = 1.0;
      const double v = op_norm(matpoly_eval(p, S));
      EXPECT_GE(v, prev - 1e-12);
      EXPECT_LE(v, sup + 1e-9);
      prev = v;
    }
  }
}

TEST(PNormBracket, Examples) {
  auto b = induced_pnorm_bracket(Operator::Identity(3, 3), 3.0, 16);
  EXPECT_NEAR(b.lo, 1.0, 1e-15);
  EXPECT_NEAR(b.hi, 1.0, 1e-15);
  Operator P = Operator::Zero(3, 3);
  P(0, 1) = P(1, 2) = P(2, 0) = 1.0;
  b = induced_pnorm_bracket(P, 1.5, 16);
  EXPECT_NEAR(b.lo, 1.0, 1e-15);
  EXPECT_NEAR(b.hi, 1.0, 1e-15);
  Operator A(2, 2);
  A << 1.0, 1.0, 0.0, 1.0;
  b = induced_pnorm_bracket(A, 2.0, 64);
  EXPECT_LE(b.lo, std::numbers::phi + 1e-12);
  EXPECT_NEAR(b.hi, 2.0, 1e-15);
  EXPECT_THROW(induced_pnorm_bracket(A, 1.0, 4), InputError);
}

TEST(NumericalRadius, ClassicalBracketAndNormalEquality) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator A = random_gaussian_matrix(rng, 4, 4);
    const double w = numerical_radius(A);
    const double n = op_norm(A);
    EXPECT_LE(w, n * (1 + 1e-12));
    EXPECT_GE(2.0 * w, n * (1 - 1e-12));

    const Operator U = random_unitary(rng, 4);
    Vector lambda = random_gaussian_vector(rng, 4);
    const Operator N = U * lambda.asDiagonal() * U.adjoint();
    EXPECT_NEAR(numerical_radius(N), op_norm(N), 1e-8 * op_norm(N));
  }
  Operator J = Operator::Zero(2, 2);
  J(0, 1) = 2.0;
  EXPECT_NEAR(numerical_radius(J), 1.0, 1e-12);
}

TEST(OpNorm, LanczosPathMatchesSvd) {
  Rng rng(3);
  const Operator A = random_gaussian_matrix(rng, 260, 240);
  EXPECT_NEAR(op_norm(A), oracles::spectral_norm(A), 1e-9 * oracles::spectral_norm(A));
  const SparseOperator S = A.sparseView();
  EXPECT_NEAR(op_norm(S), oracles::spectral_norm(A), 1e-9 * oracles::spectral_norm(A));
}

TEST(Validation, RejectsNonFinite) {
  Operator A = Operator::Identity(2, 2);
  A(0, 1) = std::nan("");
  EXPECT_THROW(require_well_formed(A), InputError);
  EXPECT_THROW(require_square(Operator::Zero(2, 3)), InputError);
}
