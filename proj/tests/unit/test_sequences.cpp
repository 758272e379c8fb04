#include <cmath>

#include <gtest/gtest.h>

#include "opsim/error.hpp"
#include "opsim/rng.hpp"
#include "opsim/sequences.hpp"

using namespace opsim;

TEST(QuantityA, Examples) {
  const auto a = quantity_A(AlphaSeq::explicit_values({1.0, 0.0, 0.0}), 10);
  EXPECT_DOUBLE_EQ(a.value, 1.0);
  EXPECT_FALSE(a.diverged);
  const auto e = AlphaSeq::example32();
  EXPECT_LE(121.0 * e.tail(10), 1.0 / (2.0 * std::log(10.0)));
  EXPECT_TRUE(quantity_A(AlphaSeq::pisier(), 1000).diverged);
  EXPECT_FALSE(quantity_A(AlphaSeq::pisier(0.25), 1000).diverged);
}

TEST(QuantityB, Examples) {
  EXPECT_DOUBLE_EQ(quantity_B(AlphaSeq::explicit_values({1.0}), 2.0, 10).partial, 1.0);
  const auto g = quantity_B(AlphaSeq::geometric(0.5), 2.0, 200);
  EXPECT_NEAR(g.partial, 80.0 / 27.0, 1e-12);
  EXPECT_TRUE(g.converged);
  EXPECT_FALSE(quantity_B(AlphaSeq::example32(), 2.0, 10000).converged);
}

TEST(QuantityB, ThreeImpliesTwoOnRules) {
  for (const auto& a : {AlphaSeq::geometric(0.3), AlphaSeq::geometric(0.9), AlphaSeq::pisier(0.2),
                        AlphaSeq::pisier(0.5), AlphaSeq::example32()}) {
    if (quantity_B(a, 3.0, 2000).converged) EXPECT_TRUE(quantity_B(a, 2.0, 2000).converged) << a.name();
  }
}

TEST(Tails, NonincreasingAndDecaying) {
  const auto e = AlphaSeq::example32();
  const auto t = e.tails(10000);
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_LE(t[k], t[k - 1]);
  // The weighted tail behaves like 1/(2 ln k), so between k = 100 and
  // k = 10^4 it drops by a factor just under 2 (about 1.93).
  const double ratio = (101.0 * 101.0 * t[100]) / (10001.0 * 10001.0 * t[10000]);
  EXPECT_GT(ratio, 1.9);
  EXPECT_LT(ratio, 2.0);
}

TEST(AbelSwap, Examples) {
  auto r = abel_swap_check({1.0});
  EXPECT_DOUBLE_EQ(r.lhs, 1.0);
  EXPECT_DOUBLE_EQ(r.rhs, 1.0);
  r = abel_swap_check({0.0, 1.0});
  EXPECT_DOUBLE_EQ(r.lhs, 5.0);
  EXPECT_DOUBLE_EQ(r.rhs, 5.0);
  Rng rng(10);
  std::vector<double> a(10);
  for (auto& x : a) x = rng.gaussian();
  r = abel_swap_check(a);
  EXPECT_LE(r.defect, 1e-12 * std::max(r.lhs, 1.0));
}

TEST(ShiftWeights, Examples) {
  for (double w : shift_weights(BetaWeight::constant(1.0), 5)) EXPECT_EQ(w, 1.0);
  const auto s = shift_weights(BetaWeight::sqrt_weight(), 6);
  EXPECT_DOUBLE_EQ(s[0], std::sqrt(2.0));
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(s[n], std::sqrt((n + 2.0) / (n + 1.0)), 1e-15);
  const auto t = shift_weights(BetaWeight::table({1, 2, 4}), 2);
  EXPECT_EQ(t, (std::vector<double>{2.0, 2.0}));
  EXPECT_THROW(shift_weights(BetaWeight::table({1, 2, 4}), 3), InputError);
  EXPECT_THROW(BetaWeight::table({1, 0}), InputError);
}

TEST(SequenceJson, RoundTrip) {
  for (const auto& a : {AlphaSeq::explicit_values({1, 0.5}), AlphaSeq::pisier(0.5), AlphaSeq::example32(),
                        AlphaSeq::geometric(0.25)}) {
    const auto b = AlphaSeq::from_json(a.to_json());
    for (long k = 0; k < 20; ++k) EXPECT_EQ(a[k], b[k]);
  }
  EXPECT_THROW(AlphaSeq::from_json(Json{{"kind", "nope"}}), InputError);
  const auto b = BetaWeight::from_json(BetaWeight::sqrt_weight().to_json());
  EXPECT_EQ(b(3), 2.0);
}

TEST(DecadeDivergence, Harmonic) {
  std::vector<double> h, q;
  double s = 0, t = 0;
  for (int n = 1; n <= 10000; ++n) {
    s += 1.0 / n;
    t += 1.0 / (double(n) * n);
    h.push_back(s);
    q.push_back(t);
  }
  EXPECT_TRUE(decade_divergence(h));
  EXPECT_FALSE(decade_divergence(q));
}
