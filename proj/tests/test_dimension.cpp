#include <gtest/gtest.h>

#include <mpfr.h>

#include <cmath>

#include "pvdim/dimension.hpp"

using namespace pvdim;

namespace {

const PisotNumber& golden() {
  static const PisotNumber g = golden_ratio();
  return g;
}

// u_n straight from the definition at 256 bits: log(sum c^s) / (n log(1/beta)).
double direct_un(const PartitionTable& t, double tau) {
  mpfr_t s, acc, term, c, lb;
  mpfr_inits2(256, s, acc, term, c, lb, static_cast<mpfr_ptr>(nullptr));
  Real beta = t.pisot().beta(256).mid_real();
  mpfr_log(lb, beta.get(), MPFR_RNDN);
  mpfr_set_d(term, tau, MPFR_RNDN);
  mpfr_log(term, term, MPFR_RNDN);
  mpfr_div(s, lb, term, MPFR_RNDN);
  mpfr_set_zero(acc, 1);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const BigInt k = to_big(t.count(i));
    mpfr_set_z(c, k.backend().data(), MPFR_RNDN);
    mpfr_pow(term, c, s, MPFR_RNDN);
    mpfr_add(acc, acc, term, MPFR_RNDN);
  }
  mpfr_log(acc, acc, MPFR_RNDN);
  mpfr_div(acc, acc, lb, MPFR_RNDN);
  mpfr_div_si(acc, acc, -static_cast<long>(t.n()), MPFR_RNDN);
  const double out = mpfr_get_d(acc, MPFR_RNDN);
  mpfr_clears(s, acc, term, c, lb, static_cast<mpfr_ptr>(nullptr));
  return out;
}

}  // namespace

TEST(BoxDim, Values) {
  EXPECT_NEAR(box_dim_repeller(golden().beta_value(), 0.25), 1.1528790432, 1e-9);
  EXPECT_NEAR(box_dim_repeller(0.6180340, 0.25), std::log(8 * 0.6180340) / std::log(4.0), 1e-15);
  EXPECT_NEAR(box_dim_repeller(0.75, 0.25), std::log(6.0) / std::log(4.0), 1e-15);
  EXPECT_NEAR(box_dim_repeller(golden().beta_value(), 0.4), 1.2312970634, 1e-9);
  EXPECT_NEAR(box_dim_repeller(0.5 + 1e-12, 0.3), 1.0, 1e-9);
}

TEST(BoxDim, Domain) {
  EXPECT_THROW(box_dim_repeller(0.5, 0.25), Error);
  EXPECT_THROW(box_dim_repeller(0.7, 0.5), Error);
  EXPECT_THROW(box_dim_repeller(0.7, 0.0), Error);
}

// d/dtau = log(2 beta) / (tau log(1/tau)^2) > 0 because 2 beta > 1.
TEST(BoxDim, IncreasingInTau) {
  for (double beta : {0.55, 0.618, 0.9})
    for (double tau = 0.01; tau + 0.01 < 0.5; tau += 0.01)
      EXPECT_LT(box_dim_repeller(beta, tau), box_dim_repeller(beta, tau + 0.01));
}

TEST(Un, GoldenFixtures) {
  const auto fair = MeasureSpec::bernoulli(0.5);
  EXPECT_NEAR(hausdorff_upper_un(build_partition(golden(), 3, {fair}), 0.4), 1.3900675288, 1e-9);
  EXPECT_NEAR(hausdorff_upper_un(build_partition(golden(), 2, {fair}), 0.4), 1.4404200904, 1e-9);
}

TEST(Un, CollisionFreeIsTauIndependent) {
  auto t = build_partition(golden(), 2, {});
  const double expected = std::log(2.0) / -std::log(golden().beta_value());
  for (double tau : {0.01, 0.1, 0.25, 0.4, 0.49}) EXPECT_NEAR(hausdorff_upper_un(t, tau), expected, 1e-14);
}

TEST(Un, LogSpaceMatchesDirect) {
  for (const auto& poly : {IntPolynomial{-1, -1, 1}, IntPolynomial{-1, -1, -1, 1}, IntPolynomial{-1, 0, -1, 1}}) {
    auto p = verify_pisot(poly);
    for (std::size_t n = 1; n <= 14; ++n) {
      auto t = build_partition(p, n, {});
      for (double tau : {0.1, 0.4}) {
        const double d = direct_un(t, tau);
        EXPECT_NEAR(hausdorff_upper_un(t, tau), d, 1e-9 * std::abs(d)) << poly.pretty() << " n=" << n;
      }
    }
  }
}

TEST(Un, HugeCountsStayFinite) {
  std::vector<Count> counts = {Count(1) << 120, Count(1) << 100, 3};
  const double u = hausdorff_upper_un(
      [&](auto&& f) {
        for (Count c : counts) f(c);
      },
      127, 0.6, 0.3);
  EXPECT_TRUE(std::isfinite(u));
}

TEST(GapSearch, GoldenSmallN) {
  auto g = gap_search(golden(), 0.4, 3);
  ASSERT_EQ(g.u.size(), 3u);
  EXPECT_FALSE(g.n_star.has_value());
  EXPECT_NEAR(g.u[2], 1.3900675288, 1e-9);
  EXPECT_NEAR(g.running_min[2], 1.3900675288, 1e-9);
  EXPECT_NEAR(g.box_dim, 1.2312970634, 1e-9);
  EXPECT_FALSE(gap_search(golden(), 0.4, 0).n_star.has_value());
}

TEST(GapSearch, VerdictIsOrderFree) {
  std::vector<double> u = {1.5, 1.3, 1.1, 1.2};
  auto a = GapSearch::first_below(u, 1.15);
  std::reverse(u.begin(), u.end());
  auto b = GapSearch::first_below(u, 1.15);
  EXPECT_EQ(a.has_value(), b.has_value());
}

TEST(Bounds, Erdos) {
  const double b = golden().beta_value();
  EXPECT_EQ(erdos_dim_upper(0.635385, b), 1.0);
  EXPECT_EQ(erdos_dim_upper(0.0, b), 0.0);
  EXPECT_NEAR(erdos_dim_upper(0.4, b), 0.8312347685, 1e-9);
  double prev = 0;
  for (double g = 0; g < 1; g += 0.01) {
    EXPECT_GE(erdos_dim_upper(g, b), prev);
    prev = erdos_dim_upper(g, b);
  }
}

TEST(Bounds, FatBaker) {
  EXPECT_DOUBLE_EQ(fat_baker_bound(MeasureSpec::bernoulli(0.5), golden(), 0.635385), 2.0);
  EXPECT_NEAR(fat_baker_bound(MeasureSpec::bernoulli(0.9), golden(), 0.635385), 1.4689955936, 1e-9);
  EXPECT_NEAR(fat_baker_bound(MeasureSpec::bernoulli(1.0 - 1e-12), golden(), 0.635385), 1.0, 1e-9);
  // Monotone in the Garsia bound.
  EXPECT_LE(fat_baker_bound(MeasureSpec::bernoulli(0.5), golden(), 0.1),
            fat_baker_bound(MeasureSpec::bernoulli(0.5), golden(), 0.2));
}

TEST(Bounds, BernoulliLambda) {
  auto b = bernoulli_lambda_dim_upper(0.5, golden().beta_value(), 0.1, 1.0);
  EXPECT_NEAR(b.value, 1.0920423554, 1e-9);
  EXPECT_GT(b.prefactor, 0.0);
  EXPECT_LT(b.prefactor, 1.0);
  EXPECT_NEAR(bernoulli_lambda_dim_upper(1.0, golden().beta_value(), 0.1, 0.0).value, 0.0, 1e-15);
  EXPECT_THROW(bernoulli_lambda_dim_upper(0.5, golden().beta_value(), 0.1, 1.5), Error);
}

TEST(Report, GoldenSmall) {
  auto r = dimension_report(golden(), 0.4, 4, MeasureSpec::bernoulli(0.5));
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(r.rows[2].classes, 7u);
  EXPECT_NEAR(r.rows[2].omega, 0.4721359549995794, 1e-12);
  EXPECT_NEAR(r.rows[2].entropy_rate, 1.9061547465398496 / 3, 1e-12);
  EXPECT_NEAR(r.garsia_best, 0.606503783, 1e-8);
  EXPECT_FALSE(r.garsia_below_threshold);
  EXPECT_FALSE(r.gap_n.has_value());
  EXPECT_EQ(r.erdos_bound, 1.0);
}

TEST(Garsia, BestImprovesByTwenty) {
  auto g = garsia_upper_bound(golden(), MeasureSpec::bernoulli(0.5), 20);
  EXPECT_LT(g.best, 0.635385);
  EXPECT_NEAR(g.ratios[0], std::log(2.0), 1e-15);
}
