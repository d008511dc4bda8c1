#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pvdim/residue.hpp"

namespace pvdim {
namespace {

TEST(Residue, SingleTerm) {
  auto p = golden_ratio();
  auto r = residue_from_signs(p, {1});
  EXPECT_EQ(r.coeffs, (std::vector<BigInt>{1, 0}));
}

TEST(Residue, GoldenCollision) {
  auto p = golden_ratio();
  auto a = residue_from_signs(p, {1, -1, -1});
  auto b = residue_from_signs(p, {-1, 1, 1});
  EXPECT_TRUE(a.is_zero());
  EXPECT_EQ(a, b);
  // Independent check on the beta side.
  const double beta = (std::sqrt(5.0) - 1.0) / 2.0;
  EXPECT_NEAR(1.0 - beta - beta * beta, 0.0, 1e-15);
  EXPECT_NE(residue_from_signs(p, {1, 1, -1}), a);
}

TEST(Residue, EvalIntervals) {
  auto p = golden_ratio();
  Interval z = residue_eval(p, AlgebraicResidue{{0, 0}}, 64);
  EXPECT_TRUE(z.contains(0.0));
  EXPECT_LT(z.width(), std::ldexp(1.0, -62));
  Interval one = residue_eval(p, AlgebraicResidue{{1, 0}}, 64);
  EXPECT_TRUE(one.contains(1.0));
  Interval am1 = residue_eval(p, AlgebraicResidue{{-1, 1}}, 128);
  EXPECT_NEAR(am1.mid(), 0.6180339887498949, 1e-15);
  EXPECT_TRUE(am1.contains((std::sqrt(5.0) - 1.0) / 2.0) || am1.width() < 1e-30);
  EXPECT_THROW(residue_eval(p, AlgebraicResidue{{1, 0}}, 16), Error);
}

TEST(Residue, WidthShrinksWithPrecision) {
  auto p = verify_pisot(IntPolynomial{-1, -1, -1, 1});
  AlgebraicResidue r{{12345, -678, 91011}};
  double prev = 1.0;
  for (mpfr_prec_t bits : {128, 256, 512}) {
    double w = residue_eval(p, r, bits).width();
    EXPECT_LT(w, prev * 1e-30);
    prev = w;
  }
}

// Horner homomorphism: the residue evaluates to the plain floating sum.
TEST(Residue, AgreesWithDirectEvaluationOnRandomStrings) {
  std::mt19937_64 rng(7);
  for (const auto& poly : {IntPolynomial{-1, -1, 1}, IntPolynomial{-1, -1, -1, 1}, IntPolynomial{-1, -1, 0, 1}}) {
    auto p = verify_pisot(poly);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> s(1 + rng() % 30);
      for (auto& x : s) x = (rng() & 1) ? 1 : -1;
      auto r = residue_from_signs(p, s);
      long double direct = 0;
      const long double a = p.alpha_value();
      for (int x : s) direct = direct * a + x;
      Interval v = residue_eval(p, r, 128);
      EXPECT_NEAR(static_cast<double>(direct), v.mid(), 1e-9 * std::max(1.0L, std::fabs(direct)));
      // Unscaled sum on the beta side.
      long double unscaled = 0, bk = 1;
      for (int x : s) {
        unscaled += x * bk;
        bk /= a;
      }
      EXPECT_NEAR(static_cast<double>(unscaled), unscaled_value(p, r, s.size(), 128).mid(), 1e-12);
    }
  }
}

TEST(Residue, Int64StepMatchesBigStep) {
  auto p = verify_pisot(IntPolynomial{-1, -1, -1, 1});
  auto low = detail::small_minpoly(p.minpoly());
  std::vector<std::int64_t> a{3, -5, 8}, out(3);
  ASSERT_TRUE(detail::horner_step(a, out, low, -1));
  std::vector<BigInt> big{3, -5, 8}, bout(3), blow{-1, -1, -1};
  detail::horner_step(big, bout, blow, -1);
  for (int j = 0; j < 3; ++j) EXPECT_EQ(BigInt(out[j]), bout[j]);
  std::vector<std::int64_t> huge{0, 0, std::numeric_limits<std::int64_t>::max()};
  EXPECT_FALSE(detail::horner_step(huge, out, std::vector<std::int64_t>{-3, 0, 0}, 1));
}

}  // namespace
}  // namespace pvdim
