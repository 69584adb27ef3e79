#include "test_util.hpp"

#include <qkl/quadrature.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qkl;
using qkl::test::C;
using qkl::test::rel;

TEST(MPWeight, Examples) {
  EXPECT_LT(rel(mp_weight(1.0, M_PI / 2, 0.0), 2 / M_PI), 1e-15);
  for (double phi : {0.5, 1.9})
    for (double x : {-3.0, 0.4, 2.2}) {
      double expect = std::pow(2 * std::sin(phi), 2) / (2 * M_PI) * std::exp((2 * phi - M_PI) * x) * M_PI * x /
                      std::sinh(M_PI * x);
      EXPECT_LT(rel(mp_weight(1.0, phi, x), expect), 1e-12);
    }
  EXPECT_LT(rel(mp_weight(1.7, 0.9, -1.3), 1.0630638242813378773), 1e-12);
}

TEST(MPWeight, Positive) {
  std::mt19937_64 g(51);
  std::uniform_real_distribution<double> uk(0.05, 5), uphi(0.01, M_PI - 0.01), ux(-20, 20);
  for (int rep = 0; rep < 100; ++rep) EXPECT_GT(mp_weight(uk(g), uphi(g), ux(g)), 0.0);
}

TEST(AWWeight, Examples) {
  AWParams<double> p{0.5, C(0.4), C(0.3), C(0), C(0)};
  EXPECT_LT(rel(aw_weight(p, 0.2), 24.938721903307782428), 1e-13);
  // a = b = 0: only the numerator h(x,1)h(x,-1)h(x,q^1/2)h(x,-q^1/2) = (e^{2i th}, e^{-2i th}; q)_oo
  AWParams<double> z{0.5, C(0), C(0), C(0), C(0)};
  const double th = std::acos(0.2);
  EXPECT_LT(rel(aw_weight(z, 0.2), (q_inf(expi(2 * th), 0.5) * q_inf(expi(-2 * th), 0.5)).re), 1e-14);
  EXPECT_THROW(aw_weight(p, 1.0), RangeError);
  EXPECT_THROW(aw_weight(p, -1.0), RangeError);
  AWParams<double> bad{0.5, C(1.2), C(0.3), C(0), C(0)};
  EXPECT_THROW(aw_weight(bad, 0.2), HypothesisError);
}

TEST(AWWeight, FourParameterCaseIsSymmetric) {
  AWParams<double> p{0.6, C(0.3), C(-0.5), C(0.2, 0.4), C(0.2, -0.4)};
  AWParams<double> r{0.6, C(0.2, -0.4), C(0.3), C(0.2, 0.4), C(-0.5)};
  for (double x : {-0.8, 0.0, 0.55}) EXPECT_LT(rel(aw_weight(p, x), aw_weight(r, x)), 1e-13);
}

TEST(Gram, MPExample) {
  auto g = ortho_gram_mp(MPParams<double>{0.8, 1.1}, 8);
  EXPECT_LT(g.max_deviation(), 1e-7);
  EXPECT_NEAR(g.gram[0][0], 1.0, 1e-9);
  EXPECT_NEAR(g.gram[0][1], 0.0, 1e-9);
  EXPECT_GE(g.error_estimate, 0.0);
  EXPECT_LT(g.interval_lo, 0.0);
  EXPECT_GT(g.interval_hi, 0.0);
}

TEST(Gram, MPParameterSets) {
  for (auto [k, phi] : std::vector<std::pair<double, double>>{{0.3, 0.4}, {1.0, M_PI / 2}, {2.9, 2.9}, {0.5, 2.5}}) {
    auto g = ortho_gram_mp(MPParams<double>{k, phi}, 8);
    EXPECT_LT(g.max_deviation(), 1e-7) << k << " " << phi;
  }
}

TEST(Gram, ASCExamples) {
  auto g = ortho_gram_asc(ASCParams<double>{0.5, C(0.4), C(0.3)}, 8);
  EXPECT_LT(g.max_deviation(), 1e-7);
  auto c = ortho_gram_asc(ASCParams<double>{0.7, C(0.3, 0.5), C(0.3, -0.5)}, 8);
  EXPECT_LT(c.max_deviation(), 1e-7);
  EXPECT_THROW(ortho_gram_asc(ASCParams<double>{0.5, C(1.2), C(0.3)}, 8), HypothesisError);
  EXPECT_THROW(ortho_gram_asc(ASCParams<double>{0.5, C(0.3, 0.1), C(0.3)}, 8), HypothesisError);
}

TEST(Gram, ArgumentChecks) {
  EXPECT_THROW(ortho_gram_mp(MPParams<double>{0.8, 1.1}, 13), ParamError);
  EXPECT_THROW(ortho_gram_mp(MPParams<double>{0.8, 1.1}, 4, 0.0), ParamError);
  EXPECT_THROW(ortho_gram_mp(MPParams<double>{-0.8, 1.1}, 4), HypothesisError);
}

TEST(Gram, ErrorContract) {
  // an unreachable tolerance must be reported, not silently accepted
  EXPECT_THROW(ortho_gram_mp(MPParams<double>{0.8, 1.1}, 12, 1e-300), ConvergenceError);
}

TEST(Gram, RefinementWithinReportedError) {
  // the same Gram on a slightly different panel split changes each entry by
  // less than the reported error plus rounding
  auto g = ortho_gram_asc(ASCParams<double>{0.5, C(0.4), C(0.3)}, 6);
  auto h = ortho_gram_asc(ASCParams<double>{0.5, C(0.4), C(0.3)}, 8);
  for (std::size_t m = 0; m <= 6; ++m)
    for (std::size_t n = 0; n <= 6; ++n)
      EXPECT_LE(std::fabs(g.gram[m][n] - h.gram[m][n]), g.error_estimate + h.error_estimate + 1e-14);
}
