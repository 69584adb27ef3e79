#include "test_util.hpp"

#include <qkl/kernels.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qkl;
using qkl::test::C;
using qkl::test::rel;

namespace {
KernelPoint<double> mp_point(C t, double x, double y) {
  KernelPoint<double> p;
  p.t = t;
  p.x = x;
  p.y = y;
  return p;
}
KernelPoint<double> ac_point(C t, double x, double y, C s, C sigma) {
  KernelPoint<double> p = mp_point(t, x, y);
  p.s = s;
  p.sigma = sigma;
  return p;
}
}  // namespace

TEST(MPKernel, AtZero) {
  for (double k : {0.3, 1.0, 2.5}) {
    auto pt = mp_point(C(0), 1.3, -0.7);
    double g = 1 / std::tgamma(2 * k);
    EXPECT_LT(rel(mp_kernel_sum(k, 1.2, pt).value, C(g)), 1e-14);
    EXPECT_LT(rel(mp_kernel_closed(k, 1.2, pt), C(g)), 1e-14);
  }
}

TEST(MPKernel, SumMatchesClosedForm) {
  auto pt = mp_point(C(0.4), 0.5, -0.3);
  auto s = mp_kernel_sum(0.8, 1.1, pt);
  EXPECT_LT(rel(s.value, mp_kernel_closed(0.8, 1.1, pt)), 1e-10);
  EXPECT_EQ(s.status, SeriesStatus::Converged);
}

TEST(MPKernel, DiagonalPositivity) {
  auto pt = mp_point(C(0.3), 0.0, 0.0);
  auto s = mp_kernel_sum(1.0, M_PI / 2, pt);
  EXPECT_GT(s.value.re, 0.0);
  EXPECT_LT(std::fabs(s.value.im), 1e-15);
  // independent partial sums of squares of the recurrence values
  auto p = mp_poly_rec_all(MPParams<double>{1.0, M_PI / 2}, 200, 0.0);
  double part = 0, tn = 1;
  for (double v : p) {
    part += v * v * tn;
    tn *= 0.3;
  }
  EXPECT_LT(rel(s.value, C(part)), 1e-13);
}

TEST(MPKernel, RealityAndSymmetry) {
  std::mt19937_64 g(41);
  std::uniform_real_distribution<double> uk(0.2, 3), uphi(0.2, M_PI - 0.2), ut(-0.6, 0.6), ux(-5, 5);
  for (int rep = 0; rep < 30; ++rep) {
    double k = uk(g), phi = uphi(g), x = ux(g), y = ux(g);
    C t(ut(g));
    C a = mp_kernel_closed(k, phi, mp_point(t, x, y)), b = mp_kernel_closed(k, phi, mp_point(t, y, x));
    EXPECT_LT(std::fabs(a.im), 1e-9 * std::fabs(a.re));
    EXPECT_LT(rel(a, b), 1e-11);
  }
}

TEST(MPKernel, PhiHalfPiSubstitution) {
  // at phi = pi/2, e^{2i phi} = -1 and r = -4t/(1-t)^2
  const double k = 1.3, t = 0.35, x = 0.4, y = -1.1;
  C r(-4 * t / ((1 - t) * (1 - t)));
  C f = hyp2f1(C(k, x), C(k, y), C(2 * k), r).value;
  C expect = complex_pow_principal(C(1 + t), C(0, x + y)) * complex_pow_principal(C(1 - t), C(-2 * k, -x - y)) * f /
             std::tgamma(2 * k);
  EXPECT_LT(rel(mp_kernel_closed(k, M_PI / 2, mp_point(C(t), x, y)), expect), 1e-14);
}

TEST(MPKernel, Errors) {
  EXPECT_THROW(mp_kernel_sum(1.0, 1.0, mp_point(C(1.0), 0, 0)), DivergenceError);
  EXPECT_THROW(mp_kernel_closed(1.0, 1.0, mp_point(C(0, 1.2), 0, 0)), DivergenceError);
  EXPECT_THROW(mp_kernel_closed(-1.0, 1.0, mp_point(C(0.2), 0, 0)), HypothesisError);
}

TEST(MPKernel, TruncationConsistency) {
  auto pt = mp_point(C(0.55, 0.2), 1.5, -2.0);
  TruncationPolicy a, b;
  a.max_terms = 60;
  b.max_terms = 120;
  auto ea = mp_kernel_sum(0.7, 2.0, pt, a), eb = mp_kernel_sum(0.7, 2.0, pt, b);
  if (ea.status == SeriesStatus::MaxTermsReached)
    EXPECT_LE(abs(ea.value - eb.value), 10 * ea.tail_estimate + 1e-15 * abs(eb.value));
  else
    EXPECT_LT(rel(ea.value, eb.value), 1e-14);
}

TEST(ACKernel, AtZero) {
  auto pt = ac_point(C(0), 0.2, -0.4, C(1.1), C(0.9));
  EXPECT_LT(rel(ac_kernel_sum(0.7, 0.5, pt).value, C(1)), 1e-15);
  EXPECT_LT(rel(ac_kernel_closed(0.7, 0.5, pt), C(1)), 1e-15);
  EXPECT_LT(rel(ac_kernel_closed_alt(0.7, 0.5, pt), C(1)), 1e-14);
}

TEST(ACKernel, ThreeFormsAgree) {
  auto pt = ac_point(C(0.35), 0.2, -0.4, C(1.1), C(0.9));
  C s = ac_kernel_sum(0.7, 0.5, pt).value;
  C c = ac_kernel_closed(0.7, 0.5, pt);
  EXPECT_LT(rel(s, c), 1e-9);
  auto pt3 = ac_point(C(0.3), 0.2, -0.4, C(1.1), C(0.9));
  EXPECT_LT(rel(ac_kernel_closed(0.7, 0.5, pt3), ac_kernel_closed_alt(0.7, 0.5, pt3)), 1e-9);
  EXPECT_LT(rel(ac_kernel_closed(0.7, 0.5, pt3), ac_kernel_sum(0.7, 0.5, pt3).value), 1e-9);
}

TEST(ACKernel, DiagonalPositivityRealityAndSymmetry) {
  auto d = ac_point(C(0.6), 0.3, 0.3, C(1.2), C(1.2));
  C v = ac_kernel_sum(0.8, 0.4, d).value;
  EXPECT_GT(v.re, 0.0);
  EXPECT_LT(std::fabs(v.im), 1e-12 * v.re);
  std::mt19937_64 g(42);
  std::uniform_real_distribution<double> ux(-0.95, 0.95), ut(-0.5, 0.5), us(0.8, 1.25);
  for (int rep = 0; rep < 20; ++rep) {
    double x = ux(g), y = ux(g);
    C t(ut(g)), s(us(g)), sg(us(g));
    C a = ac_kernel_closed(0.9, 0.5, ac_point(t, x, y, s, sg));
    C b = ac_kernel_closed(0.9, 0.5, ac_point(t, y, x, sg, s));
    EXPECT_LT(std::fabs(a.im), 1e-9 * std::fabs(a.re));
    EXPECT_LT(rel(a, b), 1e-11);
  }
}

TEST(ACKernel, Errors) {
  EXPECT_THROW(ac_kernel_sum(0.7, 0.5, ac_point(C(1.0), 0.2, -0.4, C(1.1), C(0.9))), DivergenceError);
  EXPECT_THROW(ac_kernel_sum(0.7, 1.5, ac_point(C(0.3), 0.2, -0.4, C(1.1), C(0.9))), DomainError);
  // |s| outside (q^k, q^{-k}) and off the unit circle
  EXPECT_THROW(ac_kernel_closed(0.7, 0.5, ac_point(C(0.3), 0.2, -0.4, C(3.0), C(0.9))), HypothesisError);
  EXPECT_THROW(ac_kernel_closed(0.7, 0.5, ac_point(C(0.3), 1.2, -0.4, C(1.1), C(0.9))), DomainError);
}
