// Identities of the Meixner-Pollaczek / continuous Hahn / Jacobi / Hahn
// group. Each struct supplies a sampler, a hypothesis check and a two-sided
// evaluation templated on the working type.
#pragma once

#include "identity_core.hpp"
#include "kernels.hpp"
#include "polys.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace qkl::ids {

namespace detail {

using idparam::count;
using idparam::cplx;
using idparam::real;

/// Recomputes a recurrence-generated sequence in doubling blocks as a j-sum
/// asks for more entries.
template <class T, class Gen>
class LazySeq {
 public:
  explicit LazySeq(Gen g) : gen_(std::move(g)) {}
  const T& at(std::size_t j) {
    if (j >= v_.size()) v_ = gen_(std::max<std::size_t>(2 * j + 1, 32));
    return v_[j];
  }

 private:
  Gen gen_;
  std::vector<T> v_;
};

template <class T, class Gen>
LazySeq<T, Gen> lazy(Gen g) {
  return LazySeq<T, Gen>(std::move(g));
}

/// (s+j-1)_j / (s+j)_{j+1}
template <class C>
C shifted_poch_ratio(std::size_t j, const C& s) {
  if (j == 0) return C(1) / s;
  using R = decltype(abs(s));
  R rj = R(static_cast<long>(j));
  return (s + rj - R(1)) / ((s + 2 * rj - R(1)) * (s + 2 * rj));
}

inline void check_mp(double k, double phi, const char* k_name = "k") {
  if (!(k > 0)) throw HypothesisError(std::string(k_name) + " must be > 0");
  if (!(phi > 0 && phi < M_PI)) throw HypothesisError("phi must lie in (0, pi)");
}

inline void check_unit_disc(const Complex<double>& t, const char* name) {
  if (!(abs(t) < 1)) throw DivergenceError(std::string("|") + name + "| must be < 1");
}

inline void check_chahn_block(const ParamMap& p) {
  double a = real<double>(p, "a");
  auto b = cplx<double>(p, "b"), bp = cplx<double>(p, "bp");
  if (!(a > 0)) throw HypothesisError("a must be > 0");
  if (!(b.re > 0)) throw HypothesisError("Re b must be > 0");
  if (!(bp.re > 0)) throw HypothesisError("Re b' must be > 0");
  if (std::fabs(b.re - bp.re) > 1e-12 * (1 + std::fabs(b.re)))
    throw HypothesisError("b + d = b' + d' requires Re b = Re b' (d = conj b, d' = conj b')");
  real<double>(p, "x");
  real<double>(p, "y");
}

// Continuous Hahn parameters built from (k1, k2, x1, x2, y1, y2).
inline void sample_chahn_block(Sampler& s, ParamMap& p) {
  double k1 = s.uniform(0.2, 3.0), k2 = s.uniform(0.2, 3.0);
  double x1 = s.uniform(-3, 3), x2 = s.uniform(-3, 3), y1 = s.uniform(-3, 3), y2 = s.uniform(-3, 3);
  p["a"] = Complex<double>(k1);
  p["b"] = Complex<double>(k2, -(x1 + x2));
  p["bp"] = Complex<double>(k2, -(y1 + y2));
  p["x"] = Complex<double>(x1);
  p["y"] = Complex<double>(y1);
}

// r = -4 t sin^2(phi) / (1-t)^2 for a sampled (t, phi), kept inside |r| <= 0.6.
inline Complex<double> sample_r(Sampler& s, double phi, Complex<double>* t_out = nullptr) {
  for (;;) {
    Complex<double> t = s.disc(0.6);
    Complex<double> omt = Complex<double>(1) - t;
    Complex<double> r = -(t * (4 * std::sin(phi) * std::sin(phi))) / (omt * omt);
    if (abs(r) <= 0.6) {
      if (t_out) *t_out = t;
      return r;
    }
  }
}

/// V_j(a,a';c,c') / ((c)_j (c')_j), summed in type W.
template <class W>
Complex<W> v_over_poch(std::size_t j, const Complex<W>& a, const Complex<W>& ap, const Complex<W>& c,
                       const Complex<W>& cp) {
  using C = Complex<W>;
  C sum(0);
  W binom(1);
  const W rj = W(static_cast<long>(j));
  for (std::size_t m = 0; m <= j; ++m) {
    const W rm = W(static_cast<long>(m));
    C term = C(binom) * pochhammer(a, m) / pochhammer(c + rj - rm, m) * pochhammer(cp - ap, m) /
             pochhammer(cp + rj - rm, m) * pochhammer(ap, j - m) / pochhammer(cp, j - m) *
             pochhammer(c - a, j - m) / pochhammer(c, j - m);
    if (m % 2) term = -term;
    sum += term;
    binom = binom * W(static_cast<long>(j - m)) / W(static_cast<long>(m + 1));
  }
  return sum;
}

inline bool is_nonpos_int(const Complex<double>& z) {
  return z.im == 0 && z.re <= 0 && std::floor(z.re) == z.re;
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct MpPoisson {
  static constexpr const char* id = "mp_poisson";
  static constexpr const char* summary = "Meixner-Pollaczek Poisson kernel: bilinear sum vs closed form";
  static constexpr double tol = 1e-9;
  static constexpr std::size_t count = 100;
  static std::vector<std::string> params() { return {"k", "phi", "t", "x", "y"}; }

  static ParamMap sample(Sampler& s) {
    return {{"k", s.uniform(0.2, 3.0)},       {"phi", s.uniform(0.2, M_PI - 0.2)},
            {"t", s.disc(0.6)},               {"x", s.uniform(-5, 5)},
            {"y", s.uniform(-5, 5)}};
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    check_mp(real<double>(p, "k"), real<double>(p, "phi"));
    real<double>(p, "x");
    real<double>(p, "y");
    check_unit_disc(cplx<double>(p, "t"), "t");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    const R k = real<R>(p, "k"), phi = real<R>(p, "phi");
    KernelPoint<R> pt{cplx<R>(p, "t"), real<R>(p, "x"), real<R>(p, "y")};
    auto lhs = mp_kernel_sum(k, phi, pt, pol);
    auto rhs = mp_kernel_closed_scaled(k, phi, pt, pol);
    using std::exp;
    return {lhs.value, rhs.value * exp(-lgamma_real(2 * k)), SideMeta::of(lhs), SideMeta::of(rhs), ""};
  }
};

struct MpRecurrence {
  static constexpr const char* id = "mp_recurrence";
  static constexpr const char* summary = "three-term recurrence of the orthonormal Meixner-Pollaczek polynomials";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 50;
  static std::vector<std::string> params() { return {"k", "phi", "n", "y"}; }

  static ParamMap sample(Sampler& s) {
    double y = s.uniform(0.5, 5.0) * (s.uniform() < 0.5 ? -1 : 1);
    return {{"k", s.uniform(0.2, 3.0)},
            {"phi", s.uniform(0.2, M_PI - 0.2)},
            {"n", double(s.integer(1, 30))},
            {"y", y}};
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    check_mp(real<double>(p, "k"), real<double>(p, "phi"));
    detail::count(p, "n", 2000);
    real<double>(p, "y");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy&) {
    using namespace detail;
    using std::cos;
    using std::sin;
    using std::sqrt;
    const R k = real<R>(p, "k"), phi = real<R>(p, "phi"), y = real<R>(p, "y");
    const std::size_t n = detail::count(p, "n", 2000);
    MPParams<R> mp{k, phi};
    const R rn = R(static_cast<long>(n));
    auto pn = [&](std::size_t m) { return mp_poly(mp, m, y, true); };
    R lhs = 2 * y * sin(phi) * pn(n);
    R rhs = sqrt((rn + 1) * (rn + 2 * k)) * pn(n + 1) - 2 * (rn + k) * cos(phi) * pn(n);
    if (n > 0) rhs += sqrt(rn * (rn - 1 + 2 * k)) * pn(n - 1);
    return {Complex<R>(lhs), Complex<R>(rhs), SideMeta::finite(n + 1), SideMeta::finite(3 * n + 3), ""};
  }
};

struct HahnProduct {
  static constexpr const char* id = "hahn_product";
  static constexpr const char* summary =
      "product of two 2F1 as a sum over continuous Hahn polynomials";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 50;
  static std::vector<std::string> params() { return {"k1", "k2", "x1", "x2", "y1", "y2", "r"}; }

  static ParamMap sample(Sampler& s) {
    ParamMap p{{"k1", s.uniform(0.2, 3.0)}, {"k2", s.uniform(0.2, 3.0)}, {"x1", s.uniform(-3, 3)},
               {"x2", s.uniform(-3, 3)},    {"y1", s.uniform(-3, 3)},    {"y2", s.uniform(-3, 3)}};
    p["r"] = detail::sample_r(s, s.uniform(0.2, M_PI - 0.2));
    return p;
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    if (!(real<double>(p, "k1") > 0 && real<double>(p, "k2") > 0)) throw HypothesisError("k1, k2 must be > 0");
    for (auto n : {"x1", "x2", "y1", "y2"}) real<double>(p, n);
    check_unit_disc(cplx<double>(p, "r"), "r");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    using C = Complex<R>;
    const R k1 = real<R>(p, "k1"), k2 = real<R>(p, "k2");
    const R x1 = real<R>(p, "x1"), x2 = real<R>(p, "x2"), y1 = real<R>(p, "y1"), y2 = real<R>(p, "y2");
    const C r = cplx<R>(p, "r");
    auto f1 = hyp2f1(C(k1, x1), C(k1, y1), C(2 * k1), r, pol);
    auto f2 = hyp2f1(C(k2, x2), C(k2, y2), C(2 * k2), r, pol);
    SideMeta lm = SideMeta::of(f1);
    lm += SideMeta::of(f2);

    const C s(2 * k1 + 2 * k2);
    auto px = lazy<C>([&](std::size_t n) { return chahn_rec_all(sj_mp_chahn_params(k1, k2, x1, x2), n, x1); });
    auto py = lazy<C>([&](std::size_t n) { return chahn_rec_all(sj_mp_chahn_params(k1, k2, y1, y2), n, y1); });
    C coef(1);
    std::size_t inner = 0;
    auto term = [&](std::size_t j) {
      if (j > 0) {
        const R rj = R(static_cast<long>(j - 1));
        coef *= -r * (rj + 1) / ((2 * k1 + rj) * (2 * k2 + rj)) * shifted_poch_ratio(j - 1, s);
      }
      const R K = k1 + k2 + R(static_cast<long>(j));
      auto f = hyp2f1(C(K, x1 + x2), C(K, y1 + y2), C(2 * K), r, pol);
      inner += f.terms_used;
      return coef * f.value * px.at(j) * py.at(j);
    };
    auto rhs = sum_terms<R>(term, pol);
    SideMeta rm = SideMeta::of(rhs);
    rm.terms += inner;
    return {f1.value * f2.value, rhs.value, lm, rm, ""};
  }
};

struct ChahnBilinear {
  static constexpr const char* id = "chahn_bilinear";
  static constexpr const char* summary = "bilinear generating function for continuous Hahn polynomials";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 50;
  static std::vector<std::string> params() { return {"a", "b", "bp", "x", "y", "r"}; }

  static ParamMap sample(Sampler& s) {
    ParamMap p;
    detail::sample_chahn_block(s, p);
    p["r"] = s.disc(0.6);
    return p;
  }
  static void validate(const ParamMap& p) {
    detail::check_chahn_block(p);
    detail::check_unit_disc(detail::cplx<double>(p, "r"), "r");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    using C = Complex<R>;
    const R a = real<R>(p, "a"), x = real<R>(p, "x"), y = real<R>(p, "y");
    const C b = cplx<R>(p, "b"), bp = cplx<R>(p, "bp"), d = conj(b), dp = conj(bp), r = cplx<R>(p, "r");
    const C A(a), bd = b + d, s = R(2) * A + b + d;
    auto px = lazy<C>([&](std::size_t n) { return chahn_rec_all(CHahnParams<R>{A, b, A, d}, n, x); });
    auto py = lazy<C>([&](std::size_t n) { return chahn_rec_all(CHahnParams<R>{A, bp, A, dp}, n, y); });
    C coef(1);
    std::size_t inner = 0;
    auto term = [&](std::size_t j) {
      if (j > 0) {
        const R rj = R(static_cast<long>(j - 1));
        coef *= -r * (rj + 1) / ((2 * a + rj) * (bd + rj)) * shifted_poch_ratio(j - 1, s);
      }
      const R rj = R(static_cast<long>(j));
      auto f = hyp2f1(A + d + rj, A + dp + rj, s + 2 * rj, r, pol);
      inner += f.terms_used;
      return coef * f.value * px.at(j) * py.at(j);
    };
    auto lhs = sum_terms<R>(term, pol);
    SideMeta lm = SideMeta::of(lhs);
    lm.terms += inner;

    auto f1 = hyp2f1(C(a, x), C(a, y), C(2 * a), r, pol);
    auto f2 = hyp2f1(d - C(R(0), x), dp - C(R(0), y), bd, r, pol);
    SideMeta rm = SideMeta::of(f1);
    rm += SideMeta::of(f2);
    return {lhs.value, f1.value * f2.value, lm, rm, ""};
  }
};

struct MpSpoisson {
  static constexpr const char* id = "mp_spoisson";
  static constexpr const char* summary =
      "product of two Meixner-Pollaczek kernels as a sum of kernels with S_j coefficients";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 50;
  static std::vector<std::string> params() { return {"k1", "k2", "phi", "t", "x1", "x2", "y1", "y2"}; }

  static ParamMap sample(Sampler& s) {
    ParamMap p{{"k1", s.uniform(0.2, 3.0)}, {"k2", s.uniform(0.2, 3.0)}, {"x1", s.uniform(-5, 5)},
               {"x2", s.uniform(-5, 5)},    {"y1", s.uniform(-5, 5)},    {"y2", s.uniform(-5, 5)}};
    double phi = s.uniform(0.2, M_PI - 0.2);
    Complex<double> t;
    detail::sample_r(s, phi, &t);
    p["phi"] = phi;
    p["t"] = t;
    return p;
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    check_mp(real<double>(p, "k1"), real<double>(p, "phi"), "k1");
    check_mp(real<double>(p, "k2"), real<double>(p, "phi"), "k2");
    for (auto n : {"x1", "x2", "y1", "y2"}) real<double>(p, n);
    check_unit_disc(cplx<double>(p, "t"), "t");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    using C = Complex<R>;
    using std::exp;
    using std::log;
    using std::sin;
    const R k1 = real<R>(p, "k1"), k2 = real<R>(p, "k2"), phi = real<R>(p, "phi");
    const R x1 = real<R>(p, "x1"), x2 = real<R>(p, "x2"), y1 = real<R>(p, "y1"), y2 = real<R>(p, "y2");
    const C t = cplx<R>(p, "t");
    auto v1 = mp_kernel_sum(k1, phi, KernelPoint<R>{t, x1, y1}, pol);
    auto v2 = mp_kernel_sum(k2, phi, KernelPoint<R>{t, x2, y2}, pol);
    SideMeta lm = SideMeta::of(v1);
    lm += SideMeta::of(v2);

    const R log4s2 = log(4 * sin(phi) * sin(phi));
    auto px = lazy<C>([&](std::size_t n) { return chahn_rec_all(sj_mp_chahn_params(k1, k2, x1, x2), n, x1); });
    auto py = lazy<C>([&](std::size_t n) { return chahn_rec_all(sj_mp_chahn_params(k1, k2, y1, y2), n, y1); });
    const KernelPoint<R> pt{t, x1 + x2, y1 + y2};
    C tj(1);
    std::size_t inner = 0;
    auto term = [&](std::size_t j) {
      if (j > 0) tj *= t;
      const R rj = R(static_cast<long>(j));
      const R K = k1 + k2 + rj;
      auto v = mp_kernel_closed_scaled(K, phi, pt, pol);
      inner += v.terms_used;
      R scale = exp(2 * sj_mp_log_scale(k1, k2, j) - lgamma_real(2 * K) + rj * log4s2);
      return tj * v.value * px.at(j) * py.at(j) * scale;
    };
    auto rhs = sum_terms<R>(term, pol);
    SideMeta rm = SideMeta::of(rhs);
    rm.terms += inner;
    return {v1.value * v2.value, rhs.value, lm, rm, ""};
  }
};

struct JacobiBessel {
  static constexpr const char* id = "jacobi_bessel";
  static constexpr const char* summary = "bilinear generating function for Jacobi polynomials with Bessel functions";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 30;
  static constexpr std::size_t max_j = 40;
  static std::vector<std::string> params() { return {"alpha", "beta", "x", "y", "z"}; }

  static ParamMap sample(Sampler& s) {
    return {{"alpha", s.uniform(-0.5, 3)}, {"beta", s.uniform(-0.5, 3)}, {"x", s.uniform(-0.9, 0.9)},
            {"y", s.uniform(-0.9, 0.9)},   {"z", s.uniform(0, 10)}};
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    double al = real<double>(p, "alpha"), be = real<double>(p, "beta");
    if (!(al > -1 && be > -1)) throw HypothesisError("alpha, beta must be > -1");
    double x = real<double>(p, "x"), y = real<double>(p, "y");
    if (!(std::fabs(x) < 1 && std::fabs(y) < 1)) throw HypothesisError("x, y must lie in (-1, 1)");
    double z = real<double>(p, "z");
    if (!(z >= 0 && z <= 30)) throw RangeError("z must lie in [0, 30]");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    using std::exp;
    using std::pow;
    using std::sqrt;
    const R al = real<R>(p, "alpha"), be = real<R>(p, "beta"), x = real<R>(p, "x"), y = real<R>(p, "y");
    const R z = real<R>(p, "z");
    const auto Px = jacobi_rec_all(al, be, max_j, x);
    const auto Py = jacobi_rec_all(al, be, max_j, y);
    auto term = [&](std::size_t j) {
      const R rj = R(static_cast<long>(j));
      const R nu = al + be + 2 * rj + 1;
      R jn = bessel_j(nu, z);
      if (jn == 0) return Complex<R>(0);
      R lc = lgamma_real(rj + 1) + lgamma_real(al + be + rj + 1) - lgamma_real(al + rj + 1) -
             lgamma_real(be + rj + 1);
      R c = exp(lc) * nu * (j % 2 ? R(-1) : R(1));
      return Complex<R>(c * Px[j] * Py[j] * jn);
    };
    TruncationPolicy jp = pol;
    jp.max_terms = std::min<std::size_t>(pol.max_terms, max_j);
    auto lhs = sum_terms<R>(term, jp);

    R rhs(0);
    if (z != 0) {
      const R u = (1 - x) * (1 - y), v = (1 + x) * (1 + y);
      rhs = pow(R(2), al + be - 1) * pow(u, -al / 2) * pow(v, -be / 2) * z * bessel_j(al, z / 2 * sqrt(u)) *
            bessel_j(be, z / 2 * sqrt(v));
    }
    return {lhs.value, Complex<R>(rhs), SideMeta::of(lhs), SideMeta::finite(2), ""};
  }
};

namespace detail {

inline void sample_chahn_finite(Sampler& s, ParamMap& p) {
  sample_chahn_block(s, p);
  p["K"] = double(s.integer(0, 10));
}

}  // namespace detail

struct ChahnFinite {
  static constexpr const char* id = "chahn_finite";
  static constexpr const char* summary = "terminating continuous Hahn bilinear sum equal to a balanced 4F3";
  static constexpr double tol = 1e-9;
  static constexpr std::size_t count = 30;
  static std::vector<std::string> params() { return {"a", "b", "bp", "x", "y", "K"}; }

  static ParamMap sample(Sampler& s) {
    ParamMap p;
    detail::sample_chahn_finite(s, p);
    return p;
  }
  static void validate(const ParamMap& p) {
    detail::check_chahn_block(p);
    detail::count(p, "K", 200);
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy&) {
    using namespace detail;
    using C = Complex<R>;
    const R a = real<R>(p, "a"), x = real<R>(p, "x"), y = real<R>(p, "y");
    const C b = cplx<R>(p, "b"), bp = cplx<R>(p, "bp"), d = conj(b), dp = conj(bp);
    const std::size_t K = detail::count(p, "K", 200);
    const C A(a), s = R(2) * A + b + d, I(R(0), R(1));
    const R rK = R(static_cast<long>(K));
    const CHahnParams<R> P1{A, b, A, d}, P2{A, bp, A, dp};
    C lhs(0);
    for (std::size_t j = 0; j <= K; ++j) {
      const R rj = R(static_cast<long>(j));
      C num = pochhammer(C(-rK), j) * pochhammer(s, 2 * j) * gamma_real(rj + 1);
      C den = pochhammer(C(2 * a), j) * pochhammer(b + d, j) * pochhammer(s + rj - R(1), j) *
              pochhammer(A + d, j) * pochhammer(A + dp, j) * pochhammer(s + rK, j);
      lhs += num / den * chahn_poly(P1, j, x) * chahn_poly(P2, j, y);
    }
    C pre = pochhammer(d - I * x, K) * pochhammer(dp - I * y, K) * pochhammer(s, K) /
            (pochhammer(A + d, K) * pochhammer(A + dp, K) * pochhammer(b + d, K));
    auto f = terminating_pfq<R>({C(-rK), C(1 - rK) - b - d, A + I * x, A + I * y},
                                {C(2 * a), C(1 - rK) - d + I * x, C(1 - rK) - dp + I * y}, C(1));
    return {lhs, pre * f.value, SideMeta::finite(K + 1), SideMeta::finite(f.terms), ""};
  }
};

struct ChahnFiniteWhipple {
  static constexpr const char* id = "chahn_finite_whipple";
  static constexpr const char* summary = "balanced 4F3 rewrite of the terminating sum in the case b' = d";
  static constexpr double tol = 1e-9;
  static constexpr std::size_t count = 30;
  static std::vector<std::string> params() { return {"a", "b", "x", "y", "K"}; }

  static ParamMap sample(Sampler& s) {
    ParamMap p;
    detail::sample_chahn_finite(s, p);
    p.erase("bp");
    return p;
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    if (!(real<double>(p, "a") > 0)) throw HypothesisError("a must be > 0");
    if (!(cplx<double>(p, "b").re > 0)) throw HypothesisError("Re b must be > 0");
    real<double>(p, "x");
    real<double>(p, "y");
    detail::count(p, "K", 200);
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy&) {
    using namespace detail;
    using C = Complex<R>;
    const R a = real<R>(p, "a"), x = real<R>(p, "x"), y = real<R>(p, "y");
    const C b = cplx<R>(p, "b"), d = conj(b), dp = b;
    const std::size_t K = detail::count(p, "K", 200);
    const R rK = R(static_cast<long>(K));
    const C A(a), I(R(0), R(1));
    auto lhs = terminating_pfq<R>({C(-rK), C(1 - rK) - b - d, A + I * x, A + I * y},
                                  {C(2 * a), C(1 - rK) - d + I * x, C(1 - rK) - dp + I * y}, C(1));
    const C axy = A + b + I * (x - y);
    C pre = pochhammer(A + d, K) * pochhammer(axy, K) / (pochhammer(d - I * x, K) * pochhammer(b - I * y, K));
    auto rhs = terminating_pfq<R>({C(-rK), R(2) * A + b + d + rK - R(1), A + I * x, A - I * y}, {C(2 * a), A + d, axy},
                                  C(1));
    return {lhs.value, pre * rhs.value, SideMeta::finite(lhs.terms), SideMeta::finite(rhs.terms), ""};
  }
};

namespace detail {

template <class R>
SidePair<R> mult_2f1_sides(const Complex<R>& a, const Complex<R>& b, const Complex<R>& c, const Complex<R>& ap,
                           const Complex<R>& bp, const Complex<R>& cp, const Complex<R>& z,
                           const TruncationPolicy& pol) {
  using C = Complex<R>;
  using W = typename qkl::detail::wider<R>::type;
  using CW = Complex<W>;
  auto f1 = hyp2f1(a, b, c, z, pol);
  auto f2 = hyp2f1(ap, bp, cp, z, pol);
  SideMeta lm = SideMeta::of(f1);
  lm += SideMeta::of(f2);

  const CW wa = a.template cast<W>(), wb = b.template cast<W>(), wc = c.template cast<W>(),
           wap = ap.template cast<W>(), wbp = bp.template cast<W>(), wcp = cp.template cast<W>();
  const CW ws = wc + wcp;
  CW F(1);
  C zj(1);
  std::size_t inner = 0;
  auto term = [&](std::size_t j) {
    if (j > 0) {
      const W rj = W(static_cast<long>(j - 1));
      F *= (wc + rj) * (wcp + rj) / (rj + 1) * shifted_poch_ratio(j - 1, ws);
      zj *= z;
    }
    CW Cj = v_over_poch(j, wa, wap, wc, wcp) * v_over_poch(j, wb, wbp, wc, wcp) * F;
    if (Cj.re == 0 && Cj.im == 0) return C(0);
    const R rj = R(static_cast<long>(j));
    auto f = hyp2f1(a + ap + rj, b + bp + rj, c + cp + 2 * rj, z, pol);
    inner += f.terms_used;
    return Cj.template cast<R>() * zj * f.value;
  };
  auto rhs = sum_terms<R>(term, pol);
  SideMeta rm = SideMeta::of(rhs);
  rm.terms += inner;
  return {f1.value * f2.value, rhs.value, lm, rm, ""};
}

inline void check_mult(const ParamMap& p, bool square) {
  auto c = cplx<double>(p, "c");
  auto cp = square ? c : cplx<double>(p, "cp");
  if (is_nonpos_int(c) || is_nonpos_int(cp)) throw HypothesisError("c, c' must not be nonpositive integers");
  auto caveat = [](const Complex<double>& u, const Complex<double>& v) {
    return is_nonpos_int(u + v) && !(is_nonpos_int(u) && is_nonpos_int(v));
  };
  if (!square) {
    if (caveat(cplx<double>(p, "a"), cplx<double>(p, "ap")) || caveat(cplx<double>(p, "b"), cplx<double>(p, "bp")))
      throw HypothesisError("a+a' (or b+b') is a nonpositive integer while a, a' are not both nonpositive integers");
  } else {
    auto a = cplx<double>(p, "a"), b = cplx<double>(p, "b");
    if (caveat(a, a) || caveat(b, b)) throw HypothesisError("2a (or 2b) is a nonpositive integer");
  }
  check_unit_disc(cplx<double>(p, "z"), "z");
}

inline Complex<double> sample_ab(Sampler& s) { return {s.uniform(-1, 2), s.uniform(-1, 1)}; }

}  // namespace detail

struct Mult2F1 {
  static constexpr const char* id = "mult_2f1";
  static constexpr const char* summary = "multiplication formula for a product of two 2F1";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 30;
  static std::vector<std::string> params() { return {"a", "b", "c", "ap", "bp", "cp", "z"}; }

  static ParamMap sample(Sampler& s) {
    return {{"a", detail::sample_ab(s)},  {"b", detail::sample_ab(s)},  {"c", s.uniform(0.5, 3)},
            {"ap", detail::sample_ab(s)}, {"bp", detail::sample_ab(s)}, {"cp", s.uniform(0.5, 3)},
            {"z", s.disc(0.5)}};
  }
  static void validate(const ParamMap& p) { detail::check_mult(p, false); }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using detail::cplx;
    return detail::mult_2f1_sides(cplx<R>(p, "a"), cplx<R>(p, "b"), cplx<R>(p, "c"), cplx<R>(p, "ap"),
                                  cplx<R>(p, "bp"), cplx<R>(p, "cp"), cplx<R>(p, "z"), pol);
  }
};

struct BurchnallChaundy {
  static constexpr const char* id = "burchnall_chaundy";
  static constexpr const char* summary = "square of a 2F1 by the multiplication formula";
  static constexpr double tol = 1e-9;
  static constexpr std::size_t count = 20;
  static std::vector<std::string> params() { return {"a", "b", "c", "z"}; }

  static ParamMap sample(Sampler& s) {
    return {{"a", detail::sample_ab(s)}, {"b", detail::sample_ab(s)}, {"c", s.uniform(0.5, 3)}, {"z", s.disc(0.5)}};
  }
  static void validate(const ParamMap& p) { detail::check_mult(p, true); }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using detail::cplx;
    const auto a = cplx<R>(p, "a"), b = cplx<R>(p, "b"), c = cplx<R>(p, "c");
    return detail::mult_2f1_sides(a, b, c, a, b, c, cplx<R>(p, "z"), pol);
  }
};

struct Conf1F1 {
  static constexpr const char* id = "conf_1f1";
  static constexpr const char* summary = "product of two 1F1 as a sum over Jacobi polynomials";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 30;
  static std::vector<std::string> params() { return {"a", "c", "ap", "cp", "x", "y"}; }

  static ParamMap sample(Sampler& s) {
    return {{"a", detail::sample_ab(s)}, {"c", s.uniform(0.5, 3)}, {"ap", detail::sample_ab(s)},
            {"cp", s.uniform(0.5, 3)},   {"x", s.uniform(0, 3)},   {"y", s.uniform(0, 3)}};
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    auto c = cplx<double>(p, "c"), cp = cplx<double>(p, "cp");
    if (is_nonpos_int(c) || is_nonpos_int(cp)) throw HypothesisError("c, c' must not be nonpositive integers");
    if (is_nonpos_int(c + cp)) throw HypothesisError("c + c' must not be a nonpositive integer");
    real<double>(p, "x");
    real<double>(p, "y");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    using C = Complex<R>;
    using W = typename qkl::detail::wider<R>::type;
    const C a = cplx<R>(p, "a"), c = cplx<R>(p, "c"), ap = cplx<R>(p, "ap"), cp = cplx<R>(p, "cp");
    const R x = real<R>(p, "x"), y = real<R>(p, "y");
    auto f1 = hyp_pfq<R>({a}, {c}, C(x), pol);
    auto f2 = hyp_pfq<R>({ap}, {cp}, C(y), pol);
    SideMeta lm = SideMeta::of(f1);
    lm += SideMeta::of(f2);

    const R w = x + y;
    if (w == 0) return {f1.value * f2.value, C(1), lm, SideMeta::finite(1), ""};
    const C s = c + cp;
    const C u(1 - 2 * x / w);
    auto P = lazy<C>([&](std::size_t n) { return jacobi_rec_all(c - R(1), cp - R(1), n, u); });
    const Complex<W> wa = a.template cast<W>(), wc = c.template cast<W>(), wap = ap.template cast<W>(),
                     wcp = cp.template cast<W>();
    R wj(1);
    std::size_t inner = 0;
    auto term = [&](std::size_t j) {
      const R rj = R(static_cast<long>(j));
      if (j > 0) wj *= w;
      C V = v_over_poch(j, wa, wap, wc, wcp).template cast<R>();
      auto f = hyp_pfq<R>({a + ap + rj}, {s + 2 * rj}, C(w), pol);
      inner += f.terms_used;
      return V * P.at(j) / pochhammer(s + rj - R(1), j) * wj * f.value;
    };
    auto rhs = sum_terms<R>(term, pol);
    SideMeta rm = SideMeta::of(rhs);
    rm.terms += inner;
    return {f1.value * f2.value, rhs.value, lm, rm, ""};
  }
};

struct HahnBilinearDiscrete {
  static constexpr const char* id = "hahn_bilinear_discrete";
  static constexpr const char* summary = "bilinear sum of Hahn polynomials equal to a product of two 2F1";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 30;
  static constexpr const char* note =
      "coefficient includes the 1/j! factor; without it the two sides differ";
  static std::vector<std::string> params() { return {"alpha", "beta", "M", "N", "x", "y", "z"}; }

  static ParamMap sample(Sampler& s) {
    long M = s.integer(1, 6), N = s.integer(1, 6);
    return {{"alpha", s.uniform(-0.5, 3)}, {"beta", s.uniform(-0.5, 3)},      {"M", double(M)},
            {"N", double(N)},              {"x", double(s.integer(0, M))},    {"y", double(s.integer(0, N))},
            {"z", s.uniform(-0.9, 0.9)}};
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    double al = real<double>(p, "alpha"), be = real<double>(p, "beta");
    if (!(al > -1 && be > -1)) throw HypothesisError("alpha, beta must be > -1");
    auto M = detail::count(p, "M", 200), N = detail::count(p, "N", 200);
    if (M < 1 || N < 1) throw ParamError("M, N must be >= 1");
    if (detail::count(p, "x", M) > M || detail::count(p, "y", N) > N)
      throw ParamError("x must lie in {0..M} and y in {0..N}");
    real<double>(p, "z");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy&) {
    using namespace detail;
    using C = Complex<R>;
    const R al = real<R>(p, "alpha"), be = real<R>(p, "beta"), z = real<R>(p, "z");
    const std::size_t M = detail::count(p, "M", 200), N = detail::count(p, "N", 200);
    const std::size_t xi = detail::count(p, "x", M), yi = detail::count(p, "y", N);
    const R x = R(static_cast<long>(xi)), y = R(static_cast<long>(yi));
    const R rM = R(static_cast<long>(M)), rN = R(static_cast<long>(N));
    const HahnParams<R> PM{C(al), C(be), M}, PN{C(al), C(be), N};
    C lhs(0);
    R zj(1);
    const std::size_t J = std::min(M, N);
    for (std::size_t j = 0; j <= J; ++j) {
      const R rj = R(static_cast<long>(j));
      R coef = pochhammer(al + 1, j) * pochhammer(-rM, j) * pochhammer(-rN, j) /
               (gamma_real(rj + 1) * pochhammer(be + 1, j) * pochhammer(al + be + rj + 1, j));
      auto f = terminating_pfq<R>({C(rj - rM), C(rj - rN)}, {C(al + be + 2 * rj + 2)}, C(z));
      lhs += hahn_poly(PM, j, x) * hahn_poly(PN, j, y) * coef * f.value * zj;
      zj *= z;
    }
    auto g1 = terminating_pfq<R>({C(-x), C(-y)}, {C(al + 1)}, C(z));
    auto g2 = terminating_pfq<R>({C(x - rM), C(y - rN)}, {C(be + 1)}, C(z));
    return {lhs, g1.value * g2.value, SideMeta::finite(J + 1), SideMeta::finite(g1.terms + g2.terms), note};
  }
};

}  // namespace qkl::ids
