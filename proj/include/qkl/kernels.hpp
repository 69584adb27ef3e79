// Poisson kernels: bilinear sums over orthonormal polynomials and the
// corresponding closed forms.
#pragma once

#include "errors.hpp"
#include "hyper.hpp"
#include "polys.hpp"
#include "scalar.hpp"
#include "series_core.hpp"

namespace qkl {

template <class R>
struct KernelPoint {
  Complex<R> t;
  R x = 0, y = 0;
  Complex<R> s{R(1)}, sigma{R(1)};

  R theta() const { return detail::acos_checked(x); }
  R phi_angle() const { return detail::acos_checked(y); }
};

namespace detail {

template <class R>
void check_t(const Complex<R>& t) {
  if (!(abs(t) < 1)) throw DivergenceError("kernel needs |t| < 1");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Meixner-Pollaczek

/// sum_n p_n(x) p_n(y) t^n, orthonormal polynomials by upward recurrence.
template <class R>
SeriesEval<R> mp_kernel_sum(const R& k, const R& phi, const KernelPoint<R>& pt,
                            const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  MPParams<R>{k, phi}.validate();
  detail::check_t(pt.t);
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  const R sn = sin(phi), cs = cos(phi);
  R px = exp(-lgamma_real(2 * k) / 2), py = px, pxm(0), pym(0), am(0);
  Complex<R> tn(1);
  std::size_t cur = 0;
  auto term = [&](std::size_t n) {
    while (cur < n) {
      R rn = R(static_cast<long>(cur));
      R an = sqrt((rn + 1) * (rn + 2 * k));
      R nx = ((2 * pt.x * sn + 2 * (rn + k) * cs) * px - am * pxm) / an;
      R ny = ((2 * pt.y * sn + 2 * (rn + k) * cs) * py - am * pym) / an;
      pxm = px;
      pym = py;
      px = nx;
      py = ny;
      am = an;
      tn *= pt.t;
      ++cur;
    }
    return tn * (px * py);
  };
  return sum_terms<R>(term, policy);
}

/// Closed form without the 1/Gamma(2k) factor, with 2F1 metadata.
template <class R>
SeriesEval<R> mp_kernel_closed_scaled(const R& k, const R& phi, const KernelPoint<R>& pt,
                                      const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  MPParams<R>{k, phi}.validate();
  detail::check_t(pt.t);
  using std::sin;
  using C = Complex<R>;
  const C one(1);
  const C t = pt.t;
  const C omt = one - t;
  const C omte = one - t * expi(2 * phi);
  // Re(1-t) > 0 and Re(1 - t e^{2i phi}) > 0 for |t| < 1: no branch crossing.
  if (!(omt.re > 0 && omte.re > 0)) throw DomainError("mp_kernel_closed: principal branch assumption violated");
  const R s2 = sin(phi) * sin(phi);
  const C r = -(t * (4 * s2)) / (omt * omt);
  const R xy = pt.x + pt.y;
  auto f = hyp2f1(C(k, pt.x), C(k, pt.y), C(2 * k), r, policy);
  C pre = complex_pow_principal(omte, C(R(0), xy)) * complex_pow_principal(omt, C(-2 * k, -xy));
  f.value = pre * f.value;
  return f;
}

/// (1/Gamma(2k)) (1 - t e^{2i phi})^{i(x+y)} (1-t)^{-2k-ix-iy} 2F1(k+ix, k+iy; 2k; r)
template <class R>
Complex<R> mp_kernel_closed(const R& k, const R& phi, const KernelPoint<R>& pt,
                            const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  using std::exp;
  auto scaled = mp_kernel_closed_scaled(k, phi, pt, policy);  // validates k, phi first
  return scaled.value * exp(-lgamma_real(2 * k));
}

// ---------------------------------------------------------------------------
// Al-Salam-Chihara

namespace detail {

template <class R>
void check_s(const Complex<R>& s, const R& qk, const char* name) {
  using std::abs;
  R m = qkl::abs(s);
  bool unit = abs(m - 1) <= R(1e-12);
  bool real_in = abs(s.im) <= R(1e-14) * m && m > qk && m < 1 / qk;
  if (!(unit || real_in))
    throw HypothesisError(std::string(name) + " must be real with q^k < |s| < q^-k or lie on the unit circle");
}

template <class R>
void check_ac_point(const R& k, const R& q, const KernelPoint<R>& pt) {
  using std::pow;
  QBase<R> qb(q);
  if (!(k > 0)) throw HypothesisError("k must be > 0");
  check_t(pt.t);
  acos_checked(pt.x);
  acos_checked(pt.y);
  R qk = pow(q, k);
  check_s(pt.s, qk, "s");
  check_s(pt.sigma, qk, "sigma");
}

}  // namespace detail

/// sum_n r_n(x; q^k s, q^k/s) r_n(y; q^k sigma, q^k/sigma) t^n
template <class R>
SeriesEval<R> ac_kernel_sum(const R& k, const R& q, const KernelPoint<R>& pt,
                            const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  detail::check_ac_point(k, q, pt);
  using C = Complex<R>;
  using std::pow;
  const R qk = pow(q, k);
  const C a1 = pt.s * qk, b1 = C(qk) / pt.s, a2 = pt.sigma * qk, b2 = C(qk) / pt.sigma;
  const C s1 = a1 + b1, s2 = a2 + b2, ab = C(qk * qk);
  C rx(1), ry(1), rxm(0), rym(0), alm(0);
  C tn(1);
  R qn(1);
  std::size_t cur = 0;
  // orthonormal form: alpha_n r_{n+1} = (2x - (a+b) q^n) r_n - alpha_{n-1} r_{n-1},
  // alpha_n = sqrt((1-q^{n+1})(1-ab q^n))
  auto term = [&](std::size_t n) {
    while (cur < n) {
      C al = sqrt(C(1 - qn * q) * (C(1) - ab * qn));
      C nx = ((C(2 * pt.x) - s1 * qn) * rx - alm * rxm) / al;
      C ny = ((C(2 * pt.y) - s2 * qn) * ry - alm * rym) / al;
      rxm = rx;
      rym = ry;
      rx = nx;
      ry = ny;
      alm = al;
      qn *= q;
      tn *= pt.t;
      ++cur;
    }
    return tn * rx * ry;
  };
  return sum_terms<R>(term, policy);
}

/// q-product prefactor times 8W7, the closed form of the kernel.
template <class R>
SeriesEval<R> ac_kernel_closed_eval(const R& k, const R& q, const KernelPoint<R>& pt,
                                    const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  detail::check_ac_point(k, q, pt);
  using C = Complex<R>;
  using std::pow;
  const R qk = pow(q, k);
  const R th = pt.theta(), ph = pt.phi_angle();
  const C t = pt.t, s = pt.s, sg = pt.sigma;
  const C emph = expi(-ph), emth = expi(-th);
  const C pre = q_inf_ratio<R>({t * emph * s * qk, t * emph / s * qk, t * emth * sg * qk, t * emth / sg * qk},
                               {t * expi(th - ph), t * expi(ph - th), t * expi(-th - ph),
                                t * expi(-th - ph) * (qk * qk)},
                               q);
  auto w = vwp_8w7<R>(t * expi(-th - ph) * (qk * qk / q),
                      {emth * s * qk, emth / s * qk, emph * sg * qk, emph / sg * qk, t * expi(-th - ph)},
                      QBase<R>(q), t * expi(th + ph), policy);
  w.value = pre * w.value;
  return w;
}

template <class R>
Complex<R> ac_kernel_closed(const R& k, const R& q, const KernelPoint<R>& pt,
                            const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  return ac_kernel_closed_eval(k, q, pt, policy).value;
}

/// The transformed closed form (different 8W7, argument q^k e^{-i theta}/s).
template <class R>
SeriesEval<R> ac_kernel_closed_alt_eval(const R& k, const R& q, const KernelPoint<R>& pt,
                                        const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  detail::check_ac_point(k, q, pt);
  using C = Complex<R>;
  using std::pow;
  const R qk = pow(q, k);
  const R th = pt.theta(), ph = pt.phi_angle();
  const C t = pt.t, s = pt.s, sg = pt.sigma;
  const C eth = expi(th);
  const C zarg = expi(-th) / s * qk;
  if (!(abs(zarg) < 1)) throw DivergenceError("ac_kernel_closed_alt needs |q^k e^{-i theta} / s| < 1");
  const C pre = q_inf_ratio<R>({t * t, zarg, t * eth * sg * qk, t * eth / sg * qk, t * s * expi(ph) * qk,
                                t * s * expi(-ph) * qk},
                               {C(qk * qk), s * t * t * eth * qk, t * expi(th + ph), t * expi(th - ph),
                                t * expi(-th - ph), t * expi(ph - th)},
                               q);
  auto w = vwp_8w7<R>(s * t * t * eth * (qk / q),
                      {t * expi(th + ph), t * expi(th - ph), s * eth * qk, s * t / sg, s * t * sg}, QBase<R>(q),
                      zarg, policy);
  w.value = pre * w.value;
  return w;
}

template <class R>
Complex<R> ac_kernel_closed_alt(const R& k, const R& q, const KernelPoint<R>& pt,
                                const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  return ac_kernel_closed_alt_eval(k, q, pt, policy).value;
}

}  // namespace qkl
