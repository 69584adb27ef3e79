// Orthogonal polynomial families. The *_poly functions evaluate the
// hypergeometric definitions with precision escalation; the *_rec functions
// generate whole sequences by three-term recurrences for summation drivers.
#pragma once

#include "errors.hpp"
#include "hyper.hpp"
#include "scalar.hpp"
#include "series_core.hpp"

#include <array>
#include <vector>

namespace qkl {

template <class R>
struct PolyValue {
  Complex<R> value;
  R error_estimate = 0;
  std::size_t terms = 0;
  int digits = 0;
};

namespace detail {

inline constexpr double kRealityTol = 1e-10;

template <class R>
R enforce_real(const PolyValue<R>& v, const char* what) {
  using std::abs;
  R lim = R(kRealityTol) * abs(v.value.re) + R(16) * v.error_estimate;
  if (abs(v.value.im) > lim)
    throw RealityError(std::string(what) + ": imaginary residue exceeds the reality bound");
  return v.value.re;
}

template <class R>
PolyValue<R> from_escalated(const EscalatedValue<R>& e) {
  return {e.value, e.error_estimate, e.terms, e.digits};
}

template <class T>
Complex<T> i_pow(std::size_t n) {
  switch (n % 4) {
    case 0: return Complex<T>(T(1), T(0));
    case 1: return Complex<T>(T(0), T(1));
    case 2: return Complex<T>(T(-1), T(0));
    default: return Complex<T>(T(0), T(-1));
  }
}

template <class T>
T real_pow_int(T x, std::size_t n) {
  T out(1);
  for (std::size_t i = 0; i < n; ++i) out *= x;
  return out;
}

template <class R>
R acos_checked(const R& x) {
  using std::acos;
  using std::abs;
  if (!(abs(x) <= 1)) throw DomainError("argument x must lie in [-1, 1]");
  return acos(x);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Meixner-Pollaczek

template <class R>
struct MPParams {
  R k;
  R phi;
  void validate() const {
    if (!(k > 0)) throw HypothesisError("MP: k must be > 0");
    if (!(phi > 0 && phi < pi<R>())) throw HypothesisError("MP: phi must lie in (0, pi)");
  }
};

/// sqrt(n! / Gamma(n+2k))
template <class R>
R mp_norm_factor(const R& k, std::size_t n) {
  using std::exp;
  return exp((lgamma_real(R(static_cast<long>(n + 1))) - lgamma_real(R(static_cast<long>(n)) + 2 * k)) / 2);
}

template <class R>
PolyValue<R> mp_poly_eval(const MPParams<R>& p, std::size_t n, const R& x) {
  p.validate();
  auto f = [&]<class T>() {
    T k = real_cast<T>(p.k), phi = real_cast<T>(p.phi), xx = real_cast<T>(x);
    Complex<T> up2(k, xx);
    Complex<T> z = Complex<T>(1) - expi(-2 * phi);
    T c = 2 * k;
    auto s = finite_sum<T>(n, [&](std::size_t m) {
      T rm = T(static_cast<long>(m));
      T nn = T(static_cast<long>(n));
      return z * ((rm - nn) / ((c + rm) * (rm + 1))) * (up2 + rm);
    });
    T pre(1);
    for (std::size_t i = 0; i < n; ++i) pre *= (c + T(static_cast<long>(i))) / T(static_cast<long>(i + 1));
    Complex<T> ph = expi(phi * T(static_cast<long>(n))) * pre;
    s.value = s.value * ph;
    s.abs_sum *= pre;
    return s;
  };
  return detail::from_escalated(escalate<R>(f));
}

/// P_n^{(k)}(x; phi), or the orthonormal p_n when `orthonormal` is set.
template <class R>
R mp_poly(const MPParams<R>& p, std::size_t n, const R& x, bool orthonormal = false) {
  R v = detail::enforce_real(mp_poly_eval(p, n, x), "mp_poly");
  return orthonormal ? v * mp_norm_factor(p.k, n) : v;
}

/// Orthonormal p_0..p_nmax by the three-term recurrence
/// a_n p_{n+1} = (2y sin(phi) + 2(n+k) cos(phi)) p_n - a_{n-1} p_{n-1}.
template <class R>
std::vector<R> mp_poly_rec_all(const MPParams<R>& p, std::size_t nmax, const R& y) {
  p.validate();
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  std::vector<R> out(nmax + 1);
  const R k = p.k, s = sin(p.phi), c = cos(p.phi);
  out[0] = exp(-lgamma_real(2 * k) / 2);
  R prev(0), a_prev(0);
  for (std::size_t n = 0; n < nmax; ++n) {
    R rn = R(static_cast<long>(n));
    R an = sqrt((rn + 1) * (rn + 2 * k));
    R next = ((2 * y * s + 2 * (rn + k) * c) * out[n] - a_prev * prev) / an;
    prev = out[n];
    a_prev = an;
    out[n + 1] = next;
  }
  return out;
}

template <class R>
R mp_poly_rec(const MPParams<R>& p, std::size_t n, const R& y) {
  return mp_poly_rec_all(p, n, y)[n];
}

// ---------------------------------------------------------------------------
// continuous Hahn

template <class R>
struct CHahnParams {
  Complex<R> a, b, c, d;
};

template <class R>
PolyValue<R> chahn_poly_eval(const CHahnParams<R>& p, std::size_t n, const R& x) {
  const Complex<R> s = p.a + p.b + p.c + p.d;
  std::vector<Complex<R>> up{Complex<R>(-R(static_cast<long>(n))), s + R(static_cast<long>(n)) - R(1),
                             p.a + Complex<R>(0, x)};
  std::vector<Complex<R>> lo{p.a + p.c, p.a + p.d};
  auto nt = detect_termination(up);
  detail::check_termination_vs_pole(nt, detail::lower_pole(lo, std::optional<R>()));
  for (const auto& l : lo) {
    auto m = nonpositive_integer_index(l);
    if (m && *m < n) throw DenominatorPoleError("chahn_poly: (a+c) or (a+d) is a nonpositive integer");
  }
  auto f = [&]<class T>() {
    Complex<T> a = p.a.template cast<T>(), b = p.b.template cast<T>(), c = p.c.template cast<T>(),
               d = p.d.template cast<T>();
    T xx = real_cast<T>(x), nn = T(static_cast<long>(n));
    Complex<T> u2 = a + b + c + d + nn - T(1), u3 = a + Complex<T>(T(0), xx);
    Complex<T> l1 = a + c, l2 = a + d;
    auto sum = finite_sum<T>(*nt, [&](std::size_t m) {
      T rm = T(static_cast<long>(m));
      return (u2 + rm) * (u3 + rm) * (rm - nn) / ((l1 + rm) * (l2 + rm) * (rm + 1));
    });
    Complex<T> pre = detail::i_pow<T>(n);
    for (std::size_t i = 0; i < n; ++i) {
      T ri = T(static_cast<long>(i));
      pre *= (l1 + ri) * (l2 + ri) / (ri + 1);
    }
    sum.value = sum.value * pre;
    sum.abs_sum *= abs(pre);
    return sum;
  };
  return detail::from_escalated(escalate<R>(f));
}

/// p_n(x; a,b,c,d) = i^n (a+c)_n (a+d)_n / n! 3F2(-n, n+a+b+c+d-1, a+ix; a+c, a+d; 1)
template <class R>
Complex<R> chahn_poly(const CHahnParams<R>& p, std::size_t n, const R& x) {
  return chahn_poly_eval(p, n, x).value;
}

/// p_0..p_nmax by the three-term recurrence of the continuous Hahn family.
template <class R>
std::vector<Complex<R>> chahn_rec_all(const CHahnParams<R>& p, std::size_t nmax, const R& x) {
  using C = Complex<R>;
  const C a = p.a, b = p.b, c = p.c, d = p.d;
  const C s = a + b + c + d;
  const C I(R(0), R(1));
  const C ax = a + C(R(0), x);
  std::vector<C> out(nmax + 1);
  out[0] = C(1);
  if (nmax == 0) return out;
  out[1] = I * ((a + c) * (a + d) - s * ax);
  for (std::size_t n = 1; n < nmax; ++n) {
    R rn = R(static_cast<long>(n));
    C A = -(s + rn - R(1)) * (a + c + rn) * (a + d + rn) / ((s + 2 * rn - R(1)) * (s + 2 * rn));
    C Cn = C(rn) * (b + c + rn - R(1)) * (b + d + rn - R(1)) / ((s + 2 * rn - R(2)) * (s + 2 * rn - R(1)));
    C CM = I * (b + c + rn - R(1)) * (b + d + rn - R(1)) * (a + c + rn - R(1)) * (a + d + rn - R(1)) /
           ((s + 2 * rn - R(2)) * (s + 2 * rn - R(1)));
    C lead = -I * (s + 2 * rn - R(1)) * (s + 2 * rn) / ((rn + 1) * (s + rn - R(1)));
    out[n + 1] = lead * ((ax + A + Cn) * out[n] - CM * out[n - 1]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hahn

template <class R>
struct HahnParams {
  Complex<R> alpha, beta;
  std::size_t N;
};

/// Q_n(x; alpha, beta, N) = 3F2(-n, n+alpha+beta+1, -x; alpha+1, -N; 1)
template <class R>
Complex<R> hahn_poly(const HahnParams<R>& p, std::size_t n, const R& x) {
  if (n > p.N) throw DegreeError("hahn_poly: degree n exceeds N");
  std::vector<Complex<R>> up{Complex<R>(-R(static_cast<long>(n))),
                             p.alpha + p.beta + R(static_cast<long>(n + 1)), Complex<R>(-x)};
  std::vector<Complex<R>> lo{p.alpha + R(1), Complex<R>(-R(static_cast<long>(p.N)))};
  return terminating_pfq(up, lo, Complex<R>(1)).value;
}

// ---------------------------------------------------------------------------
// Jacobi

/// P_n^{(alpha,beta)}(x) = (alpha+1)_n / n! 2F1(-n, n+alpha+beta+1; alpha+1; (1-x)/2)
template <class R>
R jacobi_poly(const R& alpha, const R& beta, std::size_t n, const R& x) {
  auto f = [&]<class T>() {
    T al = real_cast<T>(alpha), be = real_cast<T>(beta), xx = real_cast<T>(x);
    T nn = T(static_cast<long>(n));
    T z = (1 - xx) / 2;
    auto s = finite_sum<T>(n, [&](std::size_t m) {
      T rm = T(static_cast<long>(m));
      return Complex<T>((rm - nn) * (nn + al + be + 1 + rm) / ((al + 1 + rm) * (rm + 1)) * z);
    });
    T pre(1);
    for (std::size_t i = 0; i < n; ++i) pre *= (al + 1 + T(static_cast<long>(i))) / T(static_cast<long>(i + 1));
    s.value = s.value * pre;
    s.abs_sum *= abs(pre);
    return s;
  };
  auto e = escalate<R>(f);
  return e.value.re;
}

/// P_0..P_nmax by the standard three-term recurrence; T may be real or complex.
template <class T>
std::vector<T> jacobi_rec_all(const T& al, const T& be, std::size_t nmax, const T& x) {
  std::vector<T> out(nmax + 1);
  out[0] = T(1);
  if (nmax == 0) return out;
  out[1] = (al + T(1)) + (al + be + T(2)) * (x - T(1)) / T(2);
  for (std::size_t n = 1; n < nmax; ++n) {
    T rn = T(static_cast<long>(n));
    T s = T(2) * rn + al + be;
    T c1 = T(2) * (rn + T(1)) * (rn + al + be + T(1)) * s;
    T c2 = (s + T(1)) * ((s + T(2)) * s * x + al * al - be * be);
    T c3 = T(2) * (rn + al) * (rn + be) * (s + T(2));
    out[n + 1] = (c2 * out[n] - c3 * out[n - 1]) / c1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Askey-Wilson and Al-Salam-Chihara

template <class R>
struct AWParams {
  R q;
  Complex<R> a, b, c, d;
};

template <class R>
struct ASCParams {
  R q;
  Complex<R> a, b;
};

namespace detail {

template <class R>
bool is_zero(const Complex<R>& z) {
  return z.re == 0 && z.im == 0;
}

// Moves a nonzero parameter into the first slot (the family is symmetric).
template <class R>
bool permute_nonzero_first(std::array<Complex<R>, 4>& v) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!is_zero(v[i])) {
      std::swap(v[0], v[i]);
      return true;
    }
  }
  return false;
}

// Continuous q-Hermite H_n(x|q) = sum_k [n k]_q e^{i(n-2k)theta}
template <class R>
PolyValue<R> q_hermite_eval(const R& q, std::size_t n, const R& x) {
  R theta = acos_checked(x);
  auto f = [&]<class T>() {
    T qq = real_cast<T>(q), th = real_cast<T>(theta);
    Complex<T> e2 = expi(T(-2) * th);
    TermSum<T> s{Complex<T>(0), T(0), n + 1};
    Complex<T> term = expi(th * T(static_cast<long>(n)));
    for (std::size_t k = 0; k <= n; ++k) {
      s.value += term;
      s.abs_sum += abs(term);
      if (k == n) break;
      // [n k+1] / [n k] = (1 - q^{n-k}) / (1 - q^{k+1})
      T r = (1 - real_pow_int(qq, n - k)) / (1 - real_pow_int(qq, k + 1));
      term = term * e2 * r;
    }
    return s;
  };
  return from_escalated(escalate<R>(f));
}

}  // namespace detail

template <class R>
PolyValue<R> aw_poly_eval(const AWParams<R>& p, std::size_t n, const R& x) {
  QBase<R> qb(p.q);
  std::array<Complex<R>, 4> v{p.a, p.b, p.c, p.d};
  if (!detail::permute_nonzero_first(v)) return detail::q_hermite_eval(p.q, n, x);
  R theta = detail::acos_checked(x);
  const Complex<R> a = v[0], b = v[1], c = v[2], d = v[3];
  std::vector<Complex<R>> lo{a * b, a * c, a * d};
  detail::check_termination_vs_pole(std::optional<std::size_t>(n), detail::lower_pole(lo, std::optional<R>(p.q)));
  auto f = [&]<class T>() {
    T q = real_cast<T>(p.q), th = real_cast<T>(theta);
    Complex<T> A = a.template cast<T>(), B = b.template cast<T>(), C = c.template cast<T>(),
               D = d.template cast<T>();
    Complex<T> ab = A * B, ac = A * C, ad = A * D, abcd = ab * C * D;
    Complex<T> ae = A * expi(th), aem = A * expi(-th);
    T qmn = T(1) / detail::real_pow_int(q, n);  // q^{-n}
    Complex<T> u2 = abcd * (detail::real_pow_int(q, n) / q);  // abcd q^{n-1}
    T qm(1);
    auto s = finite_sum<T>(n, [&](std::size_t) {
      Complex<T> num = Complex<T>(1 - qmn * qm) * (Complex<T>(1) - u2 * qm) * (Complex<T>(1) - ae * qm) *
                       (Complex<T>(1) - aem * qm);
      Complex<T> den = (Complex<T>(1) - ab * qm) * (Complex<T>(1) - ac * qm) * (Complex<T>(1) - ad * qm) *
                       Complex<T>(1 - qm * q);
      Complex<T> r = num / den * q;
      qm *= q;
      return r;
    });
    Complex<T> pre = q_shifted(ab, q, n) * q_shifted(ac, q, n) * q_shifted(ad, q, n) / ipow(A, static_cast<long>(n));
    s.value = s.value * pre;
    s.abs_sum *= abs(pre);
    return s;
  };
  return detail::from_escalated(escalate<R>(f));
}

/// p_n(x; a,b,c,d | q) = a^{-n} (ab,ac,ad;q)_n 4phi3(q^{-n}, abcd q^{n-1}, a e^{i theta}, a e^{-i theta}; ab, ac, ad; q, q)
template <class R>
Complex<R> aw_poly(const AWParams<R>& p, std::size_t n, const R& x) {
  return aw_poly_eval(p, n, x).value;
}

/// p_0..p_nmax by the monic Askey-Wilson recurrence, rescaled to the
/// normalisation of the 4phi3 definition.
template <class R>
std::vector<Complex<R>> aw_rec_all(const AWParams<R>& p, std::size_t nmax, const R& x) {
  using C = Complex<R>;
  QBase<R> qb(p.q);
  const R q = p.q;
  std::vector<C> out(nmax + 1);
  out[0] = C(1);
  if (nmax == 0) return out;
  std::array<C, 4> v{p.a, p.b, p.c, p.d};
  if (!detail::permute_nonzero_first(v)) {
    // 2x H_n = H_{n+1} + (1 - q^n) H_{n-1}
    out[1] = C(2 * x);
    R qn = q;
    for (std::size_t n = 1; n < nmax; ++n) {
      out[n + 1] = out[n] * (2 * x) - out[n - 1] * (1 - qn);
      qn *= q;
    }
    return out;
  }
  const C a = v[0], b = v[1], c = v[2], d = v[3];
  const C abcd = a * b * c * d;
  auto qp = [&](long e) {
    R r(1);
    if (e >= 0)
      for (long i = 0; i < e; ++i) r *= q;
    else
      for (long i = 0; i < -e; ++i) r /= q;
    return r;
  };
  auto An = [&](long n) {
    return (C(1) - a * b * qp(n)) * (C(1) - a * c * qp(n)) * (C(1) - a * d * qp(n)) * (C(1) - abcd * qp(n - 1)) /
           (a * (C(1) - abcd * qp(2 * n - 1)) * (C(1) - abcd * qp(2 * n)));
  };
  auto Cn = [&](long n) {
    if (n == 0) return C(0);
    return a * (1 - qp(n)) * (C(1) - b * c * qp(n - 1)) * (C(1) - b * d * qp(n - 1)) * (C(1) - c * d * qp(n - 1)) /
           ((C(1) - abcd * qp(2 * n - 2)) * (C(1) - abcd * qp(2 * n - 1)));
  };
  std::vector<C> A(nmax + 1), Cc(nmax + 1);
  for (std::size_t n = 0; n <= nmax; ++n) {
    A[n] = An(static_cast<long>(n));
    Cc[n] = Cn(static_cast<long>(n));
  }
  // monic sequence
  std::vector<C> m(nmax + 1);
  m[0] = C(1);
  const C ainv = C(1) / a;
  for (std::size_t n = 0; n < nmax; ++n) {
    C bn = (a + ainv - A[n] - Cc[n]) / R(2);
    C next = (C(x) - bn) * m[n];
    if (n > 0) next -= A[n - 1] * Cc[n] / R(4) * m[n - 1];
    m[n + 1] = next;
  }
  for (std::size_t n = 0; n <= nmax; ++n) {
    // kappa_n = 2^n (abcd q^{n-1}; q)_n
    C kappa = q_shifted(abcd * qp(static_cast<long>(n) - 1), q, n) * detail::real_pow_int(R(2), n);
    out[n] = kappa * m[n];
  }
  return out;
}

template <class R>
PolyValue<R> asc_poly_eval(const ASCParams<R>& p, std::size_t n, const R& x) {
  QBase<R> qb(p.q);
  Complex<R> a = p.a, b = p.b;
  if (detail::is_zero(a)) std::swap(a, b);
  if (detail::is_zero(a)) return detail::q_hermite_eval(p.q, n, x);
  R theta = detail::acos_checked(x);
  detail::check_termination_vs_pole(std::optional<std::size_t>(n),
                                    detail::lower_pole(std::vector<Complex<R>>{a * b}, std::optional<R>(p.q)));
  auto f = [&]<class T>() {
    T q = real_cast<T>(p.q), th = real_cast<T>(theta);
    Complex<T> A = a.template cast<T>(), B = b.template cast<T>();
    Complex<T> ab = A * B, ae = A * expi(th), aem = A * expi(-th);
    T qmn = T(1) / detail::real_pow_int(q, n);
    T qm(1);
    auto s = finite_sum<T>(n, [&](std::size_t) {
      Complex<T> num = Complex<T>(1 - qmn * qm) * (Complex<T>(1) - ae * qm) * (Complex<T>(1) - aem * qm);
      Complex<T> den = (Complex<T>(1) - ab * qm) * Complex<T>(1 - qm * q);
      Complex<T> r = num / den * q;
      qm *= q;
      return r;
    });
    Complex<T> pre = q_shifted(ab, q, n) / ipow(A, static_cast<long>(n));
    s.value = s.value * pre;
    s.abs_sum *= abs(pre);
    return s;
  };
  return detail::from_escalated(escalate<R>(f));
}

/// sqrt((q, ab; q)_n)
template <class R>
Complex<R> asc_norm(const ASCParams<R>& p, std::size_t n) {
  return sqrt(q_shifted(Complex<R>(p.q), p.q, n) * q_shifted(p.a * p.b, p.q, n));
}

/// R_n(x; a, b | q), or r_n = R_n / sqrt((q,ab;q)_n) when `orthonormal` is set.
template <class R>
Complex<R> asc_poly(const ASCParams<R>& p, std::size_t n, const R& x, bool orthonormal = false) {
  Complex<R> v = asc_poly_eval(p, n, x).value;
  return orthonormal ? v / asc_norm(p, n) : v;
}

/// R_0..R_nmax by 2x R_n = R_{n+1} + (a+b) q^n R_n + (1-q^n)(1-ab q^{n-1}) R_{n-1}.
template <class R>
std::vector<Complex<R>> asc_rec_all(const ASCParams<R>& p, std::size_t nmax, const R& x,
                                    bool orthonormal = false) {
  using C = Complex<R>;
  QBase<R> qb(p.q);
  const R q = p.q;
  std::vector<C> out(nmax + 1);
  out[0] = C(1);
  const C apb = p.a + p.b, ab = p.a * p.b;
  R qn(1);
  for (std::size_t n = 0; n < nmax; ++n) {
    C next = (C(2 * x) - apb * qn) * out[n];
    if (n > 0) next -= (1 - qn) * (C(1) - ab * (qn / q)) * out[n - 1];
    out[n + 1] = next;
    qn *= q;
  }
  if (orthonormal) {
    C norm2(1);
    for (std::size_t n = 1; n <= nmax; ++n) {
      R qm = detail::real_pow_int(q, n - 1);
      norm2 *= (1 - qm * q) * (C(1) - ab * qm);
      out[n] = out[n] / sqrt(norm2);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// S_j coefficients

/// log of sqrt(j! (2j+2k1+2k2-1) Gamma(j+2k1+2k2-1) / (Gamma(2k1+j) Gamma(2k2+j)))
template <class R>
R sj_mp_log_scale(const R& k1, const R& k2, std::size_t j) {
  using std::log;
  const R s = 2 * k1 + 2 * k2;
  const R rj = R(static_cast<long>(j));
  R lg = lgamma_real(rj + 1) + lgamma_real(rj + s) - lgamma_real(2 * k1 + rj) - lgamma_real(2 * k2 + rj);
  // (2j+s-1) Gamma(j+s-1) = (2j+s-1)/(j+s-1) Gamma(j+s), which is Gamma(s) at j = 0
  if (j > 0) lg += log((2 * rj + s - 1) / (rj + s - 1));
  return lg / 2;
}

template <class R>
CHahnParams<R> sj_mp_chahn_params(const R& k1, const R& k2, const R& x1, const R& x2) {
  return {Complex<R>(k1), Complex<R>(k2, -(x1 + x2)), Complex<R>(k1), Complex<R>(k2, x1 + x2)};
}

/// S_j(x1, x2) of the Meixner-Pollaczek product formula.
template <class R>
R sj_mp(const R& k1, const R& k2, std::size_t j, const R& x1, const R& x2, const R& phi) {
  using std::exp;
  using std::sin;
  if (!(k1 > 0 && k2 > 0)) throw HypothesisError("sj_mp: k1, k2 must be > 0");
  auto pv = chahn_poly_eval(sj_mp_chahn_params(k1, k2, x1, x2), j, x1);
  R poly = detail::enforce_real(pv, "sj_mp");
  return detail::real_pow_int(-2 * sin(phi), j) * exp(sj_mp_log_scale(k1, k2, j)) * poly;
}

template <class R>
AWParams<R> sj_ac_aw_params(const R& k1, const R& k2, const R& x1, const Complex<R>& s, const R& q) {
  using std::pow;
  R th1 = detail::acos_checked(x1);
  R qk1 = pow(q, k1), qk2 = pow(q, k2);
  return {q, expi(th1) * qk1, expi(-th1) * qk1, s * qk2, Complex<R>(qk2) / s};
}

/// sqrt((q, q^{2k1}, q^{2k2}, q^{2k1+2k2+j-1}; q)_j)
template <class R>
Complex<R> sj_ac_norm(const R& k1, const R& k2, std::size_t j, const R& q) {
  using std::pow;
  const R rj = R(static_cast<long>(j));
  Complex<R> v = q_shifted(Complex<R>(q), q, j) * q_shifted(Complex<R>(pow(q, 2 * k1)), q, j) *
                 q_shifted(Complex<R>(pow(q, 2 * k2)), q, j) *
                 q_shifted(Complex<R>(pow(q, 2 * k1 + 2 * k2 + rj - 1)), q, j);
  return sqrt(v);
}

/// S_j of the Al-Salam-Chihara product formula (an Askey-Wilson polynomial).
template <class R>
Complex<R> sj_ac(const R& k1, const R& k2, std::size_t j, const R& x1, const R& x2, const Complex<R>& s,
                 const R& q) {
  QBase<R> qb(q);
  if (!(k1 > 0 && k2 > 0)) throw HypothesisError("sj_ac: k1, k2 must be > 0");
  return aw_poly(sj_ac_aw_params(k1, k2, x1, s, q), j, x2) / sj_ac_norm(k1, k2, j, q);
}

}  // namespace qkl
