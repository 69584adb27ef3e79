// Scalar building blocks: Pochhammer symbols, q-shifted factorials, complex
// Gamma, principal-branch powers and the Bessel function J_nu.
#pragma once

#include "errors.hpp"
#include "scalar.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace qkl {

template <class R>
struct QBase {
  R q;
  explicit QBase(const R& q_) : q(q_) {
    if (!(q > 0 && q < 1)) throw DomainError("q must satisfy 0 < q < 1");
  }
};

/// (a)_n = a(a+1)...(a+n-1), ascending product order.
template <class T>
T pochhammer(const T& a, std::size_t n) {
  T out(1);
  for (std::size_t i = 0; i < n; ++i) out *= a + T(static_cast<long>(i));
  return out;
}

template <class T>
T pochhammer_list(const std::vector<T>& as, std::size_t n) {
  T out(1);
  for (const auto& a : as) out *= pochhammer(a, n);
  return out;
}

/// (a;q)_n for finite n.
template <class R>
Complex<R> q_shifted(const Complex<R>& a, const R& q, std::size_t n) {
  Complex<R> out(1);
  R qm(1);
  for (std::size_t m = 0; m < n; ++m) {
    out *= Complex<R>(1) - a * qm;
    qm *= q;
  }
  return out;
}

template <class R>
Complex<R> q_shifted_list(const std::vector<Complex<R>>& as, const R& q, std::size_t n) {
  Complex<R> out(1);
  for (const auto& a : as) out *= q_shifted(a, q, n);
  return out;
}

template <class R>
struct QInfResult {
  Complex<R> value;
  std::size_t truncation_index;
};

/// (a;q)_oo truncated at the first m with |a| q^m < eps (1-q); the dropped
/// factors are restored to first order by exp(-a q^M / (1-q)).
template <class R>
QInfResult<R> q_shifted_inf(const Complex<R>& a, const R& q, R tol = eps<R>()) {
  if (!(q > 0 && q < 1)) throw DomainError("q must satisfy 0 < q < 1");
  if (!(tol > 0)) throw DomainError("q_shifted: eps must be positive");
  R am = abs(a);
  Complex<R> out(1);
  Complex<R> aqm = a;
  std::size_t m = 0;
  R bound = tol * (1 - q);
  while (am >= bound) {
    out *= Complex<R>(1) - aqm;
    aqm *= q;
    am *= q;
    ++m;
  }
  out *= exp(-aqm / (1 - q));
  return {out, m};
}

template <class R>
Complex<R> q_inf(const Complex<R>& a, const R& q) {
  return q_shifted_inf(a, q).value;
}

template <class R>
Complex<R> q_inf_list(const std::vector<Complex<R>>& as, const R& q) {
  Complex<R> out(1);
  for (const auto& a : as) out *= q_inf(a, q);
  return out;
}

/// prod (num_i;q)_oo / prod (den_j;q)_oo, taken factor by factor at a common
/// truncation index so matching numerator and denominator terms cancel early.
template <class R>
Complex<R> q_inf_ratio(const std::vector<Complex<R>>& num, const std::vector<Complex<R>>& den,
                       const R& q) {
  R big(0);
  for (const auto& a : num) big = std::max(big, abs(a));
  for (const auto& a : den) big = std::max(big, abs(a));
  std::vector<Complex<R>> nq(num), dq(den);
  Complex<R> out(1);
  R bound = eps<R>() * (1 - q);
  while (big >= bound) {
    Complex<R> n(1), d(1);
    for (auto& a : nq) {
      n *= Complex<R>(1) - a;
      a *= q;
    }
    for (auto& a : dq) {
      d *= Complex<R>(1) - a;
      a *= q;
    }
    if (d.re == 0 && d.im == 0) throw PoleError("q-product denominator vanishes");
    out *= n / d;
    big *= q;
  }
  Complex<R> tail(0);
  for (const auto& a : nq) tail -= a;
  for (const auto& a : dq) tail += a;
  return out * exp(tail / (1 - q));
}

namespace detail {

// B_2, B_4, ..., B_{2K} as exact rationals (Akiyama-Tanigawa), converted to R.
template <class R>
const std::vector<R>& bernoulli_even(std::size_t K) {
  static const std::vector<R> table = [] {
    const std::size_t N = 2 * 48 + 1;
    std::vector<mpq_class> a(N + 1);
    std::vector<mpq_class> B(N + 1);
    for (std::size_t m = 0; m <= N; ++m) {
      a[m] = mpq_class(1, m + 1);
      for (std::size_t j = m; j >= 1; --j) {
        a[j - 1] = mpq_class(static_cast<unsigned long>(j)) * (a[j - 1] - a[j]);
        a[j - 1].canonicalize();
      }
      B[m] = a[0];
    }
    std::vector<R> out;
    for (std::size_t k = 1; 2 * k <= N; ++k) {
      const mpq_class& b = B[2 * k];
      if constexpr (std::is_same_v<R, double>) {
        out.push_back(b.get_d());
      } else {
        out.push_back(R(b.get_num().get_str()) / R(b.get_den().get_str()));
      }
    }
    return out;
  }();
  (void)K;
  return table;
}

inline const double kLanczosG = 607.0 / 128.0;
inline const double kLanczosCoef[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5};

// log Gamma(z) for Re z >= 0.5 (branch unspecified; only exp of it is used
// for complex z, and the real part is exact ln|Gamma|).
inline Complex<double> lgamma_right(const Complex<double>& z0) {
  Complex<double> z = z0 - 1.0;
  Complex<double> x(kLanczosCoef[0]);
  for (int k = 1; k < 15; ++k) x += kLanczosCoef[k] / (z + double(k));
  Complex<double> t = z + (kLanczosG + 0.5);
  const double half_log_2pi = 0.91893853320467274178;
  return (z + 0.5) * log(t) - t + half_log_2pi + log(x);
}

template <class R>
Complex<R> lgamma_right(const Complex<R>& z) {
  // Stirling series after shifting |w| above N0.
  const int digits = std::numeric_limits<R>::digits10;
  const R N0 = R(std::max(20, digits));
  std::size_t K = std::min<std::size_t>(48, static_cast<std::size_t>(digits / 2 + 12));
  Complex<R> w = z;
  Complex<R> prod(1);
  R s(0);
  while (abs(w) < N0) {
    prod *= w;
    w += R(1);
    s += 1;
  }
  const auto& B = bernoulli_even<R>(K);
  Complex<R> inv = Complex<R>(1) / w;
  Complex<R> inv2 = inv * inv;
  Complex<R> acc(0);
  Complex<R> p = inv;
  for (std::size_t k = 1; k <= K; ++k) {
    R den = R(2 * k) * R(2 * k - 1);
    acc += p * (B[k - 1] / den);
    p *= inv2;
  }
  using std::log;
  R half_log_2pi = log(2 * pi<R>()) / 2;
  Complex<R> lg = (w - R(0.5)) * log(w) - w + half_log_2pi + acc;
  if (s > 0) lg -= log(prod);
  return lg;
}

template <class R>
Complex<R> sin_pi(const Complex<R>& z) {
  using std::cos;
  using std::cosh;
  using std::round;
  using std::sin;
  using std::sinh;
  R x = z.re - 2 * round(z.re / 2);
  R px = pi<R>() * x, py = pi<R>() * z.im;
  return {sin(px) * cosh(py), cos(px) * sinh(py)};
}

template <class R>
void check_gamma_pole(const Complex<R>& z) {
  using std::abs;
  using std::round;
  if (z.re <= R(0.5)) {
    R n = round(z.re);
    if (n <= 0 && abs(z.re - n) < R(1e-14) && abs(z.im) < R(1e-14))
      throw PoleError("Gamma has a pole at a nonpositive integer");
  }
}

}  // namespace detail

/// log Gamma(z); real part is ln|Gamma(z)|.
template <class R>
Complex<R> complex_lgamma(const Complex<R>& z) {
  detail::check_gamma_pole(z);
  if (z.re >= R(0.5)) return detail::lgamma_right(z);
  // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1-z))
  using std::log;
  return Complex<R>(log(pi<R>())) - log(detail::sin_pi(z)) -
         detail::lgamma_right(Complex<R>(1) - z);
}

template <class R>
Complex<R> complex_gamma(const Complex<R>& z) {
  detail::check_gamma_pole(z);
  if (z.re >= R(0.5)) return exp(detail::lgamma_right(z));
  return Complex<R>(pi<R>()) /
         (detail::sin_pi(z) * exp(detail::lgamma_right(Complex<R>(1) - z)));
}

/// ln|Gamma(x)| for real x (not a pole).
template <class R>
R lgamma_real(const R& x) {
  return complex_lgamma(Complex<R>(x)).re;
}

/// Gamma(x) for real x.
template <class R>
R gamma_real(const R& x) {
  return complex_gamma(Complex<R>(x)).re;
}

/// exp(exponent * Log base) with the principal logarithm.
template <class R>
Complex<R> complex_pow_principal(const Complex<R>& base, const Complex<R>& exponent) {
  if (base.re == 0 && base.im == 0) {
    if (exponent.re > 0) return Complex<R>(0);
    throw DomainError("complex_pow_principal: zero base with non-positive exponent");
  }
  return exp(exponent * log(base));
}

namespace detail {
template <class R>
struct wider;
template <>
struct wider<double> {
  using type = f128;
};
template <>
struct wider<f128> {
  using type = bf100;
};
template <>
struct wider<bf100> {
  using type = bf400;
};
}  // namespace detail

/// J_nu(z), nu > -1, by its ascending series, summed in a wider type to absorb the
/// cancellation between terms of size ~ e^{|z|}.
template <class R>
R bessel_j(const R& nu, const R& z) {
  using std::abs;
  using std::floor;
  if (!(nu > -1)) throw DomainError("bessel_j: nu must be > -1");
  if (!(abs(z) <= 30)) throw RangeError("bessel_j: |z| must be <= 30");
  using W = typename detail::wider<R>::type;
  if (z == 0) {
    if (nu < 0) throw DomainError("bessel_j: J_nu(0) is unbounded for nu < 0");
    return nu == 0 ? R(1) : R(0);
  }
  W wnu = real_cast<W>(nu);
  W wz = real_cast<W>(z);
  W sign(1);
  if (wz < 0) {
    if (floor(nu) != nu) throw DomainError("bessel_j: negative z needs integer order");
    wz = -wz;
    if (static_cast<long>(floor(nu)) % 2) sign = -1;
  }
  using std::exp;
  using std::log;
  W half = wz / 2;
  W term = exp(wnu * log(half) - lgamma_real(wnu + 1));
  W sum = term;
  W h2 = half * half;
  const W stop = real_cast<W>(eps<R>()) * W(1e-3);
  for (int m = 1; m < 1000; ++m) {
    term *= -h2 / (W(m) * (wnu + W(m)));
    sum += term;
    if (W(m) > half && abs(term) <= stop * abs(sum)) break;
  }
  return real_cast<R>(sign * sum);
}

}  // namespace qkl
