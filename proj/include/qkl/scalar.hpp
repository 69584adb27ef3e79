// Real scalar types, precision tiers and a minimal complex type that works
// uniformly for double, float128 and cpp_bin_float.
#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>

namespace qkl {

using f128 = boost::multiprecision::float128;
using bf100 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                            boost::multiprecision::et_off>;
using bf400 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>,
                                            boost::multiprecision::et_off>;

enum class Precision { Standard, Extended };

inline const char* to_string(Precision p) {
  return p == Precision::Standard ? "standard" : "extended";
}

template <class R>
struct precision_of {
  static constexpr Precision value =
      std::numeric_limits<R>::digits10 >= 30 ? Precision::Extended : Precision::Standard;
};

inline Precision max_precision(Precision a, Precision b) {
  return (a == Precision::Extended || b == Precision::Extended) ? Precision::Extended
                                                                : Precision::Standard;
}

template <class R>
inline R eps() {
  return std::numeric_limits<R>::epsilon();
}

template <class R>
inline R pi() {
  return boost::math::constants::pi<R>();
}

// Explicit conversion between any two supported real types.
template <class To, class From>
inline To real_cast(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else {
    return static_cast<To>(x);
  }
}

template <class R>
inline bool is_finite(const R& x) {
  using std::isfinite;
  using boost::multiprecision::isfinite;
  return isfinite(x);
}

template <class R>
struct Complex {
  R re{0};
  R im{0};

  Complex() = default;
  Complex(const R& r) : re(r), im(0) {}  // NOLINT
  Complex(const R& r, const R& i) : re(r), im(i) {}
  template <class I, class = std::enable_if_t<std::is_integral_v<I>>>
  Complex(I r) : re(R(r)), im(0) {}  // NOLINT

  template <class S>
  Complex<S> cast() const {
    return Complex<S>(real_cast<S>(re), real_cast<S>(im));
  }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    R r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    using std::abs;
    // Smith's algorithm
    if (abs(o.re) >= abs(o.im)) {
      R r = o.im / o.re;
      R d = o.re + o.im * r;
      R nr = (re + im * r) / d;
      im = (im - re * r) / d;
      re = nr;
    } else {
      R r = o.re / o.im;
      R d = o.re * r + o.im;
      R nr = (re * r + im) / d;
      im = (im * r - re) / d;
      re = nr;
    }
    return *this;
  }
  Complex operator-() const { return Complex(-re, -im); }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator+(Complex a, const R& b) { return a += Complex(b); }
  friend Complex operator-(Complex a, const R& b) { return a -= Complex(b); }
  friend Complex operator*(Complex a, const R& b) {
    a.re *= b;
    a.im *= b;
    return a;
  }
  friend Complex operator/(Complex a, const R& b) {
    a.re /= b;
    a.im /= b;
    return a;
  }
  friend Complex operator+(const R& a, const Complex& b) { return Complex(a) + b; }
  friend Complex operator-(const R& a, const Complex& b) { return Complex(a) - b; }
  friend Complex operator*(const R& a, const Complex& b) { return b * a; }
  friend Complex operator/(const R& a, const Complex& b) { return Complex(a) / b; }
  friend bool operator==(const Complex& a, const Complex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const Complex& z) {
    return os << '(' << z.re << ',' << z.im << ')';
  }
};

inline double abs(double x) { return std::fabs(x); }

template <class R>
inline Complex<R> conj(const Complex<R>& z) {
  return {z.re, -z.im};
}

template <class R>
inline R norm(const Complex<R>& z) {
  return z.re * z.re + z.im * z.im;
}

template <class R>
inline R abs(const Complex<R>& z) {
  using std::abs;
  using std::sqrt;
  R a = abs(z.re), b = abs(z.im);
  if (a < b) std::swap(a, b);
  if (a == 0) return R(0);
  R r = b / a;
  return a * sqrt(1 + r * r);
}

template <class R>
inline R arg(const Complex<R>& z) {
  using std::atan2;
  return atan2(z.im, z.re);
}

template <class R>
inline Complex<R> exp(const Complex<R>& z) {
  using std::cos;
  using std::exp;
  using std::sin;
  R m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

// Principal logarithm, imaginary part in (-pi, pi].
template <class R>
inline Complex<R> log(const Complex<R>& z) {
  using std::log;
  return {log(abs(z)), arg(z)};
}

template <class R>
inline Complex<R> sqrt(const Complex<R>& z) {
  using std::abs;
  using std::sqrt;
  if (z.re == 0 && z.im == 0) return {};
  R m = abs(z);
  R t = sqrt((m + abs(z.re)) / 2);
  if (z.re >= 0) return {t, z.im / (2 * t)};
  return {abs(z.im) / (2 * t), z.im >= 0 ? t : -t};
}

template <class R>
inline Complex<R> expi(const R& theta) {
  using std::cos;
  using std::sin;
  return {cos(theta), sin(theta)};
}

template <class R>
inline Complex<R> ipow(Complex<R> z, long n) {
  if (n < 0) return Complex<R>(1) / ipow(z, -n);
  Complex<R> out(1);
  while (n) {
    if (n & 1) out *= z;
    z *= z;
    n >>= 1;
  }
  return out;
}

template <class R>
inline bool is_finite(const Complex<R>& z) {
  return is_finite(z.re) && is_finite(z.im);
}

template <class R>
inline double to_double(const R& x) {
  return static_cast<double>(x);
}

template <class R>
inline std::string to_string_full(const R& x) {
  std::ostringstream os;
  os.precision(std::numeric_limits<R>::max_digits10);
  os << x;
  return os.str();
}

}  // namespace qkl
