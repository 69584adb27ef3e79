// Exact verification in rational / Gaussian-rational arithmetic (GMP).
#pragma once

#include "errors.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace qkl::exact {

using BigRational = mpq_class;

/// Parses "p/q", an integer, or a finite decimal such as "-0.125" exactly.
inline BigRational parse_rational(const std::string& text) {
  std::string s = text;
  if (s.empty()) throw ParamError("empty rational literal");
  auto dot = s.find('.');
  BigRational r;
  if (dot == std::string::npos) {
    if (r.set_str(s, 10) != 0) throw ParamError("bad rational literal: " + text);
  } else {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw ParamError("bad rational literal: " + text);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    r = BigRational(num, den);
  }
  r.canonicalize();
  return r;
}

class GaussianRational {
 public:
  BigRational re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(const BigRational& r) : re(r), im(0) {}  // NOLINT
  GaussianRational(long r) : re(r), im(0) {}                // NOLINT
  GaussianRational(const BigRational& r, const BigRational& i) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    BigRational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    if (o.is_zero()) throw PoleError("division by zero in exact arithmetic");
    BigRational d = o.re * o.re + o.im * o.im;
    BigRational r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = r;
    return *this;
  }
  GaussianRational operator-() const { return {-re, -im}; }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  std::string str() const { return "(" + re.get_str() + ")+(" + im.get_str() + ")i"; }
};

using GR = GaussianRational;

inline GR poch(const GR& a, std::size_t n) {
  GR out(1);
  for (std::size_t i = 0; i < n; ++i) out *= a + GR(static_cast<long>(i));
  return out;
}

inline BigRational poch(const BigRational& a, std::size_t n) {
  BigRational out(1);
  for (std::size_t i = 0; i < n; ++i) out *= a + static_cast<long>(i);
  return out;
}

inline BigRational factorial(std::size_t n) {
  BigRational out(1);
  for (std::size_t i = 2; i <= n; ++i) out *= static_cast<long>(i);
  return out;
}

inline bool is_nonpositive_integer(const GR& a) {
  return a.im == 0 && a.re <= 0 && a.re.get_den() == 1;
}

/// (a)_k (b)_k / ((c)_k k!)
inline GR coeff_2f1(const GR& a, const GR& b, const GR& c, std::size_t k) {
  GR ck = poch(c, k);
  if (ck.is_zero()) throw PoleError("coeff_2f1: (c)_k vanishes");
  return poch(a, k) * poch(b, k) / (ck * GR(factorial(k)));
}

/// Terminating 3F2(-j, u1, u2; l1, l2; 1) in exact arithmetic.
inline GR terminating_3f2(std::size_t j, const GR& u1, const GR& u2, const GR& l1, const GR& l2) {
  GR sum(0), term(1);
  GR mj(-static_cast<long>(j));
  for (std::size_t m = 0; m <= j; ++m) {
    sum += term;
    if (m == j) break;
    GR M(static_cast<long>(m));
    GR den = (l1 + M) * (l2 + M) * (M + GR(1));
    if (den.is_zero()) throw PoleError("terminating_3f2: lower parameter hits a pole");
    term = term * (mj + M) * (u1 + M) * (u2 + M) / den;
  }
  return sum;
}

/// (a+a')_j 3F2(-j, a, c+c'+j-1; a+a', c; 1), summed so that no division by
/// (a+a')_m occurs; equals the limit where a+a' is a nonpositive integer.
inline GR scaled_3f2(std::size_t j, const GR& a, const GR& ap, const GR& c, const GR& cp) {
  GR sum(0);
  GR s = c + cp + GR(static_cast<long>(j) - 1);
  GR mj(-static_cast<long>(j));
  for (std::size_t m = 0; m <= j; ++m) {
    GR num = poch(mj, m) * poch(a, m) * poch(s, m) * poch(a + ap + GR(static_cast<long>(m)), j - m);
    GR den = poch(c, m) * GR(factorial(m));
    if (den.is_zero()) throw PoleError("scaled_3f2: (c)_m vanishes");
    sum += num / den;
  }
  return sum;
}

/// C_j of the multiplication formula, as printed:
/// (c, a+a', b+b')_j / (j! (c', c+c'+j-1)_j) 3F2(..a..) 3F2(..b..).
inline GR c_j_printed(std::size_t j, const GR& a, const GR& b, const GR& c, const GR& ap, const GR& bp,
                      const GR& cp) {
  GR s = c + cp + GR(static_cast<long>(j) - 1);
  GR den = GR(factorial(j)) * poch(cp, j) * poch(s, j);
  if (den.is_zero()) throw PoleError("C_j: denominator vanishes");
  GR pa = poch(a + ap, j), pb = poch(b + bp, j);
  GR fa = pa.is_zero() ? scaled_3f2(j, a, ap, c, cp) : pa * terminating_3f2(j, a, s, a + ap, c);
  GR fb = pb.is_zero() ? scaled_3f2(j, b, bp, c, cp) : pb * terminating_3f2(j, b, s, b + bp, c);
  return poch(c, j) * fa * fb / den;
}

/// V_j(a,a';c,c') = sum_m (-1)^m binom(j,m) (a)_m (c'-a')_m (a')_{j-m} (c-a)_{j-m}
inline GR v_j(std::size_t j, const GR& a, const GR& ap, const GR& c, const GR& cp) {
  GR sum(0);
  BigRational binom(1);
  for (std::size_t m = 0; m <= j; ++m) {
    GR term = GR(binom) * poch(a, m) * poch(cp - ap, m) * poch(ap, j - m) * poch(c - a, j - m);
    if (m % 2) term = -term;
    sum += term;
    binom = binom * static_cast<long>(j - m) / static_cast<long>(m + 1);
  }
  return sum;
}

/// C_j through the V_j form used by the floating-point drivers.
inline GR c_j_vform(std::size_t j, const GR& a, const GR& b, const GR& c, const GR& ap, const GR& bp,
                    const GR& cp) {
  GR s = c + cp + GR(static_cast<long>(j) - 1);
  GR den = GR(factorial(j)) * poch(c, j) * poch(cp, j) * poch(s, j);
  if (den.is_zero()) throw PoleError("C_j: denominator vanishes");
  return v_j(j, a, ap, c, cp) * v_j(j, b, bp, c, cp) / den;
}

struct ExactVerdict {
  bool equal = true;
  std::optional<std::size_t> first_failing_k;
  std::size_t coefficients_checked = 0;
};

/// Compares the z^k coefficients, k = 0..K, of both sides of the
/// multiplication formula for 2F1(a,b;c;z) 2F1(a',b';c';z).
inline ExactVerdict verify_mult_2f1_exact(const GR& a, const GR& b, const GR& c, const GR& ap, const GR& bp,
                                          const GR& cp, std::size_t K) {
  if (is_nonpositive_integer(c) || is_nonpositive_integer(cp))
    throw PoleError("verify_mult_2f1_exact: c and c' must not be nonpositive integers");
  auto caveat = [](const GR& u, const GR& v) {
    return is_nonpositive_integer(u + v) && !(is_nonpositive_integer(u) && is_nonpositive_integer(v));
  };
  if (caveat(a, ap) || caveat(b, bp))
    throw HypothesisError(
        "verify_mult_2f1_exact: a+a' (or b+b') is a nonpositive integer without both summands being so; "
        "this stratum needs a limit interpretation of C_j and is excluded");
  std::vector<GR> C(K + 1);
  for (std::size_t j = 0; j <= K; ++j) C[j] = c_j_printed(j, a, b, c, ap, bp, cp);
  ExactVerdict v;
  for (std::size_t k = 0; k <= K; ++k) {
    GR lhs(0), rhs(0);
    for (std::size_t i = 0; i <= k; ++i) lhs += coeff_2f1(a, b, c, i) * coeff_2f1(ap, bp, cp, k - i);
    for (std::size_t j = 0; j <= k; ++j) {
      GR J(static_cast<long>(j));
      rhs += C[j] * coeff_2f1(a + ap + J, b + bp + J, c + cp + J + J, k - j);
    }
    ++v.coefficients_checked;
    if (lhs != rhs) {
      v.equal = false;
      v.first_failing_k = k;
      return v;
    }
  }
  return v;
}

/// Q_n(x; alpha, beta, N) exactly.
inline BigRational hahn_q(std::size_t n, long x, const BigRational& alpha, const BigRational& beta, long N) {
  BigRational sum(0), term(1);
  for (std::size_t m = 0; m <= n; ++m) {
    sum += term;
    if (m == n) break;
    BigRational M(static_cast<long>(m));
    BigRational den = (alpha + 1 + M) * (M - N) * (M + 1);
    if (den == 0) throw PoleError("hahn_q: lower parameter hits a pole");
    term = term * (M - static_cast<long>(n)) * (alpha + beta + static_cast<long>(n) + 1 + M) * (M - x) / den;
  }
  return sum;
}

/// Terminating 2F1(u, v; w; z) with u or v a nonpositive integer.
inline BigRational terminating_2f1(long u, long v, const BigRational& w, const BigRational& z) {
  long stop = std::max(-u, -v);
  if (u <= 0 && v <= 0) stop = std::min(-u, -v);
  else if (u <= 0) stop = -u;
  else if (v <= 0) stop = -v;
  else throw ParamError("terminating_2f1: no terminating parameter");
  BigRational sum(0), term(1);
  for (long m = 0; m <= stop; ++m) {
    sum += term;
    if (m == stop) break;
    BigRational den = (w + m) * (m + 1);
    if (den == 0) throw PoleError("terminating_2f1: lower parameter hits a pole");
    term = term * (u + m) * (v + m) * z / den;
  }
  return sum;
}

struct HahnSides {
  BigRational lhs, rhs;
};

/// Both sides of the discrete Hahn bilinear formula. With
/// `printed_coefficient`, the j-th coefficient omits the 1/j! factor.
inline HahnSides hahn_sides_exact(const BigRational& alpha, const BigRational& beta, long M, long N, long x, long y,
                                  const BigRational& z, bool printed_coefficient = false) {
  if (M < 1 || N < 1) throw ParamError("verify_hahn_exact: M and N must be positive");
  if (x < 0 || x > M || y < 0 || y > N) throw ParamError("verify_hahn_exact: need 0 <= x <= M and 0 <= y <= N");
  BigRational lhs(0);
  long jmax = std::min(M, N);
  BigRational zj(1);
  for (long j = 0; j <= jmax; ++j) {
    std::size_t uj = static_cast<std::size_t>(j);
    BigRational den = poch(beta + 1, uj) * poch(alpha + beta + j + 1, uj);
    if (!printed_coefficient) den *= factorial(uj);
    if (den == 0) throw PoleError("verify_hahn_exact: coefficient denominator vanishes");
    BigRational coef = poch(alpha + 1, uj) * poch(BigRational(-M), uj) * poch(BigRational(-N), uj) / den;
    BigRational f = terminating_2f1(j - M, j - N, alpha + beta + 2 * j + 2, z);
    lhs += hahn_q(uj, x, alpha, beta, M) * hahn_q(uj, y, alpha, beta, N) * coef * f * zj;
    zj *= z;
  }
  BigRational rhs = terminating_2f1(-x, -y, alpha + 1, z) * terminating_2f1(x - M, y - N, beta + 1, z);
  return {lhs, rhs};
}

inline bool verify_hahn_exact(const BigRational& alpha, const BigRational& beta, long M, long N, long x, long y,
                              const BigRational& z) {
  auto s = hahn_sides_exact(alpha, beta, M, N, x, y, z);
  return s.lhs == s.rhs;
}

struct MultSet {
  std::string name;
  GR a, b, c, ap, bp, cp;
};

inline GR gr(const char* re, const char* im = "0") { return GR(parse_rational(re), parse_rational(im)); }

/// Rational parameter sets for the multiplication formula; the last one has
/// Gaussian-rational entries.
inline std::vector<MultSet> default_mult_sets() {
  return {
      {"rational", gr("1/2"), gr("1/3"), gr("5/4"), gr("2/3"), gr("3/5"), gr("7/6")},
      {"polynomial", gr("-1"), gr("1"), gr("1"), gr("-1"), gr("1"), gr("1")},
      {"negative-integer-pair", gr("-2"), gr("3/7"), gr("2/3"), gr("-3"), gr("5/2"), gr("9/4")},
      {"mixed-signs", gr("7/3"), gr("-5/6"), gr("1/7"), gr("1/9"), gr("4/3"), gr("11/5")},
      {"gaussian", gr("1/2", "1/3"), gr("-1/4", "1"), gr("3/2"), gr("2/3", "-1/5"), gr("1/5"), gr("5/3")},
  };
}

/// Sets with (a', b', c') = (a, b, c).
inline std::vector<MultSet> default_square_sets() {
  return {
      {"rational", gr("1/2"), gr("1/3"), gr("5/4"), gr("1/2"), gr("1/3"), gr("5/4")},
      {"gaussian", gr("1/3", "1/2"), gr("2", "-1/3"), gr("7/4"), gr("1/3", "1/2"), gr("2", "-1/3"), gr("7/4")},
  };
}

struct HahnSet {
  std::string name;
  BigRational alpha, beta;
  long M, N;
  BigRational z;
};

inline std::vector<HahnSet> default_hahn_sets() {
  auto r = [](const char* s) { return parse_rational(s); };
  return {
      {"set1", r("1/2"), r("1/3"), 4, 5, r("2/7")},
      {"set2", r("0"), r("0"), 3, 3, r("1/2")},
      {"set3", r("2/3"), r("-1/2"), 6, 2, r("-3/5")},
      {"set4", r("5/2"), r("7/4"), 6, 6, r("9/11")},
      {"set5", r("-1/3"), r("3/2"), 1, 4, r("5/3")},
  };
}

struct HahnLatticeVerdict {
  bool all_equal = true;
  std::size_t points = 0;
  std::vector<std::pair<long, long>> failing;
};

/// Checks every lattice point 0 <= x <= M, 0 <= y <= N.
inline HahnLatticeVerdict verify_hahn_lattice(const HahnSet& s, bool printed_coefficient = false) {
  HahnLatticeVerdict v;
  for (long x = 0; x <= s.M; ++x)
    for (long y = 0; y <= s.N; ++y) {
      auto sides = hahn_sides_exact(s.alpha, s.beta, s.M, s.N, x, y, s.z, printed_coefficient);
      ++v.points;
      if (sides.lhs != sides.rhs) {
        v.all_equal = false;
        v.failing.emplace_back(x, y);
      }
    }
  return v;
}

}  // namespace qkl::exact
