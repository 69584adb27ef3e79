// Orthonormality checks: Gram matrices of orthonormal polynomials against
// their weights, by adaptive Gauss-Kronrod quadrature (Boost.Math).
#pragma once

#include "errors.hpp"
#include "polys.hpp"
#include "series_core.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <vector>

namespace qkl {

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kMaxGramDegree = 12;

struct GramResult {
  std::vector<std::vector<double>> gram;
  double error_estimate = 0;
  std::size_t evaluations = 0;
  double max_offdiag = 0;       // max |G[m][n]|, m != n
  double max_diag_dev = 0;      // max |G[n][n] - 1|
  double interval_lo = 0, interval_hi = 0;

  double max_deviation() const { return std::max(max_offdiag, max_diag_dev); }
};

/// (2 sin phi)^{2k} / (2 pi) e^{(2 phi - pi) x} |Gamma(k + i x)|^2
template <class R>
R mp_weight(const R& k, const R& phi, const R& x) {
  MPParams<R>{k, phi}.validate();
  using std::exp;
  using std::log;
  using std::sin;
  R lg = complex_lgamma(Complex<R>(k, x)).re;
  return exp(2 * k * log(2 * sin(phi)) + (2 * phi - pi<R>()) * x + 2 * lg) / (2 * pi<R>());
}

namespace detail {

// (e^{2i th}, e^{-2i th}; q)_oo / prod over nonzero params of (p e^{i th}, p e^{-i th}; q)_oo
template <class R>
R aw_weight_theta(const R& q, const std::vector<Complex<R>>& ps, const R& th) {
  const Complex<R> e = expi(th);
  std::vector<Complex<R>> den;
  for (const auto& p : ps)
    if (p.re != 0 || p.im != 0) {
      den.push_back(p * e);
      den.push_back(p / e);
    }
  return q_inf_ratio<R>({e * e, Complex<R>(1) / (e * e)}, den, q).re;
}

}  // namespace detail

/// w(x) = h(x,1) h(x,-1) h(x,q^{1/2}) h(x,-q^{1/2}) / (h(x,a) h(x,b) h(x,c) h(x,d)),
/// h(x, alpha) = (alpha e^{i theta}, alpha e^{-i theta}; q)_oo, x = cos theta.
template <class R>
R aw_weight(const AWParams<R>& p, const R& x) {
  using std::abs;
  using std::acos;
  QBase<R> qb(p.q);
  if (!(abs(x) < 1)) throw RangeError("aw_weight: x must lie in (-1, 1); the endpoints are handled by substitution");
  for (const auto& a : {p.a, p.b, p.c, p.d})
    if (!(qkl::abs(a) < 1)) throw HypothesisError("aw_weight: parameters must have modulus < 1");
  return detail::aw_weight_theta(p.q, {p.a, p.b, p.c, p.d}, acos(x));
}

namespace detail {

// Upper triangle of a Gram matrix, as a vector-valued integrand for
// gauss_kronrod (needs +, -, scalar *, and abs returning a real).
struct GramVec {
  static constexpr std::size_t N = (kMaxGramDegree + 1) * (kMaxGramDegree + 2) / 2;
  std::array<double, N> v{};

  GramVec() = default;
  GramVec(int zero) { v.fill(static_cast<double>(zero)); }  // NOLINT

  GramVec& operator+=(const GramVec& o) {
    for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
    return *this;
  }
  friend GramVec operator+(GramVec a, const GramVec& b) { return a += b; }
  friend GramVec operator-(GramVec a, const GramVec& b) {
    for (std::size_t i = 0; i < N; ++i) a.v[i] -= b.v[i];
    return a;
  }
  friend GramVec operator-(GramVec a) { return a * -1.0; }
  friend GramVec operator*(GramVec a, double s) {
    for (auto& x : a.v) x *= s;
    return a;
  }
  friend GramVec operator*(double s, GramVec a) { return a * s; }
  friend double abs(const GramVec& g) {
    double m = 0;
    for (double x : g.v) m = std::max(m, std::fabs(x));
    return m;
  }
};

inline std::size_t tri_index(std::size_t m, std::size_t n) { return n * (n + 1) / 2 + m; }  // m <= n

template <class Polys>
GramVec outer(const Polys& p, std::size_t nmax, double w) {
  GramVec g;
  for (std::size_t n = 0; n <= nmax; ++n)
    for (std::size_t m = 0; m <= n; ++m) g.v[tri_index(m, n)] = w * p[m] * p[n];
  return g;
}

template <class F>
GramResult integrate_gram(F&& f, double lo, double hi, std::size_t nmax, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0;
  GramVec I = gauss_kronrod<double, 61>::integrate(f, lo, hi, 25, 1e-13, &err);
  GramResult out;
  out.gram.assign(nmax + 1, std::vector<double>(nmax + 1, 0.0));
  for (std::size_t n = 0; n <= nmax; ++n)
    for (std::size_t m = 0; m <= n; ++m) {
      double g = I.v[tri_index(m, n)];
      out.gram[m][n] = out.gram[n][m] = g;
      if (m == n)
        out.max_diag_dev = std::max(out.max_diag_dev, std::fabs(g - 1));
      else
        out.max_offdiag = std::max(out.max_offdiag, std::fabs(g));
    }
  out.error_estimate = err;
  out.interval_lo = lo;
  out.interval_hi = hi;
  if (!(err <= tol)) throw ConvergenceError("ortho_gram: quadrature error estimate exceeds tol");
  return out;
}

inline void check_gram_args(std::size_t nmax, double tol) {
  if (nmax > kMaxGramDegree) throw ParamError("ortho_gram: nmax must be <= 12");
  if (!(tol > 0)) throw ParamError("ortho_gram: tol must be > 0");
}

}  // namespace detail

/// Gram matrix of the orthonormal Meixner-Pollaczek polynomials p_0..p_nmax.
/// The real line is cut where weight * (1+|x|)^{2 nmax} drops below 1e-18 of
/// its peak.
inline GramResult ortho_gram_mp(const MPParams<double>& p, std::size_t nmax, double tol = 1e-9) {
  p.validate();
  detail::check_gram_args(nmax, tol);
  auto envelope = [&](double x) { return mp_weight(p.k, p.phi, x) * std::pow(1 + std::fabs(x), 2.0 * nmax); };
  // walk outward from 0, tracking this side's running peak, until the envelope
  // is below 1e-18 of it
  auto edge = [&](double dir) {
    double peak = 0;
    double x = 0;
    for (int i = 0; i < 1000000; ++i) {
      double e = envelope(x);
      peak = std::max(peak, e);
      if (e < 1e-18 * peak) return x;
      x += dir * 0.5;
    }
    throw ConvergenceError("ortho_gram: weight tail does not decay");
  };
  const double lo = edge(-1), hi = edge(1);
  std::size_t evals = 0;
  auto f = [&](double x) {
    ++evals;
    auto ps = mp_poly_rec_all(p, nmax, x);
    return detail::outer(ps, nmax, mp_weight(p.k, p.phi, x));
  };
  auto g = detail::integrate_gram(f, lo, hi, nmax, tol);
  g.evaluations = evals;
  return g;
}

/// Gram matrix of the orthonormal Al-Salam-Chihara polynomials r_0..r_nmax
/// for (1/2pi) int (q, ab; q)_oo w(x) / sqrt(1-x^2) dx, integrated in theta.
inline GramResult ortho_gram_asc(const ASCParams<double>& p, std::size_t nmax, double tol = 1e-9) {
  QBase<double> qb(p.q);
  detail::check_gram_args(nmax, tol);
  if (!(abs(p.a) < 1 && abs(p.b) < 1))
    throw HypothesisError("ortho_gram: |a|, |b| must be < 1 (absolutely continuous measure)");
  bool real_pair = p.a.im == 0 && p.b.im == 0;
  bool conj_pair = std::fabs(p.a.re - p.b.re) <= 1e-15 && std::fabs(p.a.im + p.b.im) <= 1e-15;
  if (!(real_pair || conj_pair)) throw HypothesisError("ortho_gram: a, b must be real or a conjugate pair");
  const double norm =
      (q_inf(Complex<double>(p.q), p.q) * q_inf(p.a * p.b, p.q)).re / (2 * M_PI);
  std::size_t evals = 0;
  auto f = [&](double th) {
    ++evals;
    auto rs = asc_rec_all(p, nmax, std::cos(th), true);
    std::vector<double> re(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) re[i] = rs[i].re;
    return detail::outer(re, nmax, norm * detail::aw_weight_theta(p.q, {p.a, p.b}, th));
  };
  auto g = detail::integrate_gram(f, 0.0, M_PI, nmax, tol);
  g.evaluations = evals;
  return g;
}

}  // namespace qkl
