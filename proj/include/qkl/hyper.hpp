// Generalized and basic hypergeometric series with a shared truncation
// protocol, very-well-poised 8W7, and 2F1 continued off the unit disc.
#pragma once

#include "errors.hpp"
#include "scalar.hpp"
#include "series_core.hpp"

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace qkl {

struct TruncationPolicy {
  std::size_t max_terms = 10000;
  double tail_tol = 1e-15;
  std::size_t quiet_window = 3;

  void validate() const {
    if (max_terms == 0) throw ParamError("TruncationPolicy: max_terms must be positive");
    if (!(tail_tol > 0 && tail_tol < 1)) throw ParamError("TruncationPolicy: tail_tol must lie in (0,1)");
    if (quiet_window < 1) throw ParamError("TruncationPolicy: quiet_window must be >= 1");
  }

  /// Defaults, with QKL_MAX_TERMS overriding the term cap.
  static TruncationPolicy defaults() {
    TruncationPolicy p;
    if (const char* env = std::getenv("QKL_MAX_TERMS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && v > 0) p.max_terms = static_cast<std::size_t>(v);
    }
    return p;
  }
};

enum class SeriesStatus { Converged, TerminatedFinite, MaxTermsReached };

inline const char* to_string(SeriesStatus s) {
  switch (s) {
    case SeriesStatus::Converged: return "Converged";
    case SeriesStatus::TerminatedFinite: return "TerminatedFinite";
    default: return "MaxTermsReached";
  }
}

template <class R>
struct SeriesEval {
  Complex<R> value;
  std::size_t terms_used = 0;
  R tail_estimate = 0;
  SeriesStatus status = SeriesStatus::Converged;
  R abs_sum = 0;  // sum of |terms|, for conditioning
  Precision precision = precision_of<R>::value;

  template <class S>
  SeriesEval<S> cast() const {
    SeriesEval<S> o;
    o.value = value.template cast<S>();
    o.terms_used = terms_used;
    o.tail_estimate = real_cast<S>(tail_estimate);
    o.status = status;
    o.abs_sum = real_cast<S>(abs_sum);
    o.precision = precision;
    return o;
  }
};

// ---------------------------------------------------------------------------
// parameter matching

/// p == -n for an integer n >= 0, within 1e-12 max(1,|p|).
template <class R>
std::optional<std::size_t> nonpositive_integer_index(const Complex<R>& p) {
  using std::abs;
  using std::round;
  R tol = R(1e-12) * std::max(R(1), qkl::abs(p));
  if (abs(p.im) > tol) return std::nullopt;
  R n = round(p.re);
  if (n > 0 || abs(p.re - n) > tol) return std::nullopt;
  return static_cast<std::size_t>(-static_cast<long long>(n));
}

/// p == q^{-n} for an integer n >= 0, within 1e-12 relative.
template <class R>
std::optional<std::size_t> q_power_index(const Complex<R>& p, const R& q) {
  using std::log;
  using std::round;
  R m = qkl::abs(p);
  if (!(m > 0)) return std::nullopt;
  R nr = round(-log(m) / log(q));
  if (nr < 0 || nr > 100000) return std::nullopt;
  std::size_t n = static_cast<std::size_t>(nr);
  R qn(1);
  for (std::size_t i = 0; i < n; ++i) qn *= q;
  if (qkl::abs(p * qn - Complex<R>(1)) <= R(1e-12)) return n;
  return std::nullopt;
}

/// Smallest n such that some upper parameter is -n (classical) or q^{-n}
/// (basic, when q is given).
template <class R>
std::optional<std::size_t> detect_termination(const std::vector<Complex<R>>& upper,
                                              std::optional<R> q = std::nullopt) {
  std::optional<std::size_t> best;
  for (const auto& u : upper) {
    auto n = q ? q_power_index(u, *q) : nonpositive_integer_index(u);
    if (n && (!best || *n < *best)) best = n;
  }
  return best;
}

namespace detail {

inline void check_termination_vs_pole(std::optional<std::size_t> nt, std::optional<std::size_t> np) {
  if (np && (!nt || *nt > *np))
    throw DenominatorPoleError("lower parameter hits a pole at index " + std::to_string(*np) +
                               " before the series terminates");
}

template <class R>
std::optional<std::size_t> lower_pole(const std::vector<Complex<R>>& lower, std::optional<R> q) {
  return detect_termination(lower, q);
}

// Sums 1 + sum_n t_n with t_{n+1} = t_n * ratio(n) and reported terms
// t_n * weight(n). Stops at termination index nt when given.
template <class R, class Ratio, class Weight>
SeriesEval<R> sum_series(Ratio&& ratio, Weight&& weight, std::optional<std::size_t> nt,
                         const TruncationPolicy& pol) {
  SeriesEval<R> out;
  Complex<R> base(1);
  Complex<R> first = weight(0);
  Complex<R> sum = first;
  R abs_sum = qkl::abs(first);
  R tol = R(pol.tail_tol);
  std::size_t quiet = 0;
  std::vector<R> recent;
  R prev_abs = qkl::abs(first);
  for (std::size_t n = 0;; ++n) {
    if (nt && n == *nt) {
      out.value = sum;
      out.terms_used = n + 1;
      out.tail_estimate = 0;
      out.status = SeriesStatus::TerminatedFinite;
      out.abs_sum = abs_sum;
      return out;
    }
    if (n + 1 >= pol.max_terms) {
      out.value = sum;
      out.terms_used = n + 1;
      out.tail_estimate = prev_abs;
      out.status = SeriesStatus::MaxTermsReached;
      out.abs_sum = abs_sum;
      return out;
    }
    base *= ratio(n);
    Complex<R> term = base * weight(n + 1);
    sum += term;
    R ta = qkl::abs(term);
    abs_sum += ta;
    R rho = prev_abs > 0 ? ta / prev_abs : R(0);
    prev_abs = ta;
    recent.push_back(rho);
    if (recent.size() > pol.quiet_window) recent.erase(recent.begin());
    if (ta <= tol * qkl::abs(sum)) {
      ++quiet;
    } else {
      quiet = 0;
    }
    if (quiet >= pol.quiet_window) {
      R rmax(0);
      for (const auto& r : recent) rmax = std::max(rmax, r);
      out.value = sum;
      out.terms_used = n + 2;
      out.tail_estimate = rmax < 1 ? ta * rmax / (1 - rmax) : ta;
      out.status = SeriesStatus::Converged;
      out.abs_sum = abs_sum;
      return out;
    }
  }
}

template <class R>
SeriesEval<R> unit_series() {
  SeriesEval<R> s;
  s.value = Complex<R>(1);
  s.terms_used = 1;
  s.abs_sum = 1;
  s.status = SeriesStatus::Converged;
  return s;
}

template <class S, class R>
std::vector<Complex<S>> cast_list(const std::vector<Complex<R>>& v) {
  std::vector<Complex<S>> o;
  o.reserve(v.size());
  for (const auto& x : v) o.push_back(x.template cast<S>());
  return o;
}

constexpr double kNearBoundary = 0.9;

}  // namespace detail

/// Sums term(0) + term(1) + ... under the truncation protocol, or exactly
/// term(0..n_last) when n_last is given. Used for the j-sums of the identity
/// drivers, where a term already contains coefficient and polynomial factors.
template <class R, class TermFn>
SeriesEval<R> sum_terms(TermFn&& term, const TruncationPolicy& pol,
                        std::optional<std::size_t> n_last = std::nullopt) {
  pol.validate();
  SeriesEval<R> out;
  Complex<R> sum(0);
  R abs_sum(0), prev(0);
  R tol = R(pol.tail_tol);
  std::size_t quiet = 0;
  std::vector<R> recent;
  for (std::size_t n = 0;; ++n) {
    Complex<R> t = term(n);
    if (!is_finite(t)) throw ConvergenceError("non-finite term at index " + std::to_string(n));
    sum += t;
    R ta = abs(t);
    abs_sum += ta;
    if (n_last) {
      if (n == *n_last) {
        out.value = sum;
        out.terms_used = n + 1;
        out.status = SeriesStatus::TerminatedFinite;
        out.abs_sum = abs_sum;
        return out;
      }
      continue;
    }
    if (n > 0) {
      recent.push_back(prev > 0 ? ta / prev : R(0));
      if (recent.size() > pol.quiet_window) recent.erase(recent.begin());
    }
    prev = ta;
    if (ta <= tol * abs(sum)) {
      ++quiet;
    } else {
      quiet = 0;
    }
    if (quiet >= pol.quiet_window || n + 1 >= pol.max_terms) {
      R rmax(0);
      for (const auto& r : recent) rmax = std::max(rmax, r);
      out.value = sum;
      out.terms_used = n + 1;
      out.tail_estimate = rmax < 1 ? ta * rmax / (1 - rmax) : ta;
      out.status = quiet >= pol.quiet_window ? SeriesStatus::Converged : SeriesStatus::MaxTermsReached;
      out.abs_sum = abs_sum;
      return out;
    }
  }
}

/// sum_n prod (upper)_n / (prod (lower)_n n!) z^n
template <class R>
SeriesEval<R> hyp_pfq(const std::vector<Complex<R>>& upper, const std::vector<Complex<R>>& lower,
                      const Complex<R>& z, const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  policy.validate();
  auto nt = detect_termination(upper);
  auto np = detail::lower_pole(lower, std::optional<R>());
  detail::check_termination_vs_pole(nt, np);
  if (z.re == 0 && z.im == 0) return detail::unit_series<R>();
  const std::size_t p = upper.size(), qq = lower.size();
  R az = abs(z);
  if (!nt) {
    if (p > qq + 1) throw DivergenceError("pFq with p > q+1 diverges unless it terminates");
    if (p == qq + 1 && az >= 1) throw DivergenceError("pFq with p = q+1 needs |z| < 1");
    if constexpr (std::is_same_v<R, double>) {
      if (p == qq + 1 && az > detail::kNearBoundary) {
        TruncationPolicy wide = policy;
        wide.max_terms = std::max<std::size_t>(policy.max_terms, 100000);
        auto r = hyp_pfq<f128>(detail::cast_list<f128>(upper), detail::cast_list<f128>(lower),
                               z.template cast<f128>(), wide);
        return r.template cast<double>();
      }
    }
  }
  auto ratio = [&](std::size_t n) {
    Complex<R> num = z;
    R rn = R(static_cast<long>(n));
    for (const auto& u : upper) num *= u + rn;
    Complex<R> den(rn + 1);
    for (const auto& l : lower) den *= l + rn;
    return num / den;
  };
  auto one = [](std::size_t) { return Complex<R>(1); };
  return detail::sum_series<R>(ratio, one, nt, policy);
}

/// Basic hypergeometric series r phi s with the (-1)^n q^{n(n-1)/2} power
/// (1+s-r) in each term. Zero parameters are allowed on both sides.
template <class R>
SeriesEval<R> bhs_rphis(const std::vector<Complex<R>>& upper, const std::vector<Complex<R>>& lower,
                        const QBase<R>& qb, const Complex<R>& z,
                        const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  policy.validate();
  const R q = qb.q;
  auto nt = detect_termination(upper, std::optional<R>(q));
  auto np = detail::lower_pole(lower, std::optional<R>(q));
  detail::check_termination_vs_pole(nt, np);
  if (z.re == 0 && z.im == 0) return detail::unit_series<R>();
  const long r = static_cast<long>(upper.size()), s = static_cast<long>(lower.size());
  const long extra = 1 + s - r;
  R az = abs(z);
  if (!nt) {
    if (extra < 0) throw DivergenceError("r phi s with r > s+1 diverges unless it terminates");
    if (extra == 0 && az >= 1) throw DivergenceError("r phi s with r = s+1 needs |z| < 1");
    if constexpr (std::is_same_v<R, double>) {
      if (extra == 0 && az > detail::kNearBoundary) {
        TruncationPolicy wide = policy;
        wide.max_terms = std::max<std::size_t>(policy.max_terms, 100000);
        auto res = bhs_rphis<f128>(detail::cast_list<f128>(upper), detail::cast_list<f128>(lower),
                                   QBase<f128>(real_cast<f128>(q)), z.template cast<f128>(), wide);
        return res.template cast<double>();
      }
    }
  }
  R qn(1);
  std::size_t last = 0;
  auto ratio = [&](std::size_t n) {
    if (n != last) throw std::logic_error("bhs_rphis: ratio called out of order");
    ++last;
    Complex<R> num = z;
    for (const auto& u : upper) num *= Complex<R>(1) - u * qn;
    Complex<R> den(1 - qn * q);
    for (const auto& l : lower) den *= Complex<R>(1) - l * qn;
    Complex<R> f = num / den;
    for (long e = 0; e < extra; ++e) f *= -qn;
    qn *= q;
    return f;
  };
  auto one = [](std::size_t) { return Complex<R>(1); };
  return detail::sum_series<R>(ratio, one, nt, policy);
}

/// 8W7(a; b1..b5; q, z)
template <class R>
SeriesEval<R> vwp_8w7(const Complex<R>& a, const std::vector<Complex<R>>& b5, const QBase<R>& qb,
                      const Complex<R>& z, const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  policy.validate();
  if (b5.size() != 5) throw ParamError("vwp_8w7 needs exactly five b parameters");
  const R q = qb.q;
  if (abs(Complex<R>(1) - a) <= R(1e-14)) throw VWPoleError("vwp_8w7: 1 - a vanishes");
  std::vector<Complex<R>> upper{a};
  upper.insert(upper.end(), b5.begin(), b5.end());
  auto nt = detect_termination(upper, std::optional<R>(q));
  std::vector<Complex<R>> lower;
  for (const auto& b : b5)
    if (b.re != 0 || b.im != 0) lower.push_back(a * q / b);
  auto np = detail::lower_pole(lower, std::optional<R>(q));
  detail::check_termination_vs_pole(nt, np);
  if (z.re == 0 && z.im == 0) return detail::unit_series<R>();
  if (!nt && abs(z) >= 1) throw DivergenceError("8W7 needs |z| < 1 unless it terminates");
  R qn(1);
  std::size_t last = 0;
  auto ratio = [&](std::size_t n) {
    if (n != last) throw std::logic_error("vwp_8w7: ratio called out of order");
    ++last;
    Complex<R> f = z * (Complex<R>(1) - a * qn) / Complex<R>(1 - qn * q);
    Complex<R> aq1 = a * (qn * q);
    for (const auto& b : b5) {
      // (1 - b q^n) / (1 - a q^{n+1} / b); at b = 0 the limit is 0 unless a = 0
      if (b.re == 0 && b.im == 0) {
        if (a.re != 0 || a.im != 0) f = Complex<R>(0);
      } else {
        f *= (Complex<R>(1) - b * qn) / (Complex<R>(1) - aq1 / b);
      }
    }
    qn *= q;
    return f;
  };
  Complex<R> one_minus_a = Complex<R>(1) - a;
  auto weight = [&](std::size_t n) {
    R q2n(1);
    for (std::size_t i = 0; i < 2 * n; ++i) q2n *= q;
    return (Complex<R>(1) - a * q2n) / one_minus_a;
  };
  return detail::sum_series<R>(ratio, weight, nt, policy);
}

// ---------------------------------------------------------------------------
// 2F1 anywhere in C \ [1, oo)

namespace detail {

// Continue (w, w') from z0 to z1 along a straight segment by Taylor steps of
// the hypergeometric ODE z(1-z)w'' + [c-(a+b+1)z]w' - ab w = 0.
template <class R>
std::size_t ode_continue(const Complex<R>& a, const Complex<R>& b, const Complex<R>& c, Complex<R> zk,
                         const Complex<R>& z1, Complex<R>& w, Complex<R>& dw) {
  std::size_t terms = 0;
  const R tiny = eps<R>() / 64;
  for (int step = 0; step < 10000; ++step) {
    Complex<R> h = z1 - zk;
    R ah = abs(h);
    if (ah == 0) return terms;
    R rad = std::min(abs(zk), abs(Complex<R>(1) - zk));
    if (ah > rad / 2) h = h * (rad / (2 * ah));
    Complex<R> P0 = zk * (Complex<R>(1) - zk);
    Complex<R> P1 = Complex<R>(1) - R(2) * zk;
    Complex<R> Q0 = c - (a + b + R(1)) * zk;
    // d_n = c_n h^n
    Complex<R> d0 = w, d1 = dw * h;
    Complex<R> val = d0 + d1;
    Complex<R> der = dw;
    std::size_t quiet = 0;
    for (std::size_t n = 0; n < 5000; ++n) {
      R rn = R(static_cast<long>(n));
      Complex<R> d2 = -((P1 * (rn * (rn + 1)) + Q0 * (rn + 1)) * d1 * h -
                        (a + rn) * (b + rn) * d0 * h * h) /
                      (P0 * ((rn + 2) * (rn + 1)));
      val += d2;
      der += d2 * (rn + 2) / h;
      ++terms;
      R mag = abs(d2) * (rn + 2);
      if (mag <= tiny * (abs(val) + abs(der * h))) {
        if (++quiet >= 3) break;
      } else {
        quiet = 0;
      }
      d0 = d1;
      d1 = d2;
    }
    w = val;
    dw = der;
    zk = zk + h;
  }
  throw ConvergenceError("2F1 continuation did not reach its target");
}

}  // namespace detail

/// 2F1(a,b;c;z) on C minus the cut [1, oo): direct series near 0, Pfaff
/// transform near oo, ODE continuation elsewhere.
template <class R>
SeriesEval<R> hyp2f1(const Complex<R>& a, const Complex<R>& b, const Complex<R>& c, const Complex<R>& z,
                     const TruncationPolicy& policy = TruncationPolicy::defaults()) {
  const std::vector<Complex<R>> up{a, b}, lo{c};
  R az = abs(z);
  if (detect_termination(up) || az <= R(0.8)) return hyp_pfq(up, lo, z, policy);
  if (z.re >= 1 && abs(z.im) <= eps<R>() * z.re)
    throw DivergenceError("2F1 is not defined on the cut [1, oo)");
  if (detail::lower_pole(lo, std::optional<R>()))
    throw DenominatorPoleError("2F1 lower parameter is a nonpositive integer");
  Complex<R> wz = z / (z - R(1));
  if (abs(wz) <= R(0.8)) {
    auto s = hyp_pfq(std::vector<Complex<R>>{a, c - b}, lo, wz, policy);
    s.value = s.value * complex_pow_principal(Complex<R>(1) - z, -a);
    return s;
  }
  Complex<R> z0 = z * (R(0.5) / az);
  auto s0 = hyp_pfq(up, lo, z0, policy);
  auto s1 = hyp_pfq(std::vector<Complex<R>>{a + R(1), b + R(1)}, std::vector<Complex<R>>{c + R(1)}, z0,
                    policy);
  Complex<R> w = s0.value, dw = a * b / c * s1.value;
  std::size_t terms = s0.terms_used + s1.terms_used;
  terms += detail::ode_continue(a, b, c, z0, z, w, dw);
  SeriesEval<R> out;
  out.value = w;
  out.terms_used = terms;
  out.tail_estimate = eps<R>() * abs(w);
  out.status = SeriesStatus::Converged;
  out.abs_sum = abs(w);
  return out;
}

// ---------------------------------------------------------------------------
// Terminating sums with automatic working-precision escalation

template <class T>
struct TermSum {
  Complex<T> value;
  T abs_sum;
  std::size_t terms;
};

template <class R>
struct EscalatedValue {
  Complex<R> value;
  R error_estimate;  // absolute
  std::size_t terms = 0;
  int digits = 0;  // decimal digits of the working type that was accepted
};

/// Sum of explicit terms with running ratio, in type T.
template <class T, class Ratio>
TermSum<T> finite_sum(std::size_t n_last, Ratio&& ratio) {
  Complex<T> term(1), sum(1);
  T abs_sum(1);
  for (std::size_t m = 0; m < n_last; ++m) {
    term *= ratio(m);
    sum += term;
    abs_sum += abs(term);
  }
  return {sum, abs_sum, n_last + 1};
}

namespace detail {

template <class R, class T, class F>
bool escalate_tier(F& f, EscalatedValue<R>& out, bool last) {
  TermSum<T> s = f.template operator()<T>();
  T bound = T(8) * eps<T>() * T(static_cast<long>(s.terms + 1)) * s.abs_sum;
  out.value = s.value.template cast<R>();
  out.error_estimate = real_cast<R>(bound) + eps<R>() * abs(out.value);
  out.terms = s.terms;
  out.digits = std::numeric_limits<T>::digits10;
  T target = real_cast<T>(R(512) * eps<R>());
  return last || bound <= target * abs(s.value);
}

}  // namespace detail

/// Evaluates a terminating sum produced by `f.template operator()<T>()` in
/// the cheapest working type whose rounding-error bound reaches ~512 eps of R.
template <class R, class F>
EscalatedValue<R> escalate(F&& f) {
  EscalatedValue<R> out;
  if constexpr (std::is_same_v<R, double>) {
    if (detail::escalate_tier<R, double>(f, out, false)) return out;
  }
  if constexpr (std::is_same_v<R, double> || std::is_same_v<R, f128>) {
    if (detail::escalate_tier<R, f128>(f, out, false)) return out;
  }
  if (detail::escalate_tier<R, bf100>(f, out, false)) return out;
  detail::escalate_tier<R, bf400>(f, out, true);
  return out;
}

/// Terminating pFq evaluated with precision escalation. The parameters are
/// converted to each working type, so they must be exact in R.
template <class R>
EscalatedValue<R> terminating_pfq(const std::vector<Complex<R>>& upper,
                                  const std::vector<Complex<R>>& lower, const Complex<R>& z) {
  auto nt = detect_termination(upper);
  if (!nt) throw ParamError("terminating_pfq: series does not terminate");
  detail::check_termination_vs_pole(nt, detail::lower_pole(lower, std::optional<R>()));
  auto f = [&]<class T>() {
    auto up = detail::cast_list<T>(upper);
    auto lo = detail::cast_list<T>(lower);
    Complex<T> zz = z.template cast<T>();
    return finite_sum<T>(*nt, [&](std::size_t m) {
      T rm = T(static_cast<long>(m));
      Complex<T> num = zz;
      for (const auto& u : up) num *= u + rm;
      Complex<T> den(rm + 1);
      for (const auto& l : lo) den *= l + rm;
      return num / den;
    });
  };
  return escalate<R>(f);
}

}  // namespace qkl
