// Identities of the Al-Salam-Chihara / Askey-Wilson group.
#pragma once

#include "identities_cont.hpp"

namespace qkl::ids {

namespace detail {

inline const std::vector<double> kQValues{0.3, 0.5, 0.7};

inline double check_q(const ParamMap& p) {
  double q = real<double>(p, "q");
  if (!(q > 0 && q < 1)) throw HypothesisError("q must lie in (0, 1)");
  return q;
}

inline void check_x(const ParamMap& p, const char* name) {
  double x = real<double>(p, name);
  if (!(std::fabs(x) <= 1)) throw HypothesisError(std::string(name) + " must lie in [-1, 1]");
}

inline void check_modulus(const ParamMap& p, std::initializer_list<const char*> names) {
  for (auto n : names)
    if (!(abs(cplx<double>(p, n)) < 1)) throw HypothesisError(std::string("|") + n + "| must be < 1");
}

inline void check_s_param(const Complex<double>& s, double qk, const char* name) {
  qkl::detail::check_s(s, qk, name);
}

// s real in (q^k + 0.05, q^-k - 0.05) or on the unit circle.
inline Complex<double> sample_s(Sampler& s, double q, double k) {
  if (s.uniform() < 0.5) return s.polar(1.0, s.uniform(-M_PI, M_PI));
  return {s.uniform(std::pow(q, k) + 0.05, std::pow(q, -k) - 0.05), 0.0};
}

template <class R>
Complex<R> mul(const std::vector<Complex<R>>& v) {
  Complex<R> out(1);
  for (const auto& z : v) out *= z;
  return out;
}

}  // namespace detail

struct AcPoisson {
  static constexpr const char* id = "ac_poisson";
  static constexpr const char* summary = "Al-Salam-Chihara Poisson kernel: bilinear sum vs 8W7 closed form";
  static constexpr double tol = 1e-9;
  static constexpr std::size_t count = 30;
  static std::vector<std::string> params() { return {"k", "q", "s", "sigma", "t", "x", "y"}; }

  static ParamMap sample(Sampler& s) {
    double q = s.pick(detail::kQValues), k = s.uniform(0.2, 2.0);
    return {{"k", k},
            {"q", q},
            {"s", detail::sample_s(s, q, k)},
            {"sigma", detail::sample_s(s, q, k)},
            {"t", s.disc(0.5)},
            {"x", s.cos_angle()},
            {"y", s.cos_angle()}};
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    double q = check_q(p), k = real<double>(p, "k");
    if (!(k > 0)) throw HypothesisError("k must be > 0");
    check_x(p, "x");
    check_x(p, "y");
    check_s_param(cplx<double>(p, "s"), std::pow(q, k), "s");
    check_s_param(cplx<double>(p, "sigma"), std::pow(q, k), "sigma");
    check_unit_disc(cplx<double>(p, "t"), "t");
  }
  template <class R>
  static KernelPoint<R> point(const ParamMap& p) {
    using namespace detail;
    return {cplx<R>(p, "t"), real<R>(p, "x"), real<R>(p, "y"), cplx<R>(p, "s"), cplx<R>(p, "sigma")};
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    const R k = real<R>(p, "k"), q = real<R>(p, "q");
    auto pt = point<R>(p);
    auto l = ac_kernel_sum(k, q, pt, pol);
    auto r = ac_kernel_closed_eval(k, q, pt, pol);
    return {l.value, r.value, SideMeta::of(l), SideMeta::of(r), ""};
  }
};

struct AcPoissonAlt {
  static constexpr const char* id = "ac_poisson_alt";
  static constexpr const char* summary = "two 8W7 closed forms of the Al-Salam-Chihara Poisson kernel";
  static constexpr double tol = 1e-9;
  static constexpr std::size_t count = 30;
  static std::vector<std::string> params() { return AcPoisson::params(); }
  static ParamMap sample(Sampler& s) { return AcPoisson::sample(s); }
  static void validate(const ParamMap& p) { AcPoisson::validate(p); }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    const R k = real<R>(p, "k"), q = real<R>(p, "q");
    auto pt = AcPoisson::point<R>(p);
    auto l = ac_kernel_closed_eval(k, q, pt, pol);
    auto r = ac_kernel_closed_alt_eval(k, q, pt, pol);
    return {l.value, r.value, SideMeta::of(l), SideMeta::of(r), ""};
  }
};

struct AcSpoisson {
  static constexpr const char* id = "ac_spoisson";
  static constexpr const char* summary =
      "product of two Al-Salam-Chihara kernels as a sum of kernels with S_j coefficients";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 30;
  static std::vector<std::string> params() {
    return {"k1", "k2", "q", "s", "sigma", "t", "x1", "x2", "y1", "y2"};
  }

  static ParamMap sample(Sampler& s) {
    double q = s.pick(detail::kQValues), k1 = s.uniform(0.2, 2.0), k2 = s.uniform(0.2, 2.0);
    return {{"k1", k1},
            {"k2", k2},
            {"q", q},
            {"s", detail::sample_s(s, q, k2)},
            {"sigma", detail::sample_s(s, q, k2)},
            {"t", s.disc(0.5)},
            {"x1", s.cos_angle()},
            {"x2", s.cos_angle()},
            {"y1", s.cos_angle()},
            {"y2", s.cos_angle()}};
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    double q = check_q(p), k1 = real<double>(p, "k1"), k2 = real<double>(p, "k2");
    if (!(k1 > 0 && k2 > 0)) throw HypothesisError("k1, k2 must be > 0");
    for (auto n : {"x1", "x2", "y1", "y2"}) check_x(p, n);
    check_s_param(cplx<double>(p, "s"), std::pow(q, k2), "s");
    check_s_param(cplx<double>(p, "sigma"), std::pow(q, k2), "sigma");
    check_unit_disc(cplx<double>(p, "t"), "t");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    using C = Complex<R>;
    const R k1 = real<R>(p, "k1"), k2 = real<R>(p, "k2"), q = real<R>(p, "q");
    const R x1 = real<R>(p, "x1"), x2 = real<R>(p, "x2"), y1 = real<R>(p, "y1"), y2 = real<R>(p, "y2");
    const C s = cplx<R>(p, "s"), sg = cplx<R>(p, "sigma"), t = cplx<R>(p, "t");
    using std::acos;
    auto v1 = ac_kernel_sum(k1, q, KernelPoint<R>{t, x1, y1, expi(acos(x2)), expi(acos(y2))}, pol);
    auto v2 = ac_kernel_sum(k2, q, KernelPoint<R>{t, x2, y2, s, sg}, pol);
    SideMeta lm = SideMeta::of(v1);
    lm += SideMeta::of(v2);

    auto Sx = lazy<C>([&](std::size_t n) { return aw_rec_all(sj_ac_aw_params(k1, k2, x1, s, q), n, x2); });
    auto Sy = lazy<C>([&](std::size_t n) { return aw_rec_all(sj_ac_aw_params(k1, k2, y1, sg, q), n, y2); });
    const KernelPoint<R> pt{t, x1, y1, s, sg};
    C tj(1);
    std::size_t inner = 0;
    auto term = [&](std::size_t j) {
      if (j > 0) tj *= t;
      auto v = ac_kernel_closed_eval(k1 + k2 + R(static_cast<long>(j)), q, pt, pol);
      inner += v.terms_used;
      C nrm = sj_ac_norm(k1, k2, j, q);
      return tj * v.value * Sx.at(j) * Sy.at(j) / (nrm * nrm);
    };
    auto rhs = sum_terms<R>(term, pol);
    SideMeta rm = SideMeta::of(rhs);
    rm.terms += inner;
    return {v1.value * v2.value, rhs.value, lm, rm, ""};
  }
};

namespace detail {

// The factor shared by the Askey-Wilson and q-Hermite bilinear right-hand
// sides: q-products times the 8W7 in (b, b') and the (c, c') part.
template <class R>
struct QRightSide {
  Complex<R> value;
  SideMeta meta;
};

template <class R>
QRightSide<R> ab_part(const Complex<R>& b, const Complex<R>& bp, const Complex<R>& ap, R q, R th, R ph,
                      const Complex<R>& t, const TruncationPolicy& pol) {
  const auto eth = expi(th), eph = expi(ph);
  auto w = vwp_8w7<R>(b * bp * t / q, {b * eth, b / eth, bp * eph, bp / eph, b * t / ap}, QBase<R>(q), ap * t / b,
                      pol);
  return {w.value, SideMeta::of(w)};
}

// 3phi2(c e^{-i th}, c' e^{-i ph}, t e^{-i(th+ph)}; c t e^{-i ph}, c' t e^{-i th}; q, t e^{i(th+ph)})
template <class R>
QRightSide<R> cc_3phi2(const Complex<R>& c, const Complex<R>& cp, R q, R th, R ph, const Complex<R>& t,
                       const TruncationPolicy& pol) {
  const auto emth = expi(-th), emph = expi(-ph);
  auto f = bhs_rphis<R>({c * emth, cp * emph, t * emth * emph}, {c * t * emph, cp * t * emth}, QBase<R>(q),
                        t * expi(th + ph), pol);
  return {f.value, SideMeta::of(f)};
}

inline void sample_q_point(Sampler& s, ParamMap& p) {
  p["q"] = s.pick(kQValues);
  p["x"] = s.cos_angle();
  p["y"] = s.cos_angle();
}

// (a, b) = rho e^{+-i theta}, a' = rho e^{i phi}, so b' = ab/a' = conj(a').
inline void sample_ab_pair(Sampler& s, ParamMap& p) {
  double rho = s.uniform(0.05, 0.7), th = s.uniform(0, M_PI), ph = s.uniform(0, M_PI);
  p["a"] = s.polar(rho, th);
  p["b"] = s.polar(rho, -th);
  p["ap"] = s.polar(rho, ph);
}

}  // namespace detail

struct AwBilinear {
  static constexpr const char* id = "aw_bilinear";
  static constexpr const char* summary = "bilinear generating function for Askey-Wilson polynomials";
  static constexpr double tol = 1e-7;
  static constexpr double tol_extended = 1e-10;
  static constexpr std::size_t count = 30;
  static std::vector<std::string> params() { return {"q", "a", "b", "ap", "c", "d", "cp", "t", "x", "y"}; }

  static ParamMap sample(Sampler& s) {
    ParamMap p;
    detail::sample_q_point(s, p);
    detail::sample_ab_pair(s, p);
    if (s.uniform() < 0.5) {
      double rho = s.uniform(0.05, 0.7), th = s.uniform(0, M_PI), ph = s.uniform(0, M_PI);
      p["c"] = s.polar(rho, th);
      p["d"] = s.polar(rho, -th);
      p["cp"] = s.polar(rho, ph);
    } else {
      for (;;) {
        double c = s.uniform(-0.7, 0.7), d = s.uniform(-0.7, 0.7), cp = s.uniform(-0.7, 0.7);
        if (std::fabs(cp) < 0.05 || std::fabs(c * d / cp) > 0.7) continue;
        p["c"] = c;
        p["d"] = d;
        p["cp"] = cp;
        break;
      }
    }
    p["t"] = s.disc(0.4);
    return p;
  }
  static ParamMap derived(const ParamMap& p) {
    using detail::cplx;
    return {{"bp", cplx<double>(p, "a") * cplx<double>(p, "b") / cplx<double>(p, "ap")},
            {"dp", cplx<double>(p, "c") * cplx<double>(p, "d") / cplx<double>(p, "cp")}};
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    check_q(p);
    check_x(p, "x");
    check_x(p, "y");
    if (abs(cplx<double>(p, "ap")) == 0 || abs(cplx<double>(p, "cp")) == 0 || abs(cplx<double>(p, "b")) == 0)
      throw HypothesisError("a', c' and b must be nonzero");
    ParamMap all = p;
    for (auto& kv : derived(p)) all[kv.first] = kv.second;
    check_modulus(all, {"a", "b", "c", "d", "ap", "bp", "cp", "dp"});
    auto t = cplx<double>(p, "t");
    check_unit_disc(t, "t");
    if (!(abs(cplx<double>(p, "ap") * t / cplx<double>(p, "b")) < 1))
      throw HypothesisError("|a' t / b| must be < 1");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    using C = Complex<R>;
    using std::acos;
    const R q = real<R>(p, "q"), x = real<R>(p, "x"), y = real<R>(p, "y");
    const C a = cplx<R>(p, "a"), b = cplx<R>(p, "b"), ap = cplx<R>(p, "ap"), c = cplx<R>(p, "c"),
            d = cplx<R>(p, "d"), cp = cplx<R>(p, "cp"), t = cplx<R>(p, "t");
    const C bp = a * b / ap, dp = c * d / cp;
    const R th = acos(x), ph = acos(y);

    auto px = lazy<C>([&](std::size_t n) { return aw_rec_all(AWParams<R>{q, a, b, c, d}, n, x); });
    auto py = lazy<C>([&](std::size_t n) { return aw_rec_all(AWParams<R>{q, ap, bp, cp, dp}, n, y); });
    const C ab = a * b, cd = c * d, abcd = ab * cd;
    C fin(1), qj(1), tj(1);  // (q, ab, cd; q)_j, q^j, t^j
    std::size_t inner = 0;
    auto term = [&](std::size_t j) {
      if (j > 0) {
        const C qm = qj;
        fin *= (C(1) - qm * q) * (C(1) - ab * qm) * (C(1) - cd * qm);
        qj *= q;
        tj *= t;
      }
      const C e = qj * t;
      C pre = q_inf_ratio<R>({b * cp * e, bp * c * e, b * dp * e, bp * d * e}, {b * bp * c * d * qj * e}, q);
      C last = q_shifted(abcd * qj / q, q, j);
      auto w = vwp_8w7<R>(b * bp * c * d * qj * qj * t / q, {b * c * qj, b * d * qj, bp * cp * qj, bp * dp * qj, b * t / ap},
                          QBase<R>(q), ap * t / b, pol);
      inner += w.terms_used;
      return pre / (fin * last) * w.value * px.at(j) * py.at(j) * tj;
    };
    auto lhs = sum_terms<R>(term, pol);
    SideMeta lm = SideMeta::of(lhs);
    lm.terms += inner;

    const C eth = expi(th), eph = expi(ph);
    C pre = q_inf_ratio<R>({b * t * eph, b * t / eph, c * t / eph, d * t / eph, bp * t * eth, bp * t / eth, cp * t / eth,
                            dp * t / eth},
                           {b * bp * t, t * eth / eph, t * eph / eth, t / (eth * eph), cd * t / (eth * eph)}, q);
    auto w1 = ab_part(b, bp, ap, q, th, ph, t, pol);
    const C u = t / (eth * eph);
    auto w2 = vwp_8w7<R>(cd * u / q, {c / eth, d / eth, cp / eph, dp / eph, u}, QBase<R>(q), t * eth * eph, pol);
    SideMeta rm = w1.meta;
    rm += SideMeta::of(w2);
    return {lhs.value, pre * w1.value * w2.value, lm, rm, ""};
  }
};

struct CdqhBilinear {
  static constexpr const char* id = "cdqh_bilinear";
  static constexpr const char* summary = "bilinear generating function at d = d' = 0 with coefficients G_j";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 30;
  static std::vector<std::string> params() { return {"q", "a", "b", "ap", "c", "cp", "t", "x", "y"}; }

  static ParamMap sample(Sampler& s) {
    ParamMap p;
    detail::sample_q_point(s, p);
    detail::sample_ab_pair(s, p);
    p["c"] = s.disc(0.7);
    p["cp"] = s.disc(0.7);
    p["t"] = s.disc(0.4);
    return p;
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    check_q(p);
    check_x(p, "x");
    check_x(p, "y");
    if (abs(cplx<double>(p, "ap")) == 0 || abs(cplx<double>(p, "b")) == 0)
      throw HypothesisError("a' and b must be nonzero");
    ParamMap all = p;
    all["bp"] = cplx<double>(p, "a") * cplx<double>(p, "b") / cplx<double>(p, "ap");
    check_modulus(all, {"a", "b", "c", "ap", "bp", "cp"});
    auto t = cplx<double>(p, "t");
    check_unit_disc(t, "t");
    if (!(abs(cplx<double>(p, "ap") * t / cplx<double>(p, "b")) < 1))
      throw HypothesisError("|a' t / b| must be < 1");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    using C = Complex<R>;
    using std::acos;
    const R q = real<R>(p, "q"), x = real<R>(p, "x"), y = real<R>(p, "y");
    const C a = cplx<R>(p, "a"), b = cplx<R>(p, "b"), ap = cplx<R>(p, "ap"), c = cplx<R>(p, "c"),
            cp = cplx<R>(p, "cp"), t = cplx<R>(p, "t");
    const C bp = a * b / ap, zero(0);
    const R th = acos(x), ph = acos(y);

    auto px = lazy<C>([&](std::size_t n) { return aw_rec_all(AWParams<R>{q, a, b, c, zero}, n, x); });
    auto py = lazy<C>([&](std::size_t n) { return aw_rec_all(AWParams<R>{q, ap, bp, cp, zero}, n, y); });
    const C ab = a * b;
    C fin(1), qj(1), tj(1);
    std::size_t inner = 0;
    auto term = [&](std::size_t j) {
      if (j > 0) {
        fin *= (C(1) - qj * q) * (C(1) - ab * qj);
        qj *= q;
        tj *= t;
      }
      const C e = qj * t;
      C pre = q_inf_ratio<R>({b * cp * e, bp * c * e}, {}, q);
      auto f = bhs_rphis<R>({b * c * qj, bp * cp * qj, b * t / ap}, {b * cp * e, bp * c * e}, QBase<R>(q), ap * t / b,
                            pol);
      inner += f.terms_used;
      return pre / fin * f.value * px.at(j) * py.at(j) * tj;
    };
    auto lhs = sum_terms<R>(term, pol);
    SideMeta lm = SideMeta::of(lhs);
    lm.terms += inner;

    const C eth = expi(th), eph = expi(ph);
    C pre = q_inf_ratio<R>({b * t * eph, b * t / eph, c * t / eph, bp * t * eth, bp * t / eth, cp * t / eth},
                           {b * bp * t, t * eth / eph, t * eph / eth, t / (eth * eph)}, q);
    auto w1 = ab_part(b, bp, ap, q, th, ph, t, pol);
    auto w2 = cc_3phi2(c, cp, q, th, ph, t, pol);
    SideMeta rm = w1.meta;
    rm += w2.meta;
    return {lhs.value, pre * w1.value * w2.value, lm, rm, ""};
  }
};

struct AscBilinear {
  static constexpr const char* id = "asc_bilinear";
  static constexpr const char* summary = "bilinear generating function for Al-Salam-Chihara polynomials";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 30;
  static std::vector<std::string> params() { return {"q", "a", "c", "ap", "cp", "t", "x", "y"}; }

  static ParamMap sample(Sampler& s) {
    ParamMap p;
    detail::sample_q_point(s, p);
    p["a"] = s.disc(0.7);
    p["ap"] = s.disc(0.7);
    for (;;) {
      auto c = s.disc(0.7), cp = s.disc(0.7), t = s.disc(0.5);
      if (abs(c) < 0.05 || abs(t * cp / c) > 0.8) continue;
      p["c"] = c;
      p["cp"] = cp;
      p["t"] = t;
      break;
    }
    return p;
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    check_q(p);
    check_x(p, "x");
    check_x(p, "y");
    check_modulus(p, {"a", "c", "ap", "cp"});
    auto c = cplx<double>(p, "c"), t = cplx<double>(p, "t");
    if (abs(c) == 0) throw HypothesisError("c must be nonzero");
    check_unit_disc(t, "t");
    if (!(abs(t * cplx<double>(p, "cp") / c) < 1)) throw HypothesisError("|t c' / c| must be < 1");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    using C = Complex<R>;
    using std::acos;
    const R q = real<R>(p, "q"), x = real<R>(p, "x"), y = real<R>(p, "y");
    const C a = cplx<R>(p, "a"), c = cplx<R>(p, "c"), ap = cplx<R>(p, "ap"), cp = cplx<R>(p, "cp"),
            t = cplx<R>(p, "t");
    const R th = acos(x), ph = acos(y);

    auto Rx = lazy<C>([&](std::size_t n) { return asc_rec_all(ASCParams<R>{q, a, c}, n, x); });
    auto Ry = lazy<C>([&](std::size_t n) { return asc_rec_all(ASCParams<R>{q, ap, cp}, n, y); });
    const C apct = ap * c * t;
    C fin(1), qj(1), tj(1);  // (q, a'ct; q)_j
    std::size_t inner = 0;
    auto term = [&](std::size_t j) {
      if (j > 0) {
        fin *= (C(1) - qj * q) * (C(1) - apct * qj);
        qj *= q;
        tj *= t;
      }
      auto f = bhs_rphis<R>({c * t / cp, a * c * qj}, {apct * qj}, QBase<R>(q), t * cp / c, pol);
      inner += f.terms_used;
      return tj / fin * f.value * Rx.at(j) * Ry.at(j);
    };
    auto lhs = sum_terms<R>(term, pol);
    SideMeta lm = SideMeta::of(lhs);
    lm.terms += inner;

    const C eth = expi(th), eph = expi(ph);
    C pre = q_inf_ratio<R>({c * t / eph, cp * t / eth, a * t * eph, ap * t * eth},
                           {t * eth / eph, t * eph / eth, cp * t / c, apct}, q);
    auto f1 = bhs_rphis<R>({ap * eph, a * eth, t * eth * eph}, {a * t * eph, ap * t * eth}, QBase<R>(q),
                           t / (eth * eph), pol);
    auto f2 = cc_3phi2(c, cp, q, th, ph, t, pol);
    SideMeta rm = SideMeta::of(f1);
    rm += f2.meta;
    return {lhs.value, pre * f1.value * f2.value, lm, rm, ""};
  }
};

struct CbqhReduction {
  static constexpr const char* id = "cbqh_reduction";
  static constexpr const char* summary = "non-symmetric Poisson kernel for continuous big q-Hermite polynomials";
  static constexpr double tol = 1e-8;
  static constexpr std::size_t count = 30;
  static std::vector<std::string> params() { return {"q", "c", "cp", "t", "x", "y"}; }

  static ParamMap sample(Sampler& s) {
    ParamMap p;
    detail::sample_q_point(s, p);
    p["c"] = s.disc(0.7);
    p["cp"] = s.disc(0.7);
    p["t"] = s.disc(0.5);
    return p;
  }
  static void validate(const ParamMap& p) {
    using namespace detail;
    check_q(p);
    check_x(p, "x");
    check_x(p, "y");
    check_modulus(p, {"c", "cp"});
    check_unit_disc(cplx<double>(p, "t"), "t");
  }
  template <class R>
  static SidePair<R> eval(const ParamMap& p, const TruncationPolicy& pol) {
    using namespace detail;
    using C = Complex<R>;
    using std::acos;
    const R q = real<R>(p, "q"), x = real<R>(p, "x"), y = real<R>(p, "y");
    const C c = cplx<R>(p, "c"), cp = cplx<R>(p, "cp"), t = cplx<R>(p, "t"), zero(0);
    const R th = acos(x), ph = acos(y);
    auto Hx = lazy<C>([&](std::size_t n) { return aw_rec_all(AWParams<R>{q, c, zero, zero, zero}, n, x); });
    auto Hy = lazy<C>([&](std::size_t n) { return aw_rec_all(AWParams<R>{q, cp, zero, zero, zero}, n, y); });
    C fin(1), tj(1);
    R qj(1);
    auto term = [&](std::size_t j) {
      if (j > 0) {
        fin *= C(1 - qj * q);
        qj *= q;
        tj *= t;
      }
      return tj / fin * Hx.at(j) * Hy.at(j);
    };
    auto lhs = sum_terms<R>(term, pol);

    const C eth = expi(th), eph = expi(ph);
    C pre = q_inf_ratio<R>({c * t / eph, cp * t / eth}, {t * eth / eph, t * eph / eth, t / (eth * eph)}, q);
    auto f = cc_3phi2(c, cp, q, th, ph, t, pol);
    return {lhs.value, pre * f.value, SideMeta::of(lhs), f.meta, ""};
  }
};

}  // namespace qkl::ids
