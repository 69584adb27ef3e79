#include "test_util.hpp"

#include <qkl/exact.hpp>
#include <qkl/identities.hpp>

#include <gtest/gtest.h>

#include <array>
#include <set>

using namespace qkl;
using qkl::test::C;
using qkl::test::rel;

namespace {

IdentityCase seeded(const std::string& id, std::uint64_t seed, PrecisionMode m = PrecisionMode::Auto) {
  auto c = sample_params(id, seed);
  c.precision = m;
  c.tol_rel = default_tol(id, m);
  return c;
}

}  // namespace

TEST(Registry, ListsEveryIdentityOnce) {
  auto ids = identity_ids();
  EXPECT_EQ(ids.size(), 19u);
  std::set<std::string> uniq(ids.begin(), ids.end());
  EXPECT_EQ(uniq.size(), ids.size());
  EXPECT_THROW(find_identity("no_such_identity"), ParamError);
}

TEST(Registry, SamplingIsDeterministic) {
  for (const auto& id : identity_ids()) {
    auto a = sample_params(id, 17), b = sample_params(id, 17), c = sample_params(id, 18);
    EXPECT_EQ(a.params.size(), b.params.size());
    for (const auto& [k, v] : a.params) {
      EXPECT_EQ(v.re, b.params.at(k).re) << id << " " << k;
      EXPECT_EQ(v.im, b.params.at(k).im) << id << " " << k;
    }
    bool differs = false;
    for (const auto& [k, v] : a.params) differs |= v.re != c.params.at(k).re || v.im != c.params.at(k).im;
    EXPECT_TRUE(differs) << id;
  }
}

TEST(Registry, SampledConstraintsHoldByConstruction) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto r = run_case(seeded("aw_bilinear", s));
    const auto& p = r.params;
    C ab = p.at("a") * p.at("b"), apbp = p.at("ap") * p.at("bp");
    C cd = p.at("c") * p.at("d"), cpdp = p.at("cp") * p.at("dp");
    EXPECT_LT(rel(ab, apbp), 1e-15);
    EXPECT_LT(rel(cd, cpdp), 1e-15);
    // b + d = b' + d' with d = conj(b), d' = conj(b')
    auto ch = sample_params("chahn_bilinear", s).params;
    EXPECT_EQ(ch.at("b").re, ch.at("bp").re);
  }
}

TEST(Registry, EveryIdentityPassesFiftySeeds) {
  for (const auto& id : identity_ids()) {
    std::size_t fails = 0;
    double worst = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      auto c = seeded(id, s, PrecisionMode::Standard);
      c.tol_rel = id == "aw_bilinear" ? 1e-7 : 1e-8;
      auto r = run_case(c);
      fails += !r.pass;
      worst = std::max(worst, r.rel_err);
    }
    EXPECT_EQ(fails, 0u) << id << " worst rel_err " << worst;
  }
}

TEST(Registry, ExtendedPrecisionTightens) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto r = run_case(seeded("aw_bilinear", s, PrecisionMode::Extended));
    EXPECT_LT(r.rel_err, 1e-10) << s;
    EXPECT_EQ(r.precision_used, Precision::Extended);
  }
  for (const auto& id : {"mp_poisson", "ac_poisson", "mult_2f1", "chahn_bilinear"}) {
    auto r = run_case(seeded(id, 3, PrecisionMode::Extended));
    EXPECT_LT(r.rel_err, 1e-20) << id;
  }
}

TEST(Registry, DegenerateAnchors) {
  const std::vector<std::pair<std::string, std::string>> anchors{
      {"mp_poisson", "t"},       {"hahn_product", "r"},  {"chahn_bilinear", "r"},   {"jacobi_bessel", "z"},
      {"mult_2f1", "z"},         {"burchnall_chaundy", "z"}, {"hahn_bilinear_discrete", "z"},
      {"ac_poisson", "t"},       {"ac_poisson_alt", "t"}, {"ac_spoisson", "t"},     {"aw_bilinear", "t"},
      {"cdqh_bilinear", "t"},    {"asc_bilinear", "t"},  {"cbqh_reduction", "t"},   {"mp_spoisson", "t"},
      {"chahn_finite", "K"},     {"chahn_finite_whipple", "K"}, {"mp_recurrence", "n"}};
  for (const auto& [id, name] : anchors) {
    auto c = seeded(id, 5);
    c.params[name] = C(0);
    auto r = run_case(c);
    EXPECT_LT(r.rel_err, 1e-13) << id;
  }
  auto c = seeded("conf_1f1", 5);
  c.params["x"] = c.params["y"] = C(0);
  EXPECT_LT(run_case(c).rel_err, 1e-13);
}

TEST(Registry, AnchorValuesAtZero) {
  auto c = seeded("mp_poisson", 2);
  c.params["t"] = C(0);
  auto r = run_case(c);
  double k = c.params.at("k").re;
  EXPECT_LT(rel(r.lhs, C(1 / std::tgamma(2 * k))), 1e-14);
  auto h = seeded("chahn_bilinear", 2);
  h.params["r"] = C(0);
  auto hr = run_case(h);
  EXPECT_LT(rel(hr.rhs, C(1)), 1e-14);
  EXPECT_LT(rel(hr.lhs, C(1)), 1e-14);
}

TEST(Registry, MultiplicationFormulaPolynomialCase) {
  IdentityCase c;
  c.identity_id = "mult_2f1";
  c.params = {{"a", C(-1)}, {"b", C(1)}, {"c", C(1)}, {"ap", C(-1)}, {"bp", C(1)}, {"cp", C(1)}, {"z", C(0.5)}};
  auto r = run_case(c);
  EXPECT_LT(rel(r.lhs, C(0.25)), 1e-15);
  EXPECT_LT(rel(r.rhs, C(0.25)), 1e-14);
}

TEST(Registry, ExactSetsAgreeInFloatingPoint) {
  auto to_c = [](const exact::GR& g) { return C(g.re.get_d(), g.im.get_d()); };
  for (const auto& s : exact::default_mult_sets())
    for (double z : {0.1, -0.35}) {
      IdentityCase c;
      c.identity_id = "mult_2f1";
      c.params = {{"a", to_c(s.a)}, {"b", to_c(s.b)}, {"c", to_c(s.c)}, {"ap", to_c(s.ap)},
                  {"bp", to_c(s.bp)}, {"cp", to_c(s.cp)}, {"z", C(z)}};
      c.precision = PrecisionMode::Standard;
      EXPECT_LT(run_case(c).rel_err, 1e-12) << s.name;
    }
  for (const auto& s : exact::default_hahn_sets())
    for (long x = 0; x <= s.M; ++x)
      for (long y = 0; y <= s.N; ++y) {
        IdentityCase c;
        c.identity_id = "hahn_bilinear_discrete";
        c.params = {{"alpha", C(s.alpha.get_d())}, {"beta", C(s.beta.get_d())}, {"M", C(double(s.M))},
                    {"N", C(double(s.N))},         {"x", C(double(x))},          {"y", C(double(y))},
                    {"z", C(s.z.get_d())}};
        c.precision = PrecisionMode::Standard;
        EXPECT_LT(run_case(c).rel_err, 1e-12) << s.name << " " << x << " " << y;
      }
}

TEST(Registry, BigQHermiteFromAlSalamChiharaAtZero) {
  // at a = a' = 0 the inner 2phi1 of the ASC bilinear sum is a 1phi0, so
  // ASC sum = (t^2;q)_oo / (t c'/c;q)_oo * directly summed big q-Hermite kernel
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto cb = sample_params("cbqh_reduction", s);
    auto& p = cb.params;
    const C c = p.at("c"), cp = p.at("cp"), t = p.at("t");
    if (!(abs(c) > 0.05 && abs(t * cp / c) < 0.8)) continue;
    IdentityCase as;
    as.identity_id = "asc_bilinear";
    as.params = p;
    as.params["a"] = C(0);
    as.params["ap"] = C(0);
    auto ra = run_case(as);
    auto rc = run_case(cb);
    const double q = p.at("q").re;
    C factor = q_inf(t * t, q) / q_inf(t * cp / c, q);
    EXPECT_LT(rel(ra.rhs, factor * rc.lhs), 1e-9) << s;
  }
}

TEST(Registry, HalvingTailTolDoesNotInflateResidual) {
  // Per side, the deviation from the float128 evaluation is the truncation
  // (plus rounding) error; halving tail_tol must not grow it by more than 2x.
  // The raw residual can rise when the two sides' errors stop cancelling, so
  // it is bounded by twice the previous per-side budget instead.
  for (const auto& id : {"mp_poisson", "hahn_product", "conf_1f1", "ac_poisson", "aw_bilinear", "mp_spoisson"})
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto c = seeded(id, s, PrecisionMode::Standard);
      c.tol_rel = 1.0;
      auto e = c;
      e.precision = PrecisionMode::Extended;
      const auto ref = run_case(e);
      auto side_errs = [&](double tail) {
        c.policy.tail_tol = tail;
        auto r = run_case(c);
        return std::array<double, 3>{rel(r.lhs, ref.lhs), rel(r.rhs, ref.rhs), r.rel_err};
      };
      c.policy.tail_tol = 1e-16;
      const double noise = run_case(c).rel_err;
      auto a = side_errs(1e-10), b = side_errs(5e-11);
      const double floor = 10 * noise + 1e-15;
      EXPECT_LE(b[0], std::max(2 * a[0], floor)) << id << " seed " << s << " lhs";
      EXPECT_LE(b[1], std::max(2 * a[1], floor)) << id << " seed " << s << " rhs";
      EXPECT_LE(b[2], std::max(2 * (a[0] + a[1]), floor)) << id << " seed " << s;
    }
}

TEST(Registry, SidesAreSensitiveToParameters) {
  // evaluating the two sides at slightly different parameters must fail:
  // neither side is allowed to be a disguised copy of the other
  for (const auto& info : identity_registry()) {
    auto c = sample_params(info.id, 1);
    std::string name;
    for (const auto& n : info.params)
      if (n != "n" && n != "K" && n != "M" && n != "N" && n != "x" && n != "y" && abs(c.params.at(n)) > 0.05) {
        name = n;
        break;
      }
    ASSERT_FALSE(name.empty()) << info.id;
    auto moved = c.params;
    moved[name] = moved[name] * 1.001;
    auto base = info.eval_standard(c.params, c.policy);
    auto shifted = info.eval_standard(moved, c.policy);
    EXPECT_GT(rel(base.lhs, shifted.rhs), 1e-7) << info.id << " via " << name;
  }
}

TEST(Registry, AutoModeRetriesInExtended) {
  auto c = seeded("mp_poisson", 0, PrecisionMode::Standard);
  double r0 = run_case(c).rel_err;
  ASSERT_GT(r0, 0.0);
  c.precision = PrecisionMode::Auto;
  c.tol_rel = r0 / 10;
  auto r = run_case(c);
  EXPECT_TRUE(r.retried);
  EXPECT_EQ(r.precision_used, Precision::Extended);
  EXPECT_TRUE(r.pass);
  c.tol_rel = r0 / 1e5;  // outside the retry window: reported as is
  auto f = run_case(c);
  EXPECT_FALSE(f.retried);
  EXPECT_FALSE(f.pass);
}

TEST(Registry, HypothesisViolationsAreErrors) {
  auto c = seeded("mp_poisson", 0);
  c.params["t"] = C(1.0);
  EXPECT_THROW(run_case(c), DivergenceError);
  auto a = seeded("aw_bilinear", 0);
  a.params["a"] = C(1.2);
  EXPECT_THROW(run_case(a), HypothesisError);
  auto m = seeded("mp_poisson", 0);
  m.params.erase("k");
  EXPECT_THROW(run_case(m), ParamError);
  auto t = seeded("mp_poisson", 0);
  t.tol_rel = 0;
  EXPECT_THROW(run_case(t), ParamError);
  auto j = seeded("jacobi_bessel", 0);
  j.params["alpha"] = C(-1.5);
  EXPECT_THROW(run_case(j), HypothesisError);
}

TEST(Registry, HahnReportCarriesNote) {
  auto r = run_case(seeded("hahn_bilinear_discrete", 0));
  EXPECT_FALSE(r.note.empty());
}

TEST(Registry, TruncationTailsAreSmall) {
  for (const auto& id : {"mp_spoisson", "hahn_product", "chahn_bilinear"})
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto r = run_case(seeded(id, s));
      EXPECT_LT(r.lhs_terms.tail_estimate, 1e-12 * std::max(1.0, abs(r.lhs))) << id << " " << s;
      EXPECT_LT(r.rhs_terms.tail_estimate, 1e-12 * std::max(1.0, abs(r.rhs))) << id << " " << s;
    }
}
