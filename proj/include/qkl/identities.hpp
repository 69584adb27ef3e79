// Identity registry: hypothesis checks, samplers and two-sided residual
// reports for every bilinear / product formula the library verifies.
#pragma once

#include "identities_q.hpp"

#include <algorithm>
#include <functional>

namespace qkl {

struct IdentityCase {
  std::string identity_id;
  ParamMap params;
  double tol_rel = 1e-8;
  TruncationPolicy policy = TruncationPolicy::defaults();
  std::optional<std::uint64_t> seed;
  PrecisionMode precision = PrecisionMode::Auto;
};

struct IdentityReport {
  std::string identity_id;
  std::optional<std::uint64_t> seed;
  ParamMap params;
  Complex<double> lhs, rhs;
  double abs_err = 0, rel_err = 0, tol_rel = 0;
  bool pass = false;
  SideMeta lhs_terms, rhs_terms;
  Precision precision_used = Precision::Standard;
  bool retried = false;
  std::string note;
};

struct IdentityInfo {
  std::string id;
  std::string summary;
  std::vector<std::string> params;
  double default_tol;
  double default_tol_extended;
  std::size_t default_count;
  std::function<ParamMap(Sampler&)> sample;
  std::function<ParamMap(const ParamMap&)> derived;
  std::function<void(const ParamMap&)> validate;
  std::function<SidePair<double>(const ParamMap&, const TruncationPolicy&)> eval_standard;
  std::function<SidePair<f128>(const ParamMap&, const TruncationPolicy&)> eval_extended;
};

namespace detail {

template <class T>
concept HasDerived = requires(const ParamMap& p) { T::derived(p); };
template <class T>
concept HasExtendedTol = requires { T::tol_extended; };

template <class Id>
IdentityInfo make_info() {
  IdentityInfo info;
  info.id = Id::id;
  info.summary = Id::summary;
  info.params = Id::params();
  info.default_tol = Id::tol;
  if constexpr (HasExtendedTol<Id>)
    info.default_tol_extended = Id::tol_extended;
  else
    info.default_tol_extended = Id::tol;
  info.default_count = Id::count;
  info.sample = [](Sampler& s) { return Id::sample(s); };
  if constexpr (HasDerived<Id>)
    info.derived = [](const ParamMap& p) { return Id::derived(p); };
  else
    info.derived = [](const ParamMap&) { return ParamMap{}; };
  info.validate = [](const ParamMap& p) { Id::validate(p); };
  info.eval_standard = [](const ParamMap& p, const TruncationPolicy& pol) { return Id::template eval<double>(p, pol); };
  info.eval_extended = [](const ParamMap& p, const TruncationPolicy& pol) { return Id::template eval<f128>(p, pol); };
  return info;
}

}  // namespace detail

/// All registered identities, in a fixed order.
inline const std::vector<IdentityInfo>& identity_registry() {
  static const std::vector<IdentityInfo> reg = [] {
    using namespace ids;
    using qkl::detail::make_info;
    return std::vector<IdentityInfo>{
        make_info<MpPoisson>(),          make_info<MpRecurrence>(),
        make_info<HahnProduct>(),        make_info<ChahnBilinear>(),
        make_info<JacobiBessel>(),       make_info<ChahnFinite>(),
        make_info<ChahnFiniteWhipple>(), make_info<Mult2F1>(),
        make_info<BurchnallChaundy>(),   make_info<Conf1F1>(),
        make_info<HahnBilinearDiscrete>(), make_info<AcPoisson>(),
        make_info<AcPoissonAlt>(),       make_info<AcSpoisson>(),
        make_info<AwBilinear>(),         make_info<CdqhBilinear>(),
        make_info<AscBilinear>(),        make_info<CbqhReduction>(),
        make_info<MpSpoisson>(),
    };
  }();
  return reg;
}

inline std::vector<std::string> identity_ids() {
  std::vector<std::string> out;
  for (const auto& i : identity_registry()) out.push_back(i.id);
  return out;
}

inline const IdentityInfo& find_identity(const std::string& id) {
  for (const auto& i : identity_registry())
    if (i.id == id) return i;
  throw ParamError("unknown identity '" + id + "'");
}

/// Default tolerance for an identity under a precision mode.
inline double default_tol(const std::string& id, PrecisionMode mode) {
  const auto& info = find_identity(id);
  return mode == PrecisionMode::Extended ? info.default_tol_extended : info.default_tol;
}

/// Deterministic admissible case for (identity, seed).
inline IdentityCase sample_params(const std::string& id, std::uint64_t seed) {
  const auto& info = find_identity(id);
  Sampler s(id, seed);
  IdentityCase c;
  c.identity_id = id;
  c.params = info.sample(s);
  c.tol_rel = info.default_tol;
  c.seed = seed;
  return c;
}

namespace detail {

template <class R>
void fill_report(IdentityReport& rep, const SidePair<R>& sp) {
  R d = abs(sp.lhs - sp.rhs);
  R den = std::max({abs(sp.lhs), abs(sp.rhs), R(1e-300)});
  rep.lhs = sp.lhs.template cast<double>();
  rep.rhs = sp.rhs.template cast<double>();
  rep.abs_err = static_cast<double>(d);
  rep.rel_err = static_cast<double>(d / den);
  rep.lhs_terms = sp.lhs_meta;
  rep.rhs_terms = sp.rhs_meta;
  rep.precision_used = precision_of<R>::value;
  rep.note = sp.note;
}

inline TruncationPolicy extended_policy(TruncationPolicy p) {
  p.tail_tol = std::min(p.tail_tol, 1e-30);
  return p;
}

}  // namespace detail

/// Evaluates both sides of one identity instance. In Auto mode a first pass
/// whose rel_err lies in (tol, 1e3 tol) is repeated in Extended precision.
inline IdentityReport run_case(const IdentityCase& c) {
  const auto& info = find_identity(c.identity_id);
  if (!(c.tol_rel > 0)) throw ParamError("tol_rel must be > 0");
  c.policy.validate();
  info.validate(c.params);
  IdentityReport rep;
  rep.identity_id = c.identity_id;
  rep.seed = c.seed;
  rep.params = c.params;
  for (const auto& kv : info.derived(c.params)) rep.params[kv.first] = kv.second;
  rep.tol_rel = c.tol_rel;
  if (c.precision == PrecisionMode::Extended) {
    detail::fill_report(rep, info.eval_extended(c.params, detail::extended_policy(c.policy)));
  } else {
    detail::fill_report(rep, info.eval_standard(c.params, c.policy));
    if (c.precision == PrecisionMode::Auto && rep.rel_err > c.tol_rel && rep.rel_err < 1e3 * c.tol_rel) {
      detail::fill_report(rep, info.eval_extended(c.params, detail::extended_policy(c.policy)));
      rep.retried = true;
    }
  }
  rep.pass = rep.rel_err <= c.tol_rel;
  return rep;
}

}  // namespace qkl
