// Shared plumbing for the identity registry: parameter maps, side metadata,
// deterministic samplers.
#pragma once

#include "errors.hpp"
#include "hyper.hpp"
#include "scalar.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qkl {

using ParamMap = std::map<std::string, Complex<double>>;

enum class PrecisionMode { Standard, Extended, Auto };

inline const char* to_string(PrecisionMode m) {
  switch (m) {
    case PrecisionMode::Standard: return "standard";
    case PrecisionMode::Extended: return "extended";
    default: return "auto";
  }
}

inline PrecisionMode parse_precision_mode(const std::string& s) {
  if (s == "standard") return PrecisionMode::Standard;
  if (s == "extended") return PrecisionMode::Extended;
  if (s == "auto") return PrecisionMode::Auto;
  throw ParamError("precision must be standard, extended or auto");
}

struct SideMeta {
  std::size_t terms = 0;
  double tail_estimate = 0;
  SeriesStatus status = SeriesStatus::TerminatedFinite;

  template <class R>
  static SideMeta of(const SeriesEval<R>& e) {
    return {e.terms_used, static_cast<double>(e.tail_estimate), e.status};
  }
  static SideMeta finite(std::size_t n) { return {n, 0.0, SeriesStatus::TerminatedFinite}; }

  // Combines the metadata of two factors of a product.
  SideMeta& operator+=(const SideMeta& o) {
    terms += o.terms;
    tail_estimate += o.tail_estimate;
    if (o.status == SeriesStatus::MaxTermsReached ||
        (o.status == SeriesStatus::Converged && status == SeriesStatus::TerminatedFinite))
      status = o.status;
    return *this;
  }
};

template <class R>
struct SidePair {
  Complex<R> lhs, rhs;
  SideMeta lhs_meta, rhs_meta;
  std::string note;
};

namespace idparam {

inline const Complex<double>& raw(const ParamMap& m, const std::string& k) {
  auto it = m.find(k);
  if (it == m.end()) throw ParamError("missing parameter '" + k + "'");
  return it->second;
}

template <class R>
Complex<R> cplx(const ParamMap& m, const std::string& k) {
  const auto& v = raw(m, k);
  return Complex<R>(R(v.re), R(v.im));
}

template <class R>
R real(const ParamMap& m, const std::string& k) {
  const auto& v = raw(m, k);
  if (v.im != 0) throw ParamError("parameter '" + k + "' must be real");
  return R(v.re);
}

inline std::size_t count(const ParamMap& m, const std::string& k, std::size_t cap = 100000) {
  const auto& v = raw(m, k);
  if (v.im != 0 || v.re < 0 || std::floor(v.re) != v.re || v.re > static_cast<double>(cap))
    throw ParamError("parameter '" + k + "' must be a nonnegative integer <= " + std::to_string(cap));
  return static_cast<std::size_t>(v.re);
}

}  // namespace idparam

/// Deterministic parameter source: mt19937_64 keyed by (identity id, seed).
class Sampler {
 public:
  Sampler(const std::string& id, std::uint64_t seed) : gen_(mix(id, seed)) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  long integer(long lo, long hi) { return lo + static_cast<long>(uniform() * static_cast<double>(hi - lo + 1)); }
  Complex<double> disc(double rmax) {
    double r = rmax * std::sqrt(uniform());
    double a = uniform(-M_PI, M_PI);
    return {r * std::cos(a), r * std::sin(a)};
  }
  Complex<double> polar(double rho, double angle) { return {rho * std::cos(angle), rho * std::sin(angle)}; }
  double cos_angle() { return std::cos(uniform(0.0, M_PI)); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<long>(v.size()) - 1))];
  }

 private:
  static std::uint64_t mix(const std::string& id, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : id) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h ^ (seed * 0x9E3779B97F4A7C15ull);
  }
  std::mt19937_64 gen_;
};

}  // namespace qkl
