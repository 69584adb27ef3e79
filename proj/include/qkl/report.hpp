// Machine-readable reports: JSON records with a fixed 17-significant-digit
// number format, and CSV rows.
#pragma once

#include "exact.hpp"
#include "identities.hpp"
#include "quadrature.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

namespace qkl::report {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void dump_string(std::ostream& os, const std::string& s) { os << json(s).dump(); }

inline void dump(std::ostream& os, const json& j, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string end_pad(static_cast<std::size_t>(indent * level), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad;
        dump_string(os, it.key());
        os << (indent > 0 ? ": " : ":");
        dump(os, it.value(), indent, level + 1);
      }
      os << nl << end_pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // short numeric arrays ([re, im]) stay on one line
      bool flat = j.size() <= 2 && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_number(); });
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          dump(os, j[i], 0, 0);
        }
        os << "]";
        return;
      }
      os << "[" << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << "," << nl;
        os << pad;
        dump(os, j[i], indent, level + 1);
      }
      os << nl << end_pad << "]";
      return;
    }
    case json::value_t::number_float: os << format_double(j.get<double>()); return;
    default: os << j.dump(); return;
  }
}

}  // namespace detail

/// Serialises with every floating value printed as %.17g.
inline std::string dump(const json& j, int indent = 2) {
  std::ostringstream os;
  detail::dump(os, j, indent, 0);
  os << "\n";
  return os.str();
}

inline json complex_json(const Complex<double>& z) { return json::array({z.re, z.im}); }

inline json params_json(const ParamMap& p) {
  json o = json::object();
  for (const auto& [k, v] : p) {
    if (v.im == 0)
      o[k] = v.re;
    else
      o[k] = complex_json(v);
  }
  return o;
}

inline json meta_json(const SideMeta& m) {
  return {{"terms", m.terms}, {"tail_estimate", m.tail_estimate}, {"status", qkl::to_string(m.status)}};
}

inline json seed_json(const std::optional<std::uint64_t>& s) { return s ? json(*s) : json(nullptr); }

inline json identity_json(const IdentityReport& r) {
  json o;
  o["identity"] = r.identity_id;
  o["seed"] = seed_json(r.seed);
  o["params"] = params_json(r.params);
  o["lhs"] = complex_json(r.lhs);
  o["rhs"] = complex_json(r.rhs);
  o["abs_err"] = r.abs_err;
  o["rel_err"] = r.rel_err;
  o["tol"] = r.tol_rel;
  o["pass"] = r.pass;
  o["terms"] = {{"lhs", meta_json(r.lhs_terms)}, {"rhs", meta_json(r.rhs_terms)}};
  o["precision_used"] = qkl::to_string(r.precision_used);
  o["retried"] = r.retried;
  if (!r.note.empty()) o["note"] = r.note;
  return o;
}

inline json error_json(const std::string& id, const std::optional<std::uint64_t>& seed, const std::string& kind,
                       const std::string& message) {
  json o;
  o["identity"] = id;
  o["seed"] = seed_json(seed);
  o["pass"] = false;
  o["error"] = {{"kind", kind}, {"message", message}};
  return o;
}

inline json gr_json(const exact::GR& z) {
  if (z.im == 0) return z.re.get_str();
  return json::array({z.re.get_str(), z.im.get_str()});
}

inline json mult_exact_json(const std::string& id, const exact::MultSet& s, std::size_t K,
                            const exact::ExactVerdict& v) {
  json o;
  o["identity"] = id;
  o["set"] = s.name;
  o["params"] = {{"a", gr_json(s.a)},   {"b", gr_json(s.b)},   {"c", gr_json(s.c)},
                 {"ap", gr_json(s.ap)}, {"bp", gr_json(s.bp)}, {"cp", gr_json(s.cp)}};
  o["K"] = K;
  o["exact"] = true;
  o["equal"] = v.equal;
  o["coefficients_checked"] = v.coefficients_checked;
  o["first_failing_k"] = v.first_failing_k ? json(*v.first_failing_k) : json(nullptr);
  o["pass"] = v.equal;
  return o;
}

inline json hahn_exact_json(const exact::HahnSet& s, const exact::HahnLatticeVerdict& v) {
  json o;
  o["identity"] = "hahn_bilinear_discrete";
  o["set"] = s.name;
  o["params"] = {{"alpha", s.alpha.get_str()}, {"beta", s.beta.get_str()}, {"M", s.M}, {"N", s.N},
                 {"z", s.z.get_str()}};
  o["exact"] = true;
  o["lattice_points"] = v.points;
  o["equal"] = v.all_equal;
  json fails = json::array();
  for (auto [x, y] : v.failing) fails.push_back(json::array({x, y}));
  o["failing_points"] = fails;
  o["pass"] = v.all_equal;
  return o;
}

inline json gram_json(const std::string& family, const json& params, std::size_t nmax, double tol,
                      const GramResult& g) {
  json o;
  o["family"] = family;
  o["params"] = params;
  o["nmax"] = nmax;
  o["tol"] = tol;
  o["gram"] = g.gram;
  o["error_estimate"] = g.error_estimate;
  o["evaluations"] = g.evaluations;
  o["max_offdiag"] = g.max_offdiag;
  o["max_diag_dev"] = g.max_diag_dev;
  o["max_deviation"] = g.max_deviation();
  o["interval"] = json::array({g.interval_lo, g.interval_hi});
  return o;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string complex_csv(const Complex<double>& z) {
  return format_double(z.re) + (z.im < 0 || std::signbit(z.im) ? "" : "+") + format_double(z.im) + "i";
}

}  // namespace qkl::report
