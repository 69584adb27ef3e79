// Command-line front end: eval, check, sweep, ortho.
//
// Exit codes: 0 ok, 1 identity failures or errored cases in `check`,
// 2 bad input, 3 numerical divergence.
#pragma once

#include "report.hpp"

#include <CLI11.hpp>

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qkl::cli {

using report::json;

enum ExitCode : int { kOk = 0, kFailures = 1, kBadInput = 2, kDivergence = 3 };

/// Numerical breakdowns map to 3, everything else the library raises is a
/// problem with the input.
inline int exit_code_for(const Error& e) {
  if (dynamic_cast<const DivergenceError*>(&e) || dynamic_cast<const ConvergenceError*>(&e) ||
      dynamic_cast<const RealityError*>(&e))
    return kDivergence;
  return kBadInput;
}

// ---------------------------------------------------------------------------
// parsing helpers

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw ParamError("empty number");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v) || errno == ERANGE)
    throw ParamError("cannot parse number '" + text + "'");
  return v;
}

/// Accepts "1.5", "-2i", "i", "0.3-0.4i", "1e-3+2e-1i".
inline Complex<double> parse_complex(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw ParamError("empty number");
  if (s.back() != 'i') return {parse_real(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  auto imag = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  std::size_t pos = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;)
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      pos = i;
      break;
    }
  if (pos == std::string::npos) return {0.0, imag(body)};
  return {parse_real(body.substr(0, pos)), imag(body.substr(pos))};
}

inline std::vector<Complex<double>> parse_complex_list(const std::string& text) {
  std::vector<Complex<double>> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  return out;
}

/// "A..B" (inclusive) or a single "A".
inline std::pair<std::uint64_t, std::uint64_t> parse_seeds(const std::string& text) {
  auto num = [&](const std::string& t) {
    const std::string s = trim(t);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw ParamError("--seeds expects A..B with nonnegative integers, got '" + text + "'");
    return static_cast<std::uint64_t>(std::stoull(s));
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    auto a = num(text);
    return {a, a};
  }
  auto a = num(text.substr(0, dots)), b = num(text.substr(dots + 2));
  if (a > b) throw ParamError("--seeds: A must not exceed B");
  return {a, b};
}

using KeyValues = std::map<std::string, std::string>;

inline KeyValues parse_key_values(const std::vector<std::string>& items) {
  KeyValues kv;
  for (const auto& it : items) {
    auto eq = it.find('=');
    if (eq == std::string::npos || eq == 0) throw ParamError("expected key=value, got '" + it + "'");
    auto key = trim(it.substr(0, eq));
    if (kv.count(key)) throw ParamError("parameter '" + key + "' given twice");
    kv[key] = it.substr(eq + 1);
  }
  return kv;
}

/// Typed access to key=value arguments; reports unknown keys.
class Args {
 public:
  explicit Args(KeyValues kv) : kv_(std::move(kv)) {}

  bool has(const std::string& k) const { return kv_.count(k) != 0; }
  const std::string& str(const std::string& k) {
    used_.insert(k);
    auto it = kv_.find(k);
    if (it == kv_.end()) throw ParamError("missing parameter '" + k + "'");
    return it->second;
  }
  std::string str_or(const std::string& k, const std::string& dflt) { return has(k) ? str(k) : dflt; }
  double real(const std::string& k) { return parse_real(str(k)); }
  double real_or(const std::string& k, double dflt) { return has(k) ? real(k) : dflt; }
  Complex<double> cplx(const std::string& k) { return parse_complex(str(k)); }
  Complex<double> cplx_or(const std::string& k, Complex<double> dflt) { return has(k) ? cplx(k) : dflt; }
  std::vector<Complex<double>> list(const std::string& k) { return parse_complex_list(str(k)); }
  std::size_t count(const std::string& k) {
    double v = real(k);
    if (v < 0 || std::floor(v) != v || v > 1e6) throw ParamError("parameter '" + k + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
  }
  std::size_t count_or(const std::string& k, std::size_t dflt) { return has(k) ? count(k) : dflt; }
  bool flag(const std::string& k) {
    if (!has(k)) return false;
    const auto& v = str(k);
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw ParamError("parameter '" + k + "' must be 0/1 or true/false");
  }
  void finish() const {
    for (const auto& [k, v] : kv_)
      if (!used_.count(k)) throw ParamError("unknown parameter '" + k + "'");
  }

 private:
  KeyValues kv_;
  std::set<std::string> used_;
};

/// Flat JSON object: name -> number, [re, im], or a string in complex syntax.
inline ParamMap params_from_json(const json& j) {
  if (!j.is_object()) throw ParamError("parameter file must hold a flat JSON object");
  ParamMap out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    if (v.is_number())
      out[it.key()] = {v.get<double>(), 0.0};
    else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      out[it.key()] = {v[0].get<double>(), v[1].get<double>()};
    else if (v.is_string())
      out[it.key()] = parse_complex(v.get<std::string>());
    else
      throw ParamError("parameter '" + it.key() + "' must be a number, [re, im] or a string");
  }
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParamError("cannot open parameter file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParamError("parameter file '" + path + "' is not valid JSON: " + e.what());
  }
}

// exact-mode parameter files: strings "p/q", integers, or [re, im] pairs of those
inline exact::BigRational rational_from_json(const json& v, const std::string& name) {
  if (v.is_string()) return exact::parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return exact::BigRational(v.dump());
  if (v.is_number_float()) {
    std::string t = v.dump();
    if (t.find_first_of("eE") != std::string::npos)
      throw ParamError("parameter '" + name + "': give exponent-form values as rational strings");
    return exact::parse_rational(t);
  }
  throw ParamError("parameter '" + name + "' must be a rational number");
}

inline exact::GR gaussian_from_json(const json& j, const std::string& name) {
  if (!j.contains(name)) throw ParamError("missing parameter '" + name + "'");
  const auto& v = j.at(name);
  if (v.is_array()) {
    if (v.size() != 2) throw ParamError("parameter '" + name + "' must be [re, im]");
    return exact::GR(rational_from_json(v[0], name), rational_from_json(v[1], name));
  }
  return exact::GR(rational_from_json(v, name), exact::BigRational(0));
}

inline long integer_from_json(const json& j, const std::string& name) {
  if (!j.contains(name) || !j.at(name).is_number_integer())
    throw ParamError("parameter '" + name + "' must be an integer");
  return j.at(name).get<long>();
}

inline std::string format_value(const Complex<double>& z) {
  return z.im == 0 ? report::format_double(z.re) : report::complex_csv(z);
}

// ---------------------------------------------------------------------------
// eval

struct EvalOutput {
  Complex<double> value;
  std::size_t terms_used = 0;
  double tail_estimate = 0;
  std::string status;
};

template <class R>
EvalOutput eval_output(const SeriesEval<R>& e) {
  return {e.value, e.terms_used, static_cast<double>(e.tail_estimate), to_string(e.status)};
}

inline EvalOutput eval_poly(Args& a) {
  const std::string fam = a.str("family");
  const std::size_t n = a.count("n");
  EvalOutput o;
  o.status = "TerminatedFinite";
  auto meta = [&](const auto& pv) {
    o.terms_used = pv.terms;
    o.tail_estimate = static_cast<double>(pv.error_estimate);
  };
  if (fam == "mp") {
    MPParams<double> p{a.real("k"), a.real("phi")};
    const double x = a.real("x");
    const bool on = a.flag("orthonormal");
    o.value = mp_poly(p, n, x, on);
    meta(mp_poly_eval(p, n, x));
  } else if (fam == "chahn") {
    CHahnParams<double> p{a.cplx("a"), a.cplx("b"), a.cplx("c"), a.cplx("d")};
    const double x = a.real("x");
    o.value = chahn_poly(p, n, x);
    meta(chahn_poly_eval(p, n, x));
  } else if (fam == "hahn") {
    HahnParams<double> p{a.cplx("alpha"), a.cplx("beta"), a.count("N")};
    o.value = hahn_poly(p, n, a.real("x"));
    o.terms_used = n + 1;
  } else if (fam == "jacobi") {
    o.value = jacobi_poly(a.real("alpha"), a.real("beta"), n, a.real("x"));
    o.terms_used = n + 1;
  } else if (fam == "aw") {
    AWParams<double> p{a.real("q"), a.cplx("a"), a.cplx_or("b", 0), a.cplx_or("c", 0), a.cplx_or("d", 0)};
    const double x = a.real("x");
    o.value = aw_poly(p, n, x);
    meta(aw_poly_eval(p, n, x));
  } else if (fam == "asc") {
    ASCParams<double> p{a.real("q"), a.cplx("a"), a.cplx("b")};
    const double x = a.real("x");
    o.value = asc_poly(p, n, x, a.flag("orthonormal"));
    meta(asc_poly_eval(p, n, x));
  } else {
    throw ParamError("poly family must be one of mp, chahn, hahn, jacobi, aw, asc");
  }
  return o;
}

inline EvalOutput eval_kernel(Args& a, const TruncationPolicy& pol) {
  const std::string fam = a.str("family");
  const std::string form = a.str_or("form", "closed");
  KernelPoint<double> pt;
  pt.t = a.cplx("t");
  pt.x = a.real("x");
  pt.y = a.real("y");
  if (fam == "mp") {
    const double k = a.real("k"), phi = a.real("phi");
    if (form == "sum") return eval_output(mp_kernel_sum(k, phi, pt, pol));
    if (form == "closed") {
      auto e = mp_kernel_closed_scaled(k, phi, pt, pol);
      e.value = e.value * std::exp(-lgamma_real(2 * k));
      return eval_output(e);
    }
    throw ParamError("mp kernel form must be sum or closed");
  }
  if (fam == "ac") {
    const double k = a.real("k"), q = a.real("q");
    pt.s = a.cplx_or("s", 1);
    pt.sigma = a.cplx_or("sigma", 1);
    if (form == "sum") return eval_output(ac_kernel_sum(k, q, pt, pol));
    if (form == "closed") return eval_output(ac_kernel_closed_eval(k, q, pt, pol));
    if (form == "alt") return eval_output(ac_kernel_closed_alt_eval(k, q, pt, pol));
    throw ParamError("ac kernel form must be sum, closed or alt");
  }
  throw ParamError("kernel family must be mp or ac");
}

inline EvalOutput eval_series(Args& a, const TruncationPolicy& pol) {
  const std::string type = a.str("type");
  if (type == "2F1") return eval_output(hyp2f1(a.cplx("a"), a.cplx("b"), a.cplx("c"), a.cplx("z"), pol));
  if (type == "pFq") return eval_output(hyp_pfq(a.list("upper"), a.list("lower"), a.cplx("z"), pol));
  if (type == "rphis")
    return eval_output(bhs_rphis(a.list("upper"), a.list("lower"), QBase<double>(a.real("q")), a.cplx("z"), pol));
  if (type == "8W7") {
    std::vector<Complex<double>> b5;
    for (int i = 1; i <= 5; ++i) b5.push_back(a.cplx("b" + std::to_string(i)));
    return eval_output(vwp_8w7(a.cplx("a"), b5, QBase<double>(a.real("q")), a.cplx("z"), pol));
  }
  if (type == "qinf") {
    const double q = a.real("q");
    const auto av = a.cplx("a");
    auto r = q_shifted_inf(av, q);
    EvalOutput o;
    o.value = r.value;
    o.terms_used = r.truncation_index;
    o.tail_estimate = abs(av) * std::pow(q, static_cast<double>(r.truncation_index)) / (1 - q);
    o.status = "Converged";
    return o;
  }
  throw ParamError("series type must be one of 2F1, pFq, rphis, 8W7, qinf");
}

inline int cmd_eval(const std::string& target, const std::vector<std::string>& items, std::ostream& out) {
  Args a(parse_key_values(items));
  TruncationPolicy pol = TruncationPolicy::defaults();
  EvalOutput o;
  if (target == "poly")
    o = eval_poly(a);
  else if (target == "kernel")
    o = eval_kernel(a, pol);
  else if (target == "series")
    o = eval_series(a, pol);
  else
    throw ParamError("eval target must be poly, kernel or series");
  a.finish();
  out << "value: " << format_value(o.value) << "\n";
  out << "terms_used: " << o.terms_used << "\n";
  out << "tail_estimate: " << report::format_double(o.tail_estimate) << "\n";
  if (!o.status.empty()) out << "status: " << o.status << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// check

struct RunConfig {
  std::string command;
  std::vector<std::string> identities;
  bool all = false;
  std::optional<std::string> params_file;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> seeds;
  std::optional<double> tol;
  PrecisionMode precision = PrecisionMode::Auto;
  bool exact = false;
  std::size_t K = 8;
  std::optional<std::string> out;
  std::string format = "json";
  std::vector<std::string> grid;

  void validate() const {
    if (tol && !(*tol > 0)) throw ParamError("--tol must be > 0");
    if (format != "json" && format != "csv") throw ParamError("--format must be json or csv");
    if (K == 0) throw ParamError("--K must be positive");
  }

  json to_json() const {
    json c;
    c["identities"] = identities;
    c["all"] = all;
    c["params_file"] = params_file ? json(*params_file) : json(nullptr);
    c["seeds"] = seeds ? json::array({seeds->first, seeds->second}) : json(nullptr);
    c["tol"] = tol ? json(*tol) : json(nullptr);
    c["precision"] = to_string(precision);
    c["exact"] = exact;
    if (exact) c["K"] = K;
    c["format"] = format;
    if (!grid.empty()) c["grid"] = grid;
    return c;
  }
};

struct Tally {
  std::size_t passed = 0, failed = 0, errored = 0;
  void add(const json& rec) {
    if (rec.contains("error"))
      ++errored;
    else if (rec.at("pass").get<bool>())
      ++passed;
    else
      ++failed;
  }
  std::string line() const {
    return std::to_string(passed) + " passed / " + std::to_string(failed) + " failed / " +
           std::to_string(errored) + " errored";
  }
};

inline const std::set<std::string>& exact_capable() {
  static const std::set<std::string> s{"mult_2f1", "burchnall_chaundy", "hahn_bilinear_discrete"};
  return s;
}

inline json error_record(const std::string& id, std::optional<std::uint64_t> seed, const std::exception& e) {
  if (auto* qe = dynamic_cast<const Error*>(&e)) return report::error_json(id, seed, qe->kind(), qe->what());
  return report::error_json(id, seed, "Exception", e.what());
}

inline std::vector<json> run_exact(const std::string& id, const RunConfig& cfg) {
  std::vector<json> out;
  std::optional<json> file;
  if (cfg.params_file) file = read_json_file(*cfg.params_file);
  if (id == "hahn_bilinear_discrete") {
    std::vector<exact::HahnSet> sets;
    if (file)
      sets.push_back({"params", rational_from_json(file->value("alpha", json()), "alpha"),
                      rational_from_json(file->value("beta", json()), "beta"), integer_from_json(*file, "M"),
                      integer_from_json(*file, "N"), rational_from_json(file->value("z", json()), "z")});
    else
      sets = exact::default_hahn_sets();
    for (const auto& s : sets) {
      try {
        if (s.M < 1 || s.N < 1) throw ParamError("M and N must be positive integers");
        out.push_back(report::hahn_exact_json(s, exact::verify_hahn_lattice(s)));
      } catch (const std::exception& e) {
        auto r = error_record(id, std::nullopt, e);
        r["set"] = s.name;
        out.push_back(r);
      }
    }
    return out;
  }
  std::vector<exact::MultSet> sets;
  if (file) {
    exact::MultSet s{"params", gaussian_from_json(*file, "a"), gaussian_from_json(*file, "b"),
                     gaussian_from_json(*file, "c"), {}, {}, {}};
    if (id == "burchnall_chaundy") {
      s.ap = s.a;
      s.bp = s.b;
      s.cp = s.c;
    } else {
      s.ap = gaussian_from_json(*file, "ap");
      s.bp = gaussian_from_json(*file, "bp");
      s.cp = gaussian_from_json(*file, "cp");
    }
    sets.push_back(s);
  } else {
    sets = id == "burchnall_chaundy" ? exact::default_square_sets() : exact::default_mult_sets();
  }
  for (const auto& s : sets) {
    try {
      auto v = exact::verify_mult_2f1_exact(s.a, s.b, s.c, s.ap, s.bp, s.cp, cfg.K);
      out.push_back(report::mult_exact_json(id, s, cfg.K, v));
    } catch (const std::exception& e) {
      auto r = error_record(id, std::nullopt, e);
      r["set"] = s.name;
      out.push_back(r);
    }
  }
  return out;
}

inline json run_numeric_case(const std::string& id, IdentityCase c, const RunConfig& cfg) {
  c.precision = cfg.precision;
  c.tol_rel = cfg.tol ? *cfg.tol : default_tol(id, cfg.precision);
  try {
    return report::identity_json(run_case(c));
  } catch (const std::exception& e) {
    return error_record(id, c.seed, e);
  }
}

inline std::vector<std::string> selected_ids(const RunConfig& cfg) {
  std::set<std::string> ids;
  if (cfg.all)
    for (const auto& id : identity_ids()) ids.insert(id);
  for (const auto& id : cfg.identities) {
    find_identity(id);
    ids.insert(id);
  }
  if (ids.empty()) throw ParamError("check needs --identity ID or --all");
  return {ids.begin(), ids.end()};
}

inline std::string check_csv(const std::vector<json>& results) {
  auto field = [](const json& r, const char* k) -> std::string {
    if (!r.contains(k) || r.at(k).is_null()) return "";
    const auto& v = r.at(k);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return report::format_double(v.get<double>());
    if (v.is_array() && v.size() == 2 && v[0].is_number())
      return report::complex_csv({v[0].get<double>(), v[1].get<double>()});
    return v.dump();
  };
  std::ostringstream os;
  os << "identity,seed,set,pass,rel_err,abs_err,tol,lhs,rhs,lhs_terms,rhs_terms,precision_used,retried,error\n";
  for (const auto& r : results) {
    std::string lt, rt, err;
    if (r.contains("terms")) {
      lt = std::to_string(r["terms"]["lhs"]["terms"].get<std::size_t>());
      rt = std::to_string(r["terms"]["rhs"]["terms"].get<std::size_t>());
    }
    if (r.contains("error"))
      err = r["error"]["kind"].get<std::string>() + ": " + r["error"]["message"].get<std::string>();
    os << report::csv_escape(field(r, "identity")) << "," << field(r, "seed") << "," << field(r, "set") << ","
       << field(r, "pass") << "," << field(r, "rel_err") << "," << field(r, "abs_err") << "," << field(r, "tol")
       << "," << field(r, "lhs") << "," << field(r, "rhs") << "," << lt << "," << rt << ","
       << field(r, "precision_used") << "," << field(r, "retried") << "," << report::csv_escape(err) << "\n";
  }
  return os.str();
}

inline void emit(const RunConfig& cfg, const std::string& doc, std::ostream& out) {
  if (!cfg.out) {
    out << doc;
    return;
  }
  std::ofstream f(*cfg.out, std::ios::binary);
  if (!f) throw ParamError("cannot write output file '" + *cfg.out + "'");
  f << doc;
}

inline int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const auto ids = selected_ids(cfg);
  if (cfg.params_file && cfg.seeds) throw ParamError("--params and --seeds are mutually exclusive");
  std::vector<json> results;
  if (cfg.exact) {
    for (const auto& id : ids)
      if (!exact_capable().count(id))
        throw ParamError("--exact supports mult_2f1, burchnall_chaundy, hahn_bilinear_discrete; not '" + id + "'");
    for (const auto& id : ids)
      for (auto& r : run_exact(id, cfg)) results.push_back(std::move(r));
  } else {
    std::optional<ParamMap> fixed;
    if (cfg.params_file) fixed = params_from_json(read_json_file(*cfg.params_file));
    for (const auto& id : ids) {
      if (fixed) {
        IdentityCase c;
        c.identity_id = id;
        c.params = *fixed;
        results.push_back(run_numeric_case(id, c, cfg));
        continue;
      }
      std::uint64_t lo = 0, hi = find_identity(id).default_count - 1;
      if (cfg.seeds) std::tie(lo, hi) = *cfg.seeds;
      for (std::uint64_t s = lo;; ++s) {
        results.push_back(run_numeric_case(id, sample_params(id, s), cfg));
        if (s == hi) break;
      }
    }
  }
  Tally tally;
  for (const auto& r : results) tally.add(r);

  std::string doc;
  if (cfg.format == "csv") {
    doc = check_csv(results);
  } else {
    json d;
    d["run"] = {{"command", "check"}, {"config", cfg.to_json()}, {"version", report::kVersion}};
    d["results"] = results;
    d["summary"] = {{"passed", tally.passed}, {"failed", tally.failed}, {"errored", tally.errored}};
    doc = report::dump(d);
  }
  emit(cfg, doc, out);
  // keep stdout a clean document when the report goes there
  (cfg.out ? out : err) << tally.line() << "\n";
  return tally.failed == 0 && tally.errored == 0 ? kOk : kFailures;
}

// ---------------------------------------------------------------------------
// sweep

struct GridAxis {
  std::string name;
  std::vector<Complex<double>> values;
};

inline GridAxis parse_grid(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ParamError("--grid expects name=v1,v2,...");
  GridAxis g{trim(text.substr(0, eq)), parse_complex_list(text.substr(eq + 1))};
  if (g.values.empty()) throw ParamError("--grid '" + g.name + "' has no values");
  return g;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  if (cfg.identities.size() != 1) throw ParamError("sweep needs exactly one --identity");
  const std::string id = cfg.identities.front();
  const auto& info = find_identity(id);
  if (cfg.grid.empty()) throw ParamError("sweep needs at least one --grid name=v1,v2,...");
  std::vector<GridAxis> axes;
  for (const auto& g : cfg.grid) {
    auto ax = parse_grid(g);
    if (std::find(info.params.begin(), info.params.end(), ax.name) == info.params.end())
      throw ParamError("'" + ax.name + "' is not a free parameter of " + id);
    for (const auto& prev : axes)
      if (prev.name == ax.name) throw ParamError("grid parameter '" + ax.name + "' given twice");
    axes.push_back(std::move(ax));
  }
  ParamMap base = cfg.params_file ? params_from_json(read_json_file(*cfg.params_file))
                                  : sample_params(id, cfg.seeds ? cfg.seeds->first : 0).params;

  std::vector<std::pair<ParamMap, json>> rows;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    ParamMap p = base;
    for (std::size_t d = 0; d < axes.size(); ++d) p[axes[d].name] = axes[d].values[idx[d]];
    IdentityCase c;
    c.identity_id = id;
    c.params = p;
    rows.emplace_back(p, run_numeric_case(id, c, cfg));
    // last axis varies fastest
    std::size_t d = axes.size();
    while (d > 0) {
      --d;
      if (++idx[d] < axes[d].values.size()) break;
      idx[d] = 0;
      if (d == 0) goto done;
    }
  }
done:
  std::size_t errored = 0;
  for (const auto& r : rows) errored += r.second.contains("error");

  std::string doc;
  if (cfg.format == "json") {
    json d;
    d["run"] = {{"command", "sweep"}, {"config", cfg.to_json()}, {"version", report::kVersion}};
    json res = json::array();
    for (auto& [p, r] : rows) {
      json g;
      for (const auto& ax : axes) g[ax.name] = report::complex_json(p.at(ax.name));
      r["grid_point"] = g;
      res.push_back(r);
    }
    d["results"] = res;
    doc = report::dump(d);
  } else {
    std::ostringstream os;
    for (const auto& ax : axes) os << ax.name << ",";
    os << "rel_err,abs_err,pass,error\n";
    for (const auto& [p, r] : rows) {
      for (const auto& ax : axes) os << format_value(p.at(ax.name)) << ",";
      if (r.contains("error")) {
        os << ",,false,"
           << report::csv_escape(r["error"]["kind"].get<std::string>() + ": " +
                                 r["error"]["message"].get<std::string>())
           << "\n";
      } else {
        os << report::format_double(r["rel_err"].get<double>()) << ","
           << report::format_double(r["abs_err"].get<double>()) << "," << (r["pass"].get<bool>() ? "true" : "false")
           << ",\n";
      }
    }
    doc = os.str();
  }
  emit(cfg, doc, out);
  (cfg.out ? out : err) << rows.size() << " points / " << errored << " errored\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// ortho

inline int cmd_ortho(const std::vector<std::string>& items, const RunConfig& cfg, std::ostream& out) {
  Args a(parse_key_values(items));
  const std::string fam = a.str("family");
  const std::size_t nmax = a.count_or("nmax", 8);
  const double tol = a.real_or("tol", 1e-9);
  json params;
  GramResult g;
  if (fam == "mp") {
    MPParams<double> p{a.real("k"), a.real("phi")};
    a.finish();
    params = {{"k", p.k}, {"phi", p.phi}};
    g = ortho_gram_mp(p, nmax, tol);
  } else if (fam == "asc") {
    ASCParams<double> p{a.real("q"), a.cplx("a"), a.cplx("b")};
    a.finish();
    params = {{"q", p.q}, {"a", report::complex_json(p.a)}, {"b", report::complex_json(p.b)}};
    g = ortho_gram_asc(p, nmax, tol);
  } else {
    throw ParamError("ortho family must be mp or asc");
  }
  json d;
  d["run"] = {{"command", "ortho"}, {"config", {{"family", fam}, {"nmax", nmax}, {"tol", tol}}},
              {"version", report::kVersion}};
  d["results"] = json::array({report::gram_json(fam, params, nmax, tol, g)});
  emit(cfg, report::dump(d), out);
  if (cfg.out)
    out << "max_offdiag: " << report::format_double(g.max_offdiag)
        << "\nmax_diag_dev: " << report::format_double(g.max_diag_dev) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// entry point

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qkl: hypergeometric and q-series kernels, bilinear identity checks"};
  app.set_version_flag("--version", std::string(report::kVersion));
  app.require_subcommand(1);

  RunConfig cfg;
  std::string seeds, precision = "auto", target;
  std::vector<std::string> items;

  auto* eval = app.add_subcommand("eval", "Evaluate a polynomial, kernel or series");
  eval->add_option("target", target, "poly | kernel | series")->required();
  eval->add_option("params", items, "key=value parameters");

  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--identity", cfg.identities, "Identity id (repeatable)");
    sc->add_option("--seeds", seeds, "Seed range A..B (inclusive)");
    sc->add_option("--params", cfg.params_file, "Flat JSON parameter file");
    sc->add_option("--tol", cfg.tol, "Relative tolerance");
    sc->add_option("--precision", precision, "standard | extended | auto");
    sc->add_option("--out", cfg.out, "Output file (default: stdout)");
  };
  auto* check = app.add_subcommand("check", "Verify identities on seeded or given parameters");
  add_common(check);
  check->add_flag("--all", cfg.all, "All registered identities");
  check->add_flag("--exact", cfg.exact, "Exact rational verification");
  check->add_option("--K", cfg.K, "Coefficients checked in exact mode");
  check->add_option("--format", cfg.format, "json | csv");

  auto* sweep = app.add_subcommand("sweep", "Evaluate one identity over a parameter grid");
  add_common(sweep);
  sweep->add_option("--grid", cfg.grid, "name=v1,v2,... (repeatable)");
  std::string sweep_format = "csv";
  sweep->add_option("--format", sweep_format, "csv | json");

  auto* ortho = app.add_subcommand("ortho", "Gram matrix of an orthonormal family");
  ortho->add_option("params", items, "family=mp|asc, parameters, nmax, tol");
  ortho->add_option("--out", cfg.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << report::kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }

  try {
    cfg.precision = parse_precision_mode(precision);
    if (!seeds.empty()) cfg.seeds = parse_seeds(seeds);
    if (*eval) {
      cfg.command = "eval";
      return cmd_eval(target, items, out);
    }
    if (*check) {
      cfg.command = "check";
      return cmd_check(cfg, out, err);
    }
    if (*sweep) {
      cfg.command = "sweep";
      cfg.format = sweep_format;
      return cmd_sweep(cfg, out, err);
    }
    cfg.command = "ortho";
    return cmd_ortho(items, cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
}

/// Convenience overload for in-process use; args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"qkl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qkl::cli
