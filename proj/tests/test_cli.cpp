#include <qkl/cli.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using qkl::cli::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = qkl::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "qkl_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

double value_re(const std::string& out) {
  auto pos = out.find("value: ");
  EXPECT_NE(pos, std::string::npos) << out;
  return std::stod(out.substr(pos + 7));
}

int lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Parse, Complex) {
  using qkl::cli::parse_complex;
  auto z = parse_complex("1.5-2i");
  EXPECT_EQ(z.re, 1.5);
  EXPECT_EQ(z.im, -2);
  EXPECT_EQ(parse_complex("i").im, 1);
  EXPECT_EQ(parse_complex("-i").im, -1);
  EXPECT_EQ(parse_complex("-2i").im, -2);
  EXPECT_EQ(parse_complex("3").re, 3);
  auto e = parse_complex("1e-3+2.5e2i");
  EXPECT_EQ(e.re, 1e-3);
  EXPECT_EQ(e.im, 250);
  EXPECT_THROW(parse_complex("abc"), qkl::ParamError);
  EXPECT_THROW(parse_complex("1+"), qkl::ParamError);
  EXPECT_THROW(qkl::cli::parse_real("nan"), qkl::ParamError);
}

TEST(Parse, Seeds) {
  EXPECT_EQ(qkl::cli::parse_seeds("3..7"), (std::pair<std::uint64_t, std::uint64_t>{3, 7}));
  EXPECT_EQ(qkl::cli::parse_seeds("4"), (std::pair<std::uint64_t, std::uint64_t>{4, 4}));
  EXPECT_THROW(qkl::cli::parse_seeds("7..3"), qkl::ParamError);
  EXPECT_THROW(qkl::cli::parse_seeds("x..3"), qkl::ParamError);
}

TEST(Eval, MPPolyAtHalfPi) {
  auto r = run({"eval", "poly", "family=mp", "k=1", "phi=1.5707963267948966", "n=1", "x=0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(std::fabs(value_re(r.out)), 1e-9);
  EXPECT_NE(r.out.find("terms_used: "), std::string::npos);
  EXPECT_NE(r.out.find("tail_estimate: "), std::string::npos);
  // the 8-digit angle leaves 2 cos(1.5707963) ~ 5.4e-8 by the n=1 closed form itself
  auto c = run({"eval", "poly", "family=mp", "k=1", "phi=1.5707963", "n=1", "x=0"});
  EXPECT_NEAR(value_re(c.out), 2 * std::cos(1.5707963), 1e-15);
}

TEST(Eval, KernelAtZero) {
  auto r = run({"eval", "kernel", "family=mp", "k=1", "phi=1.0", "t=0", "x=0", "y=0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(value_re(r.out), 1.0, 1e-15);
}

TEST(Eval, Series2F1) {
  auto r = run({"eval", "series", "type=2F1", "a=1", "b=1", "c=2", "z=0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(value_re(r.out), 2 * std::log(2.0), 1e-14);
  EXPECT_NE(r.out.find("status: Converged"), std::string::npos);
}

TEST(Eval, OtherTargets) {
  EXPECT_EQ(run({"eval", "series", "type=qinf", "a=0.9", "q=0.5"}).code, 0);
  EXPECT_EQ(run({"eval", "series", "type=pFq", "upper=1,1", "lower=2", "z=0.5"}).code, 0);
  EXPECT_EQ(run({"eval", "poly", "family=aw", "q=0.5", "a=0.3", "b=0.2", "n=3", "x=0.1"}).code, 0);
  EXPECT_EQ(run({"eval", "kernel", "family=ac", "k=0.6", "q=0.5", "t=0.3", "x=0.2", "y=-0.4", "form=alt"}).code, 0);
  auto s = run({"eval", "series", "type=pFq", "upper=1,1", "lower=2", "z=0.5"});
  auto t = run({"eval", "series", "type=2F1", "a=1", "b=1", "c=2", "z=0.5"});
  EXPECT_NEAR(value_re(s.out), value_re(t.out), 1e-15);
}

TEST(ExitCodes, BadInputIsTwo) {
  auto r = run({"eval", "poly", "family=mp", "k=-1", "phi=1", "n=1", "x=0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("k"), std::string::npos);  // names the constraint
  EXPECT_EQ(run({"eval", "poly", "family=mp", "k=1", "phi=1", "n=1"}).code, 2);           // missing x
  EXPECT_EQ(run({"eval", "poly", "family=mp", "k=1", "phi=1", "n=1", "x=0", "zz=1"}).code, 2);  // unknown key
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"check", "--identity", "nope"}).code, 2);
  EXPECT_EQ(run({"check", "--identity", "mp_poisson", "--tol", "0"}).code, 2);
  EXPECT_EQ(run({"check", "--identity", "mp_poisson", "--precision", "quad"}).code, 2);
  EXPECT_EQ(run({"check", "--identity", "mp_poisson", "--exact"}).code, 2);
}

TEST(ExitCodes, DivergenceIsThree) {
  auto r = run({"eval", "kernel", "family=mp", "k=1", "phi=1.0", "t=1", "x=0", "y=0"});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_EQ(run({"eval", "series", "type=pFq", "upper=1,1,1", "lower=2", "z=0.5"}).code, 3);
}

TEST(ExitCodes, FailureIsOne) {
  auto p = scratch("fail.json");
  auto r = run({"check", "--identity", "mp_poisson", "--seeds", "0..2", "--tol", "1e-30", "--precision", "standard",
                "--out", p.string()});
  EXPECT_EQ(r.code, 1);
  auto j = json::parse(slurp(p));  // report still written
  EXPECT_EQ(j["results"].size(), 3u);
  EXPECT_EQ(j["summary"]["failed"], 3);
}

TEST(Check, TenRecordsAllPass) {
  auto p = scratch("mp10.json");
  auto r = run({"check", "--identity", "mp_poisson", "--seeds", "0..9", "--out", p.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("10 passed / 0 failed / 0 errored"), std::string::npos);
  auto j = json::parse(slurp(p));
  ASSERT_EQ(j["results"].size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto& rec = j["results"][i];
    EXPECT_EQ(rec["seed"], i);
    EXPECT_TRUE(rec["pass"].get<bool>());
    EXPECT_LT(rec["rel_err"].get<double>(), 1e-9);
    EXPECT_TRUE(rec["lhs"].is_array());
  }
  EXPECT_EQ(j["run"]["command"], "check");
}

TEST(Check, ByteIdenticalReports) {
  auto a = scratch("det_a.json"), b = scratch("det_b.json");
  for (const auto& p : {a, b})
    ASSERT_EQ(run({"check", "--identity", "ac_poisson", "--identity", "mult_2f1", "--seeds", "0..4", "--out",
                   p.string()})
                  .code,
              0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}

TEST(Check, OrderedByIdentity) {
  auto r = run({"check", "--identity", "mult_2f1", "--identity", "conf_1f1", "--seeds", "0..1"});
  auto j = json::parse(r.out);
  ASSERT_EQ(j["results"].size(), 4u);
  EXPECT_EQ(j["results"][0]["identity"], "conf_1f1");
  EXPECT_EQ(j["results"][3]["identity"], "mult_2f1");
  EXPECT_NE(r.err.find("4 passed"), std::string::npos);
}

TEST(Check, ExactVerdicts) {
  auto r = run({"check", "--identity", "mult_2f1", "--exact", "--K", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  ASSERT_EQ(j["results"].size(), 5u);
  for (const auto& rec : j["results"]) {
    EXPECT_TRUE(rec["exact"].get<bool>());
    EXPECT_TRUE(rec["equal"].get<bool>());
    EXPECT_EQ(rec["K"], 8);
  }
  auto h = run({"check", "--identity", "hahn_bilinear_discrete", "--exact"});
  ASSERT_EQ(h.code, 0) << h.err;
  EXPECT_EQ(json::parse(h.out)["results"].size(), 5u);
}

TEST(Check, ParamsFile) {
  auto p = scratch("params.json");
  std::ofstream(p) << R"({"k": 0.8, "phi": 1.1, "t": [0.3, 0.1], "x": 0.4, "y": -1.2})";
  auto r = run({"check", "--identity", "mp_poisson", "--params", p.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  ASSERT_EQ(j["results"].size(), 1u);
  EXPECT_TRUE(j["results"][0]["seed"].is_null());
  EXPECT_EQ(run({"check", "--identity", "mp_poisson", "--params", p.string(), "--seeds", "0..1"}).code, 2);
  EXPECT_EQ(run({"check", "--identity", "mp_poisson", "--params", "/nonexistent.json"}).code, 2);
}

TEST(Check, ErroredCaseIsRecorded) {
  auto p = scratch("bad_params.json");
  std::ofstream(p) << R"({"k": 0.8, "phi": 1.1, "t": 1.0, "x": 0.4, "y": -1.2})";
  auto r = run({"check", "--identity", "mp_poisson", "--params", p.string()});
  EXPECT_EQ(r.code, 1);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["results"][0]["error"]["kind"], "DivergenceError");
  EXPECT_EQ(j["summary"]["errored"], 1);
}

TEST(Check, CsvFormat) {
  auto r = run({"check", "--identity", "conf_1f1", "--seeds", "0..2", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("identity,seed,set,pass,rel_err,abs_err,tol,lhs,rhs,", 0), 0u);
  EXPECT_EQ(lines(r.out), 4);
}

TEST(Sweep, TwelveRowsInGridOrder) {
  auto r = run({"sweep", "--identity", "mp_poisson", "--grid", "t=0,0.2,0.4,0.6", "--grid", "k=0.5,1,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,k,rel_err,abs_err,pass,error");
  std::vector<std::string> rows;
  while (std::getline(is, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0].substr(0, 4), "0,0.");
  EXPECT_EQ(rows[1].substr(0, 2), "0,");
  EXPECT_EQ(rows[3].substr(0, 6), "0.2000");  // %.17g: 0.20000000000000001
  for (const auto& row : rows) EXPECT_NE(row.find(",true,"), std::string::npos) << row;
  EXPECT_NE(r.err.find("12 points / 0 errored"), std::string::npos);
}

TEST(Sweep, InadmissiblePointCarriesError) {
  auto r = run({"sweep", "--identity", "mp_poisson", "--grid", "t=0.5,1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("DivergenceError"), std::string::npos);
  EXPECT_NE(r.err.find("2 points / 1 errored"), std::string::npos);
  EXPECT_EQ(run({"sweep", "--identity", "mp_poisson", "--grid", "w=1,2"}).code, 2);
  EXPECT_EQ(run({"sweep", "--identity", "mp_poisson", "--grid", "t=0.1", "--grid", "t=0.2"}).code, 2);
  EXPECT_EQ(run({"sweep", "--grid", "t=0.1"}).code, 2);
}

TEST(Sweep, JsonCarriesGridPoint) {
  auto r = run({"sweep", "--identity", "conf_1f1", "--grid", "x=0.5,1", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  ASSERT_EQ(j["results"].size(), 2u);
  EXPECT_EQ(j["results"][1]["grid_point"]["x"][0], 1.0);
}

TEST(Ortho, MPAndASC) {
  for (auto args : {std::vector<std::string>{"ortho", "family=mp", "k=0.8", "phi=1.1", "nmax=8"},
                    std::vector<std::string>{"ortho", "family=asc", "q=0.5", "a=0.4", "b=0.3", "nmax=8"}}) {
    auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    auto g = json::parse(r.out)["results"][0];
    EXPECT_LT(g["max_deviation"].get<double>(), 1e-7);
    EXPECT_EQ(g["gram"].size(), 9u);
  }
  EXPECT_EQ(run({"ortho", "family=asc", "q=0.5", "a=1.2", "b=0.3"}).code, 2);
  EXPECT_EQ(run({"ortho", "family=mp", "k=0.8", "phi=1.1", "nmax=20"}).code, 2);
}

TEST(Binary, VersionAndExitCodes) {
  const std::string exe = QKL_CLI_PATH;
  auto sh = [&](const std::string& args) {
    int st = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(st);
  };
  EXPECT_EQ(sh("--version"), 0);
  EXPECT_EQ(sh("eval series type=2F1 a=1 b=1 c=2 z=0.5"), 0);
  EXPECT_EQ(sh("eval poly family=mp k=0 phi=1 n=1 x=0"), 2);
  EXPECT_EQ(sh("eval kernel family=mp k=1 phi=1 t=1 x=0 y=0"), 3);
  EXPECT_EQ(sh("check --identity mp_poisson --seeds 0..1 --tol 1e-30 --precision standard"), 1);

  FILE* pipe = popen((exe + " eval series type=2F1 a=1 b=1 c=2 z=0.5").c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  char buf[256];
  std::string out;
  while (fgets(buf, sizeof buf, pipe)) out += buf;
  pclose(pipe);
  EXPECT_EQ(out.rfind("value: 1.3862943611198", 0), 0u) << out;
}
