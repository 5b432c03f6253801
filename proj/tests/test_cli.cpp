#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "iwasawa/report.hpp"

namespace fs = std::filesystem;
using namespace iwasawa;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("iwasawa_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Run run(const std::string& args) {
  const auto err_path = scratch() / "stderr.txt";
  const std::string cmd = std::string(IWASAWA_CLI) + " " + args + " 2>" + err_path.string();
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

std::string write_spec(const std::string& name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(CliTower, TrivialCustomTower) {
  const auto spec = write_spec("trivial.toml", "[tower]\np = 3\nd = 2\nlambda0 = 2\ns_cyc = 0\nlevels = 3\n");
  const auto r = run("--format json tower " + spec);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = report::parse_json(r.out);
  for (const auto& row : rep.rows) EXPECT_EQ(*row.lambda_exact, growth::pow_big(3, row.n) * 2);
}

TEST(CliTower, FalseTateWithQuotedCount) {
  for (int lambda = 0; lambda <= 1; ++lambda) {
    const auto spec = write_spec("ft.toml", "[scenario]\nkind = \"false_tate\"\np = 3\nell = 5\nlevels = 5\n"
                                            "lambda0 = " + std::to_string(lambda) +
                                                "\ns_cyc = 2\nreference_s_cyc = 2\n");
    const auto r = run("--format json tower " + spec);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rep = report::parse_json(r.out);
    for (const auto& row : rep.rows) {
      EXPECT_EQ(row.bound_upper, growth::pow_big(3, row.n) * (lambda + 2 + row.xi_plus) - row.xi_plus);
    }
    bool computed = false;
    for (const auto& [k, v] : rep.notes) computed = computed || (k == "s_cyc computed" && v == "1");
    EXPECT_TRUE(computed);
  }
}

TEST(CliTower, MalformedSpecExitsOne) {
  const auto spec = write_spec("bad.toml", "[tower]\np = 3\nd = 2\ns_cyc = 0\nlevels = 3\nspeed = 4\n");
  const auto r = run("tower " + spec);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("tower.speed"), std::string::npos) << r.err;
  EXPECT_EQ(run("tower " + (scratch() / "missing.toml").string()).code, 1);
}

TEST(CliTower, ViolationExitsTwo) {
  const auto spec = write_spec("violation.toml", "[tower]\np = 3\nd = 2\ns_cyc = 0\nlevels = 1\n\n"
                                                 "[[steps]]\nlevel = 0\ndeltas = [0]\nram = [[3, 3]]\n");
  const auto r = run("tower " + spec);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("violation"), std::string::npos);
}

TEST(CliTower, DeterministicOutputAndSeedOverride) {
  const auto spec = write_spec("random.toml", "[scenario]\nkind = \"random\"\np = 5\nd = 3\nlevels = 3\n"
                                              "delta_policy = \"uniform\"\ndelta_range = [-2, 2]\n");
  for (const char* fmt : {"json", "csv"}) {
    const auto a = run(std::string("--format ") + fmt + " --seed 11 tower " + spec);
    const auto b = run(std::string("--format ") + fmt + " --seed 11 tower " + spec);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
  EXPECT_NE(run("--format json --seed 1 tower " + spec).out, run("--format json --seed 2 tower " + spec).out);
}

TEST(CliTower, OutputFile) {
  const auto spec = write_spec("out.toml", "[tower]\np = 3\nd = 2\ns_cyc = 0\nlevels = 1\n");
  const auto target = (scratch() / "report.csv").string();
  const auto r = run("--format csv --output " + target + " tower " + spec);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(target).rfind("n,lambda_exact,", 0), 0u);
}

TEST(CliGroup, NamedGroups) {
  auto r = run("group --p 3 --K 3 --preset gamma");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("dimension: 4"), std::string::npos) << r.out;
  r = run("--format json group --p 3 --K 3 --gen '4,0;0,1' --gen '1,1;0,1'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"dimension\": 2"), std::string::npos) << r.out;
}

TEST(CliGroup, Errors) {
  EXPECT_EQ(run("group --p 3 --K 2 --gen '2,0;0,1' --gen '1,1;0,1'").code, 1);  // not a p-group
  const auto r = run("group --p 3 --K 3 --preset false_tate --depth 2");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("raise --K"), std::string::npos) << r.err;
  EXPECT_EQ(run("group --p 3 --K 3").code, 1);
}

TEST(CliCyclo, StabilizedCount) {
  const auto r = run("cyclo --p 3 --ell 7");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("stabilized g = 2"), std::string::npos) << r.out;
  const auto j = run("--format json cyclo --p 3 --ell 5 --ell 7 --oracle");
  EXPECT_NE(j.out.find("\"s_cyc\": 3"), std::string::npos) << j.out;
  EXPECT_EQ(run("cyclo --p 3 --ell 3").code, 1);
}

TEST(CliPadic, Prep) {
  const auto r = run("padic prep \"3+3*T\" --p 3");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mu = 1"), std::string::npos);
  EXPECT_NE(r.out.find("lambda = 0"), std::string::npos);
  const auto inv = run("--format csv padic invariants \"27 + 9*T^3\" --p 3");
  EXPECT_EQ(inv.out, "mu,lambda\n2,3\n");
  EXPECT_EQ(run("padic prep \"0\" --p 3").code, 1);
}

TEST(CliFlags, HelpAndInvalid) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("--frobnicate").code, 1);
  EXPECT_EQ(run("--format xml cyclo --p 3 --ell 7").code, 1);
  EXPECT_EQ(run("").code, 1);
}
