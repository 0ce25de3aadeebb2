#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("tev_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd = std::string(TEV_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class ScratchCleanup : public ::testing::Environment {
 public:
  void TearDown() override { fs::remove_all(scratch()); }
};

const auto* const kCleanup = ::testing::AddGlobalTestEnvironment(new ScratchCleanup);

}  // namespace

TEST(Cli, ProfileInfoExample) {
  const auto r = run("profile-info --profile colton_example --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["a"].get<double>(), std::log(3.0), 1e-12);
  EXPECT_EQ(j["regime"], "a_gt_1");
  EXPECT_EQ(j["m"], 0);
  EXPECT_TRUE(j.contains("epsilon"));
}

TEST(Cli, ProfileInfoUnitIndex) {
  const auto r = run("profile-info --profile const1 --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["a"].get<double>(), 1.0);
  EXPECT_EQ(j["regime"], "a_eq_1");
}

TEST(Cli, ProfileFromFile) {
  const fs::path p = scratch() / "step.json";
  std::ofstream(p) << R"({"kind":"named","name":"smooth_step","params":[0.25,0.5]})";
  const auto r = run("profile-info --json --profile " + p.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["regime"], "a_lt_1");
}

TEST(Cli, InputErrorsExitTwo) {
  const fs::path bad = scratch() / "bad.json";
  std::ofstream(bad) << "{\"kind\": ";
  EXPECT_EQ(run("profile-info --profile " + bad.string()).code, 2);
  EXPECT_EQ(run("profile-info --profile no_such_profile").code, 2);
  EXPECT_EQ(run("spectrum --profile const4 --rect 0,10,0").code, 2);
  EXPECT_EQ(run("spectrum --profile const4 --rect 0,10,x,1").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, SpectrumConstantFour) {
  const auto r = run("spectrum --profile const4 --rect 0,10,0,1");
  ASSERT_EQ(r.code, 0);
  std::stringstream ss(r.out);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "re_k,im_k,multiplicity,class,residual");
  int n = 0;
  while (std::getline(ss, line)) {
    double re = 0.0;
    int mult = 0;
    char comma = 0;
    double im = 0.0;
    std::stringstream row(line);
    row >> re >> comma >> im >> comma >> mult;
    if (n == 0) {
      EXPECT_EQ(mult, 2);
    } else {
      EXPECT_NEAR(re, n * std::numbers::pi, 1e-8);
      EXPECT_EQ(mult, 3);
    }
    ++n;
  }
  EXPECT_EQ(n, 4);
}

TEST(Cli, SpectrumDegenerateExitsNonzero) {
  EXPECT_EQ(run("spectrum --profile const1 --rect 1,5,0,1").code, 4);
}

TEST(Cli, SpectrumIsDeterministic) {
  const auto a = scratch() / "det_a";
  const auto b = scratch() / "det_b";
  ASSERT_EQ(run("spectrum --profile colton_example --rect 0.5,15,0,5 --out " + a.string()).code, 0);
  ASSERT_EQ(run("spectrum --profile colton_example --rect 0.5,15,0,5 --out " + b.string()).code, 0);
  for (const char* ext : {".csv", ".json", "_plot.csv"}) {
    const auto x = slurp(a.string() + ext);
    EXPECT_FALSE(x.empty());
    EXPECT_EQ(x, slurp(b.string() + ext)) << ext;
  }
  const auto j = nlohmann::json::parse(slurp(a.string() + ".json"));
  EXPECT_EQ(j["count"].get<int>(), static_cast<int>(j["zeros"].size()));
  EXPECT_EQ(j["rect"].size(), 4u);
}

TEST(Cli, AsymptoticsFromSpectrumFile) {
  const auto base = scratch() / "asym";
  ASSERT_EQ(run("spectrum --profile colton_example --rect 0.5,30,0,6 --out " + base.string()).code, 0);
  const auto r = run("asymptotics --json --profile colton_example --n-first 3 --n-last 7 --spectrum " +
                     base.string() + ".csv --out " + base.string());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["all_matched"].get<bool>());
  EXPECT_EQ(j["pairs"].get<int>(), 10);
  const auto csv = slurp(base.string() + "_match.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,branch,re_pred,im_pred,re_comp,im_comp,abs_residual");
}

TEST(Cli, AsymptoticsRegimeMismatchExitsThree) {
  const auto base = scratch() / "step";
  ASSERT_EQ(run("spectrum --profile smooth_step --rect 0.5,12,0,5 --out " + base.string()).code, 0);
  EXPECT_EQ(run("asymptotics --profile colton_example --spectrum " + base.string() + ".json").code,
            3);
}

TEST(Cli, KernelCheck) {
  const auto grid = scratch() / "kernel.csv";
  const auto r = run("kernel-check --profile colton_example --out " + grid.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS diagonal_residual"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(slurp(grid).substr(0, 6), "x,t,K\n");
}

TEST(Cli, InverseCheck) {
  const auto r = run("inverse-check --profile colton_example --samples 4 --b 0.6");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(run("inverse-check --profile smooth_step --samples 2").code, 3);

  const fs::path s = scratch() / "scenario.json";
  std::ofstream(s) << R"({"q":"colton_example",
    "q_tilde":{"base":"colton_example","bump":{"center":0.2,"half_width":0.2,"height":0.5}},
    "agree_from":1.0493061443340548,"b":0.3,"alpha":1.5})";
  EXPECT_EQ(run("inverse-check --samples 3 --scenario " + s.string()).code, 0);
  std::ofstream(s) << R"({"q":"colton_example",
    "q_tilde":{"base":"colton_example","bump":{"center":1.0,"half_width":0.2,"height":0.5}}})";
  EXPECT_EQ(run("inverse-check --samples 3 --scenario " + s.string()).code, 2);
}
