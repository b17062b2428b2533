#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cwl/cli.hpp"

using cwl::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const Result& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, PmfJsonSchema) {
  const auto r = invoke({"pmf", "--M", "2", "--eps", "1e-8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_EQ(j["M"], 2);
  ASSERT_EQ(j["pmf"].size(), 5u);
  const char* rounded[] = {"0.21", "6.59", "43.00", "50.19", "-"};
  for (int i = 0; i < 5; ++i) EXPECT_EQ(j["pmf"][i]["rounded_percent"], rounded[i]);
  EXPECT_TRUE(j["pmf"][4]["exact_zero"].get<bool>());
  EXPECT_FALSE(j["pmf"][4]["zero_reason"].get<std::string>().empty());
  for (const auto& row : j["pmf"]) {
    EXPECT_LE(std::stod(row["lo"].get<std::string>()), std::stod(row["hi"].get<std::string>()));
  }
}

TEST(Cli, PmfCsvColumnOrder) {
  const auto r = invoke({"pmf", "--M", "1", "--eps", "1e-10", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  std::istringstream is(r.out);
  std::string header, row0, row1;
  std::getline(is, header);
  std::getline(is, row0);
  std::getline(is, row1);
  EXPECT_EQ(header, "r,lo,hi,exact_zero,rounded_percent");
  EXPECT_EQ(row0.substr(0, 2), "0,");
  EXPECT_NE(row1.find(",60.79"), std::string::npos);
}

TEST(Cli, ConstantsContainKnownValues) {
  const auto j = parse(invoke({"constants", "--eps", "1e-6"}));
  auto inside = [&](const char* key, double x) {
    return std::stod(j[key]["lo"].get<std::string>()) <= x && x <= std::stod(j[key]["hi"].get<std::string>());
  };
  EXPECT_TRUE(inside("inv_zeta2", 0.6079271018540266));
  EXPECT_TRUE(inside("feller_tornier", 0.3226340989392447));
  EXPECT_TRUE(inside("inv_zeta2_f", 1.884261780923862));
}

TEST(Cli, CorrMinimum) {
  const auto j = parse(invoke({"corr", "--N", "16"}));
  EXPECT_EQ(j["grid"].size(), 256u);
  EXPECT_LE(std::stod(j["min"]["lo"].get<std::string>()), -0.19694);
  EXPECT_GE(std::stod(j["min"]["hi"].get<std::string>()), -0.19695);
}

TEST(Cli, InvisibleWindow) {
  const auto j = parse(invoke({"invisible", "--M", "2"}));
  EXPECT_EQ(j["z_direct"], 0);
  EXPECT_EQ(j["z_mobius"], 0);
  EXPECT_EQ(j["modulus"], "210");
}

TEST(Cli, VerifySuitesPass) {
  EXPECT_EQ(invoke({"verify", "--suite", "core", "--M", "3", "--n", "2000"}).code, 0);
  EXPECT_EQ(invoke({"verify", "--suite", "cesaro", "--limit", "60"}).code, 0);
  EXPECT_EQ(invoke({"verify", "--suite", "waring"}).code, 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"nonsense"}).code, 2);
  EXPECT_EQ(invoke({"pmf", "--M", "0"}).code, 2);
  EXPECT_EQ(invoke({"pmf", "--eps", "-1"}).code, 2);
  EXPECT_EQ(invoke({"pmf", "--threads", "0"}).code, 2);
  EXPECT_EQ(invoke({"pmf", "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--suite", "bogus"}).code, 2);
  const auto r = invoke({"pmf", "--M", "3", "--eps", "1e-300"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("achieved width"), std::string::npos);
  EXPECT_EQ(invoke({"pmf", "--M", "40"}).code, 3);
}

TEST(Cli, CesaroCommand) {
  const auto r = invoke({"cesaro", "--f", "upsilon", "--A", "37", "--B", "50"});
  ASSERT_EQ(r.code, 0);
  const auto j = parse(r);
  EXPECT_EQ(j["cesaro"], j["direct"]);
  EXPECT_EQ(invoke({"cesaro", "--f", "sigma"}).code, 2);
}

TEST(Cli, EmpiricalReport) {
  const auto j = parse(invoke({"empirical", "--report", "dirichlet-density", "--grid", "100,1000"}));
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_TRUE(j.contains("fitted_constant"));
  EXPECT_EQ(invoke({"empirical", "--report", "nope"}).code, 2);
}

TEST(Cli, OutFile) {
  const std::string path = ::testing::TempDir() + "cwl_cli_out.json";
  ASSERT_EQ(invoke({"constants", "--out", path}).code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), invoke({"constants"}).out);
  std::remove(path.c_str());
}

TEST(CliProperty, ThreadCountDoesNotChangeBytes) {
  const std::vector<std::vector<std::string>> commands{
      {"pmf", "--M", "4"}, {"moments", "--M", "3"}, {"avg-corr", "--N", "50"}, {"empirical", "--M", "2", "--n", "300"}};
  for (const auto& cmd : commands) {
    auto one = cmd, eight = cmd;
    one.insert(one.end(), {"--threads", "1"});
    eight.insert(eight.end(), {"--threads", "8"});
    const auto a = invoke(one), b = invoke(eight);
    ASSERT_EQ(a.code, 0) << cmd[0] << a.err;
    EXPECT_EQ(a.out, b.out) << cmd[0];
  }
}

TEST(Cli, ThreadsFromEnvironment) {
  setenv("CWL_THREADS", "4", 1);
  EXPECT_EQ(invoke({"pmf", "--M", "2"}).code, 0);
  setenv("CWL_THREADS", "zero", 1);
  EXPECT_EQ(invoke({"pmf", "--M", "2"}).code, 2);
  EXPECT_EQ(invoke({"pmf", "--M", "2", "--threads", "2"}).code, 0);  // flag wins
  unsetenv("CWL_THREADS");
}
