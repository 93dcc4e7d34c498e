#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "opnorm/cli.hpp"
#include "test_support.hpp"

namespace opnorm {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

CliRun Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "opnorm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Golden(const std::string& name) {
  return (fs::path(OPNORM_SOURCE_DIR) / "tests" / "golden" / name).string();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("opnorm_cli_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, ComputeMatchesGoldenReport) {
  const CliRun r = Invoke({"compute", Golden("two_by_two.mtx"), "--p", "2.5", "--q", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json got = r.report();
  std::ifstream in(Golden("compute_two_by_two.json"));
  json want = json::parse(in);
  for (const char* volatile_key : {"wall_time_s", "command", "input"}) {
    EXPECT_TRUE(got.contains(volatile_key));
    got.erase(volatile_key);
    want.erase(volatile_key);
  }
  EXPECT_EQ(got, want);
}

TEST_F(CliTest, ComputeSpectralValue) {
  const std::string m = Write("a.tsv", "1\t2\n3\t1\n");
  const CliRun r = Invoke({"compute", m, "--p", "2", "--q", "2", "--emit-vector"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = r.report();
  EXPECT_NEAR(j["estimate"].get<double>(), testing::SigmaMax2x2(1, 2, 3, 1), 1e-8);
  EXPECT_LE(j["bounds"]["lower"].get<double>(), j["estimate"].get<double>());
  EXPECT_EQ(j["maximizer"].size(), 2u);
  EXPECT_TRUE(j["converged"].get<bool>());
}

TEST_F(CliTest, ComputeExitCodes) {
  const std::string m = Write("a.tsv", "1\t2\n3\t1\n");
  EXPECT_EQ(Invoke({"compute", m, "--p", "2", "--q", "2", "--max-iter", "1"}).code,
            kExitNotConverged);
  const CliRun swapped = Invoke({"compute", m, "--p", "3", "--q", "2"});
  EXPECT_EQ(swapped.code, kExitInvalid);
  EXPECT_NE(swapped.err.find("oracle"), std::string::npos);
  EXPECT_EQ(Invoke({"compute", m, "--p", "2", "--q", "inf"}).code, kExitInvalid);
  const std::string neg = Write("neg.tsv", "1\t-2\n3\t1\n");
  EXPECT_EQ(Invoke({"compute", neg, "--p", "2", "--q", "2"}).code, kExitInvalid);
  const std::string ragged = Write("bad.tsv", "1\t2\n3\n");
  const CliRun bad = Invoke({"compute", ragged, "--p", "2", "--q", "2"});
  EXPECT_EQ(bad.code, kExitInvalid);
  EXPECT_NE(bad.err.find("2"), std::string::npos);
  EXPECT_EQ(Invoke({"compute", (dir_ / "missing.mtx").string()}).code, kExitInvalid);
  EXPECT_EQ(Invoke({"nonsense"}).code, kExitInvalid);
}

TEST_F(CliTest, OracleModes) {
  const std::string m = Write("a.tsv", "1\t2\n3\t1\n");
  const CliRun brute = Invoke({"oracle", m, "--p", "3", "--q", "1.5"});
  ASSERT_EQ(brute.code, kExitOk) << brute.err;
  const json b = brute.report();
  EXPECT_NEAR(b["estimate"].get<double>(),
              testing::TwoColumnNorm(DenseMatrix{{1, 2}, {3, 1}}, 3, 1.5), 1e-7);
  EXPECT_EQ(b["method"], "multistart");

  const std::string cols = Write("cols.tsv", "1\t0\t1\n0\t1\t1\n");
  const CliRun lv = Invoke({"oracle", cols, "--inf-to-p", "--p", "3"});
  ASSERT_EQ(lv.code, kExitOk) << lv.err;
  EXPECT_NEAR(lv.report()["estimate"].get<double>(), std::cbrt(16.0), 1e-12);
  EXPECT_TRUE(lv.report()["exhaustive"].get<bool>());

  const CliRun base = Invoke({"oracle", m, "--baseline", "--p", "2", "--q", "2"});
  ASSERT_EQ(base.code, kExitOk);
  const json j = base.report();
  EXPECT_NEAR(j["approximation_ratio"].get<double>(), 1.0, 1e-9);
}

TEST_F(CliTest, GenerateAndVerifyRoundTrips) {
  const std::string out = dir_.string();
  struct Case {
    std::vector<std::string> args;
    std::string stem;
  };
  const std::vector<Case> cases = {
      {{"gen", "gadget", "--builtin", "cycle4", "--C", "10", "--p", "3", "--out", out}, "gadget"},
      {{"gen", "tensor", "--builtin", "complete2", "--C", "1", "--p", "3", "--k", "2",
        "--out", out},
       "tensor"},
      {{"gen", "lift", "--builtin", "complete2", "--C", "1", "--p", "3", "--q", "4",
        "--out", out},
       "lift"},
  };
  for (const auto& c : cases) {
    const CliRun g = Invoke(c.args);
    ASSERT_EQ(g.code, kExitOk) << g.err;
    const fs::path manifest = dir_ / (c.stem + ".json");
    ASSERT_TRUE(fs::exists(manifest));
    ASSERT_TRUE(fs::exists(dir_ / (c.stem + ".mtx")));
    const CliRun v = Invoke({"verify", manifest.string()});
    EXPECT_EQ(v.code, kExitOk) << v.out << v.err;
    EXPECT_TRUE(v.report()["passed"].get<bool>());
  }
  std::ifstream in(dir_ / "gadget.json");
  EXPECT_DOUBLE_EQ(json::parse(in)["expected_ratio_at_witness"].get<double>(), 84.0);
  std::ifstream tin(dir_ / "tensor.json");
  EXPECT_NEAR(json::parse(tin)["expected_ratio_at_witness"].get<double>(), 36.0, 1e-9);
  std::ifstream lin(dir_ / "lift.json");
  const json lift = json::parse(lin);
  EXPECT_NEAR(lift["completeness_factor"].get<double>(), std::pow(4.0, 1.0 / 12), 1e-12);
}

TEST_F(CliTest, TamperedManifestFails) {
  ASSERT_EQ(Invoke({"gen", "gadget", "--builtin", "cycle4", "--C", "10", "--p", "3",
                    "--out", dir_.string()})
                .code,
            kExitOk);
  const fs::path manifest = dir_ / "gadget.json";
  json j;
  {
    std::ifstream in(manifest);
    j = json::parse(in);
  }
  j["expected_ratio_at_witness"] = 85.0;
  std::ofstream(manifest) << j.dump(2);
  const CliRun v = Invoke({"verify", manifest.string()});
  EXPECT_EQ(v.code, kExitCheckFailed);
  EXPECT_FALSE(v.report()["passed"].get<bool>());
  EXPECT_EQ(Invoke({"verify", (dir_ / "nope.json").string()}).code, kExitInvalid);
}

TEST_F(CliTest, BenchReportsScale) {
  const CliRun r = Invoke({"bench", "--sizes", "4,8", "--repeats", "2", "--p", "2.5", "--q", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["runs"].size(), 4u);
  EXPECT_GT(j["max_c"].get<double>(), 0.0);
}

}  // namespace
}  // namespace opnorm
