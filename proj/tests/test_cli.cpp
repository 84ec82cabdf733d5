#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(AMATCH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch(const std::string& name) { return fs::path(testing::TempDir()) / ("amatch_cli_" + name); }

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("verify --suite bogus"), 2);
  EXPECT_EQ(run("verify --suite group --max-p 17"), 2);
  EXPECT_EQ(run("verify --suite group --out /nonexistent/dir/r.json"), 2);
  EXPECT_EQ(run("witness nonsense"), 2);
  EXPECT_EQ(run("search fails-at-order --group z:0 --order 2"), 2);
  EXPECT_EQ(run("search lmp-counterexample --tower gf:2^4:1,0,1,0,1"), 2);
}

TEST(Cli, WitnessPreconditions) {
  EXPECT_EQ(run("witness qr --p 5"), 1);
  EXPECT_EQ(run("witness cycle --p 11 --k 2"), 2);
  EXPECT_EQ(run("witness linear --tower gf:5^4 --m 1"), 2);
}

TEST(Cli, QrRoundTripAndTamper) {
  const auto path = scratch("qr.json");
  ASSERT_EQ(run("witness qr --p 11 --out " + path.string()), 0);
  const auto j = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(j["generator"]["params"]["a"], 1);
  EXPECT_EQ(j["generator"]["params"]["b"], 5);
  EXPECT_EQ(run("check " + path.string()), 0);

  auto tampered = j;
  std::swap(tampered["f"][0][1], tampered["f"][1][1]);
  const auto bad = scratch("qr_tampered.json");
  spit(bad, tampered.dump());
  EXPECT_EQ(run("check " + bad.string()), 1);

  const auto text = slurp(path);
  const auto cut = scratch("qr_truncated.json");
  spit(cut, text.substr(0, text.size() / 2));
  EXPECT_EQ(run("check " + cut.string()), 2);
  EXPECT_EQ(run("check " + scratch("missing.json").string()), 2);
}

TEST(Cli, EveryWitnessKindRoundTrips) {
  const std::vector<std::string> cmds{"qr --p 13",       "cycle --p 11 --k 5",        "cycle --p 13 --k 3",
                                      "window --window 30", "window --group dyadic --window 30",
                                      "failure --group z:7 --order 3", "linear --tower gf:5^3 --m 1",
                                      "linear --p 5 --n 7 --m 2",      "transcendental --m 2"};
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const auto path = scratch("w" + std::to_string(i) + ".json");
    ASSERT_EQ(run("witness " + cmds[i] + " --out " + path.string()), 0) << cmds[i];
    EXPECT_EQ(run("check " + path.string()), 0) << cmds[i];
  }
}

TEST(Cli, CycleWitnessFamily) {
  const auto path = scratch("cycle.json");
  ASSERT_EQ(run("witness cycle --p 11 --k 5 --out " + path.string()), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(path))["generator"]["variant"], "odd");
}

TEST(Cli, SearchExitCodes) {
  const auto path = scratch("fail7.json");
  EXPECT_EQ(run("search fails-at-order --group z:7 --order 4 --out " + path.string()), 0);
  EXPECT_EQ(run("check " + path.string()), 0);
  EXPECT_EQ(run("search fails-at-order --group z:5 --order 3"), 1);
  EXPECT_EQ(run("search fails-at-order --group z:997 --order 400 --budget 10"), 3);
  EXPECT_EQ(run("search matching-property --group z:4 --order 3"), 0);
  EXPECT_EQ(run("search matching-property --group z:7"), 1);
  const auto lmp = scratch("lmp.json");
  EXPECT_EQ(run("search lmp-counterexample --tower gf:2^4 --out " + lmp.string()), 0);
  EXPECT_EQ(run("check " + lmp.string()), 0);
  EXPECT_EQ(run("search lmp-counterexample --tower gf:2^3"), 1);
  EXPECT_EQ(run("search lmp-counterexample --tower gf:3^4 --budget 0"), 3);
}

TEST(Cli, VerifyGroupAtSeven) {
  const auto path = scratch("report.json");
  ASSERT_EQ(run("verify --suite group --max-p 7 --out " + path.string()), 0);
  const auto j = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(j["overall"], "pass");
  EXPECT_EQ(j["max_p"], 7);
  EXPECT_FALSE(j["checks"][0].contains("elapsed_ms"));
  EXPECT_EQ(run("verify --suite linear"), 0);
}
