#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MFCERT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mfcert_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

const std::string kConfigs = MFCERT_CONFIG_DIR;

}  // namespace

TEST(Cli, SmokeRunWritesOutputs) {
  const fs::path out = scratch("smoke");
  ASSERT_EQ(run_cli("run " + kConfigs + "/smoke.cfg --out-dir " + out.string()), 0);
  for (const char* f : {"trajectory.csv", "margins.csv", "summary.json", "config.txt", "plots/alpha.dat",
                        "plots/fidelity_k1.dat", "plots/trace_k2.dat"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  EXPECT_NE(slurp(out / "summary.json").find("\"passed\": true"), std::string::npos);
}

TEST(Cli, SameSeedGivesIdenticalCsv) {
  const fs::path a = scratch("repro_a"), b = scratch("repro_b");
  ASSERT_EQ(run_cli("run smoke --seed 5 --out-dir " + a.string()), 0);
  ASSERT_EQ(run_cli("run smoke --seed 5 --out-dir " + b.string()), 0);
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  EXPECT_EQ(slurp(a / "margins.csv"), slurp(b / "margins.csv"));
}

TEST(Cli, OverridesReachTheConfig) {
  const fs::path out = scratch("override");
  ASSERT_EQ(run_cli("run smoke --dt 0.01 --t-final 0.05 --k 1 --tol 1e-7 --out-dir " + out.string()), 0);
  const std::string cfg = slurp(out / "config.txt");
  EXPECT_NE(cfg.find("dt = 0.01"), std::string::npos);
  EXPECT_NE(cfg.find("t_final = 0.050000000000000003"), std::string::npos);
  EXPECT_NE(cfg.find("k = 1\n"), std::string::npos);
  EXPECT_NE(cfg.find("tol = 9.9999999999999995e-08"), std::string::npos);
}

TEST(Cli, SingleParticleIsUsageError) {
  const fs::path out = scratch("n1");
  EXPECT_EQ(run_cli("run " + kConfigs + "/invalid-n1.cfg --out-dir " + out.string()), 1);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("run"), 1);
  EXPECT_EQ(run_cli("run no-such-preset"), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
}

TEST(Cli, SweepRunsEveryConfig) {
  const fs::path dir = scratch("sweep_cfg");
  fs::create_directories(dir);
  for (const char* name : {"a", "b"}) {
    std::ofstream(dir / (std::string(name) + ".cfg")) << "L = 2\nN = 2\nt_final = 0.02\nseed = 3\n";
  }
  const fs::path out = scratch("sweep_out");
  ASSERT_EQ(run_cli("sweep '" + (dir / "*.cfg").string() + "' --jobs 2 --out-dir " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "a" / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(out / "b" / "trajectory.csv"));
  EXPECT_EQ(slurp(out / "a" / "trajectory.csv"), slurp(out / "b" / "trajectory.csv"));
}

TEST(Cli, CheckSubcommandPasses) { EXPECT_EQ(run_cli("check --seed 3"), 0); }
