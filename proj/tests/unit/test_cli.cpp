// Copyright 2026 The qtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(QTHERM_SOURCE_DIR) / "configs";

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + QTHERM_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qtherm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string cfg(const char* name) const { return "\"" + (kConfigs / name).string() + "\""; }
  std::string out(const char* sub) const { return "\"" + (dir_ / sub).string() + "\""; }
  fs::path dir_;
};

TEST_F(Cli, ValidateExitCodes) {
  EXPECT_EQ(run_cli("validate --config " + cfg("oscillatory_iii.ini")), 0);
  EXPECT_EQ(run_cli("validate --config " + cfg("oscillatory_iii.ini") + " --set dissipator.f=0.7"), 1);
  EXPECT_EQ(run_cli("validate --config " + cfg("oscillatory_iii.ini") + " --set drive.nope=1"), 1);
  EXPECT_EQ(run_cli("validate --config " + out("missing.ini")), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
  const fs::path bad = dir_ / "bad.ini";
  std::ofstream(bad) << "[drive]\nb_dc = two\n";
  EXPECT_EQ(run_cli("validate --config \"" + bad.string() + "\""), 1);
}

TEST_F(Cli, RunWritesArtifactsDeterministically) {
  const std::string common = "run --config " + cfg("oscillatory_iii.ini") +
                             " --trajectories 20 --seed 5 --set grid.t1=1.5";
  ASSERT_EQ(run_cli(common + " --out " + out("a")), 0);
  ASSERT_EQ(run_cli(common + " --set run.workers=1 --out " + out("b")), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "result.csv"), slurp(dir_ / "b" / "result.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "metadata.json"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "config.ini"));
  // The emitted config reproduces the run.
  ASSERT_EQ(run_cli("run --config \"" + (dir_ / "a" / "config.ini").string() + "\" --out " + out("c")), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "result.csv"), slurp(dir_ / "c" / "result.csv"));
}

TEST_F(Cli, VqsExportsParamsAndCircuits) {
  ASSERT_EQ(run_cli("run --config " + cfg("composite_iii.ini") +
                    " --trajectories 2 --set grid.t1=0.3 --export-params --dump-circuits --out " + out("v")),
            0);
  const std::string p = slurp(dir_ / "v" / "params" / "trajectory_000001.csv");
  EXPECT_EQ(p.substr(0, p.find('\n')), "t,alpha,theta_1,theta_2,theta_3,theta_4,theta_5,theta_6,theta_7,theta_8,theta_9");
  const std::string c = slurp(dir_ / "v" / "circuits.txt");
  EXPECT_NE(c.find("cx 0,1"), std::string::npos);
}

TEST_F(Cli, OracleAndSweep) {
  ASSERT_EQ(run_cli("oracle --config " + cfg("oscillatory_i.ini") + " --out " + out("o")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "oracle.csv"));
  ASSERT_EQ(run_cli("sweep-q --config " + cfg("oscillatory_iii.ini") +
                    " --set run.engine=oracle --q 0.5,1.5 --out " + out("s")),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "s" / "tau_q.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "s" / "q_0.5" / "result.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "s" / "sweep_summary.csv"));
}

TEST_F(Cli, RuntimeFailureExitsTwo) {
  // A single coarse step with a stiff field trips the instability check.
  EXPECT_EQ(run_cli("oracle --config " + cfg("oscillatory_iii.ini") +
                    " --set drive.b_dc=400 --set numerics.lme_substeps=1 --set grid.dt=1.5 --out " + out("x")),
            2);
}

}  // namespace
