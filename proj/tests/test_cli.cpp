// Copyright 2026 The emitrate Authors
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

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "emitrate/sweep.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(EMITRATE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  fs::path dir;
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("emitrate_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string in_dir(const std::string& name) const { return (dir / name).string(); }
};

TEST_F(Cli, MirrorSweepWritesCsv) {
  const auto r = run("mirror --r -1 --grid 0.01:3:31 --out " + in_dir("m.csv"));
  EXPECT_EQ(r.code, 0) << r.out;
  const auto text = slurp(dir / "m.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "d_over_lambda0,k0d,re_r,ratio_closed,ratio_quadrature,abs_diff,err_estimate,status");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 32);
}

TEST_F(Cli, CavitySinglePointNearNineteen) {
  const auto r = run("cavity --r 0.9 --k0d 1e-3 --out " + in_dir("c.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream in(slurp(dir / "c.csv"));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  const auto quad = std::stod(row.substr(row.find(',', row.find(',') + 1) + 1));
  EXPECT_NEAR(quad, 19.0, 0.01);
}

TEST_F(Cli, InvalidConfigExitsTwoWithoutFile) {
  EXPECT_EQ(run("cavity --grid 3:1:5 --out " + in_dir("bad.csv")).code, 2);
  EXPECT_EQ(run("mirror --method series --out " + in_dir("bad.csv")).code, 2);
  EXPECT_EQ(run("mirror --r banana --out " + in_dir("bad.csv")).code, 2);
  EXPECT_EQ(run("mirror --no-such-flag").code, 2);
  std::ofstream(dir / "broken.cfg") << "target = mirror\nwhat = 3\n";
  EXPECT_EQ(run("mirror --config " + in_dir("broken.cfg") + " --out " + in_dir("bad.csv")).code, 2);
  EXPECT_FALSE(fs::exists(dir / "bad.csv"));
}

TEST_F(Cli, DumpConfigRoundTrips) {
  const auto first = run("cavity --r 0.5 --grid 0.01:100:7:log --tol 1e-9 --dump-config");
  ASSERT_EQ(first.code, 0);
  std::ofstream(dir / "d.cfg") << first.out;
  const auto second = run("cavity --config " + in_dir("d.cfg") + " --dump-config");
  EXPECT_EQ(second.out, first.out);
  EXPECT_EQ(emitrate::parse_config(first.out), emitrate::parse_config(second.out));
}

TEST_F(Cli, FlagsOverrideConfigFile) {
  std::ofstream(dir / "f.cfg") << "r = 0.2\nk0d = 0.5\n";
  const auto r = run("cavity --config " + in_dir("f.cfg") + " --r 0.4 --dump-config");
  const auto cfg = emitrate::parse_config(r.out);
  EXPECT_EQ(cfg.r, 0.4);
  EXPECT_EQ(cfg.k0d, 0.5);
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  const std::string cmd = "EMITRATE_OUT_DIR=" + dir.string() + " " + EMITRATE_CLI_PATH + " subwavelength --r 0.5 --k0d 0.1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(dir / "subwavelength.csv"));
}

TEST_F(Cli, RepeatedRunsGiveIdenticalBytes) {
  const std::string args = "lindblad --n-traj 500 --seed 11 --grid 0:4:21 --out ";
  ASSERT_EQ(run(args + in_dir("a.csv")).code, 0);
  ASSERT_EQ(run(args + in_dir("b.csv")).code, 0);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
}

TEST_F(Cli, FigureWritesCurvesAndManifest) {
  const auto r = run("figure mirror_dielectric --quick --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir / "mirror_dielectric_manifest.csv"));
  EXPECT_TRUE(fs::exists(dir / "mirror_dielectric_rm1.csv"));
  EXPECT_TRUE(fs::exists(dir / "mirror_dielectric_rm0p25.csv"));
  EXPECT_EQ(run("figure fig99 --out " + dir.string()).code, 2);
}

TEST_F(Cli, QuickValidateIsFastAndReports) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run("validate --quick");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 30.0);
  EXPECT_TRUE(r.code == 0 || r.code == 1) << r.code;
  EXPECT_NE(r.out.find("mirror_oracle_equivalence"), std::string::npos);
  EXPECT_EQ(r.code == 0, r.out.find("FAIL ") == std::string::npos);
}

TEST_F(Cli, InjectedKernelFaultIsCaught) {
  const auto r = run("validate --quick --inject-kernel-fault");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL mirror_oracle_equivalence"), std::string::npos);
  EXPECT_NE(r.out.find("FAIL cavity_route_equivalence"), std::string::npos);
}

}  // namespace
