// Copyright 2026 The marginnn Authors
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

#include <cstdlib>
#include <filesystem>
#include <string>

#include "gtest/gtest.h"
#include "marginnn/io.hpp"

#ifndef MARGINNN_CLI
#error "MARGINNN_CLI must point at the marginnn executable"
#endif

namespace marginnn {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("marginnn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { io::write_file(path(name), text); }
  std::string read(const std::string& name) const { return io::read_file(path(name)); }

  // Runs the CLI with stdout to `out` and stderr to `err`; returns the exit code.
  int run(const std::string& args, const std::string& out = "stdout.txt",
          const std::string& err = "stderr.txt") const {
    const std::string cmd = std::string("\"") + MARGINNN_CLI + "\" " + args + " > \"" + path(out) +
                            "\" 2> \"" + path(err) + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

const char* kToy = "x,label\n0.0,1\n0.1,1\n0.9,-1\n1.0,-1\n";

TEST_F(CliTest, FitSeparableToy) {
  write("toy.csv", kToy);
  const std::string args = "fit " + path("toy.csv") + " -m " + path("m.json") + " -t " + path("t.csv") +
                           " --c-dim 1e-10";
  ASSERT_EQ(run(args), 0) << read("stderr.txt");
  const std::string out = read("stdout.txt");
  EXPECT_NE(out.find("gamma* = 0.80000000000000004"), std::string::npos) << out;
  EXPECT_NE(out.find("removed_count = 0"), std::string::npos) << out;
  const auto model = io::parse_model_json(read("m.json"));
  EXPECT_EQ(model.removed_count, 0u);
  EXPECT_EQ(model.subsample.size(), 4u);
  EXPECT_EQ(read("t.csv").rfind("gamma,removed,empirical,penalty,objective,chosen\r\n", 0), 0u);
}

TEST_F(CliTest, FitRerunIsByteIdentical) {
  io::write_file(path("s.csv"), "");
  ASSERT_EQ(run("sample -n 150 --seed 3 -o " + path("s.csv")), 0);
  for (const char* tag : {"a", "b"}) {
    ASSERT_EQ(run("fit " + path("s.csv") + " --mode greedy -m " + path(std::string(tag) + ".json") +
                      " -t " + path(std::string(tag) + ".csv"),
                  std::string(tag) + ".out"),
              0);
  }
  EXPECT_EQ(read("a.json"), read("b.json"));
  EXPECT_EQ(read("a.csv"), read("b.csv"));
  EXPECT_EQ(read("a.out"), read("b.out"));
}

TEST_F(CliTest, InputErrorsExitTwo) {
  write("bad.csv", "0.0,1\n0.5,2\n");
  EXPECT_EQ(run("fit " + path("bad.csv") + " -m " + path("m.json") + " -t " + path("t.csv")), 2);
  EXPECT_NE(read("stderr.txt").find("label"), std::string::npos);
  write("one.csv", "0.0,1\n0.5,1\n");
  EXPECT_EQ(run("fit " + path("one.csv") + " -m " + path("m.json") + " -t " + path("t.csv")), 2);
  EXPECT_EQ(run("fit " + path("missing.csv")), 2);
  EXPECT_EQ(run("fit " + path("one.csv") + " --mode fastest"), 2);
  EXPECT_EQ(run("nosuchcommand"), 2);
  EXPECT_EQ(run(""), 2);
}

TEST_F(CliTest, PredictRetainedPointsAndEmptyFile) {
  write("toy.csv", kToy);
  ASSERT_EQ(run("fit " + path("toy.csv") + " -m " + path("m.json") + " -t " + path("t.csv") +
                " --c-dim 1e-10"),
            0);
  write("pts.csv", "x\n0.0\n0.1\n0.9\n1.0\n");
  ASSERT_EQ(run("predict " + path("m.json") + " " + path("pts.csv")), 0) << read("stderr.txt");
  EXPECT_EQ(read("stdout.txt"),
            "index,label,f_value\r\n0,1,0.80000000000000004\r\n1,1,0.80000000000000004\r\n"
            "2,-1,-0.80000000000000004\r\n3,-1,-0.80000000000000004\r\n");
  write("empty.csv", "");
  EXPECT_EQ(run("predict " + path("m.json") + " " + path("empty.csv")), 0);
  EXPECT_EQ(read("stdout.txt"), "");
  write("wide.csv", "0.0,1.0\n");
  EXPECT_EQ(run("predict " + path("m.json") + " " + path("wide.csv")), 2);
}

TEST_F(CliTest, PredictPlusOnlyModel) {
  write("m.json", R"({"gamma": 1, "scale": 1, "exact": true, "points": [[[0.0], 1], [[0.5], 1]],
                      "removed_count": 0, "n": 2})");
  write("pts.csv", "-3\n0.2\n7\n");
  ASSERT_EQ(run("predict " + path("m.json") + " " + path("pts.csv") + " -o " + path("p.csv")), 0);
  EXPECT_EQ(read("p.csv"), "index,label,f_value\r\n0,1,\r\n1,1,\r\n2,1,\r\n");
}

TEST_F(CliTest, PredictEmptyModelExitsThree) {
  write("m.json", R"({"gamma": 1, "scale": 1, "exact": false, "dim": 1, "points": [],
                      "removed_count": 2, "n": 2})");
  write("pts.csv", "0.5\n");
  EXPECT_EQ(run("predict " + path("m.json") + " " + path("pts.csv")), 3);
}

TEST_F(CliTest, Gridcheck) {
  EXPECT_EQ(run("gridcheck -n 1e8 --ddim 2 --levels 50"), 0);
  const std::string out = read("stdout.txt");
  EXPECT_NE(out.find("PASS"), std::string::npos);
  EXPECT_EQ(run("gridcheck -n 1e8 --levels 1"), 0);
  EXPECT_EQ(run("gridcheck -n 0.5"), 2);
  EXPECT_NE(read("stderr.txt").find("n_dim > 1"), std::string::npos);
}

TEST_F(CliTest, SampleIsReproducible) {
  ASSERT_EQ(run("sample -n 50 --seed 9 --oracles", "a.csv", "a.err"), 0);
  ASSERT_EQ(run("sample -n 50 --seed 9", "b.csv"), 0);
  EXPECT_EQ(read("a.csv"), read("b.csv"));
  EXPECT_NE(read("a.err").find("bayes_risk = 0.181690114"), std::string::npos);
  EXPECT_EQ(io::parse_sample_csv(read("a.csv")).size(), 50u);
}

TEST_F(CliTest, ExperimentOneRow) {
  ASSERT_EQ(run("experiment -q --no-timing --methods plain-1nn --sizes 30 --trials 1 --test-size 100 -o " +
                path("r.csv")),
            0)
      << read("stderr.txt");
  const std::string text = read("r.csv");
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  EXPECT_EQ(lines, 2u);
  EXPECT_TRUE(fs::exists(path("r_summary.csv")));
  write("cfg.json", R"({"trials": 0})");
  EXPECT_EQ(run("experiment " + path("cfg.json")), 2);
}

}  // namespace
}  // namespace marginnn
