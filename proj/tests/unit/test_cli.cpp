// SPDX-License-Identifier: Apache-2.0
// Runs the command line tool as a subprocess and checks exit codes and files.
#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("seqaug_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = "cd '" + dir_.string() + "' && '" SEQAUG_CLI_PATH "' " + args + " >out.txt 2>err.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  std::string read(const std::string& name) const {
    std::ifstream is(dir_ / name);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  }

  static std::string grid_rows(std::size_t rows, std::size_t cells) {
    std::string s;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t i = 0; i < cells; ++i)
        s += std::to_string(0.1 * static_cast<double>((i * 7 + r * 3) % 11)) + (i + 1 < cells ? "," : "\n");
    }
    return s;
  }

  fs::path dir_;
};

constexpr const char* kTinyGenerator =
    "--finest_side 8 --coarsest_side 8 --patch_side 3 --num_projections 8 --steps_per_scale 3";

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("smoke --no_such_flag 3"), 1);
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("augment"), 1);
  EXPECT_EQ(run("smoke --folds 1"), 1);
  EXPECT_EQ(run("augment --input grids.csv --optimizer lbfgs"), 1);
}

TEST_F(Cli, DataErrors) {
  write("grids.csv", "1,2,3\n");
  EXPECT_EQ(run(std::string("augment --input grids.csv ") + kTinyGenerator), 2);
  EXPECT_EQ(run("augment --input missing.csv"), 2);
  write("bad.csv", "1,2,3,0\n");
  EXPECT_EQ(run("evaluate --input bad.csv --feature_count 4 --task 2"), 2);
  write("scores.csv", "not,a,scores,file\n");
  EXPECT_EQ(run("report --scores scores.csv"), 2);
}

TEST_F(Cli, ConfigFileAndFlags) {
  write("grids.csv", grid_rows(2, 64));
  write("run.cfg", "# tiny\nfinest_side = 8\ncoarsest_side = 8\npatch_side = 3\nsteps_per_scale = 2\n"
                   "num_projections = 4\nout = gen\n");
  ASSERT_EQ(run("augment --config run.cfg --input grids.csv --count 3 --pgm"), 0) << read("err.txt");
  const auto csv = read("gen/synthetic.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_TRUE(fs::exists(dir_ / "gen" / "synthetic_5.pgm"));
  // Flags override the file.
  ASSERT_EQ(run("augment --config run.cfg --input grids.csv --out gen2"), 0) << read("err.txt");
  EXPECT_TRUE(fs::exists(dir_ / "gen2" / "synthetic.csv"));
  write("broken.cfg", "finest_side 8\n");
  EXPECT_EQ(run("augment --config broken.cfg --input grids.csv"), 1);
}

TEST_F(Cli, BoundsCheck) {
  write("targets.csv", grid_rows(3, 64));
  ASSERT_EQ(run(std::string("bounds-check --input targets.csv --out b ") + kTinyGenerator), 0)
      << read("err.txt");
  const auto table = read("b/bounds.csv");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 1 + 3 + 1);
  ASSERT_EQ(run("bounds-check --input targets.csv --generated targets.csv --patch_side 3 "
                "--coarsest_side 8 --finest_side 8 --out c"),
            0);
}

TEST_F(Cli, SmokeAndReport) {
  ASSERT_EQ(run(std::string("smoke --per_class 6 --out s --max_epochs 2 --hidden 4 ") + kTinyGenerator),
            0)
      << read("err.txt");
  for (const char* f : {"scores.csv", "summary.json", "accuracy.svg", "f1.svg", "confusion_C04P05.csv"})
    EXPECT_TRUE(fs::exists(dir_ / "s" / f)) << f;
  ASSERT_EQ(run("report --scores s/scores.csv --out r"), 0) << read("err.txt");
  EXPECT_EQ(read("r/scores.csv"), read("s/scores.csv"));
  EXPECT_NE(read("out.txt").find("C04P05"), std::string::npos);
}

} // namespace
