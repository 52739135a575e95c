#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

#include "nlsurr/io.hpp"

namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nlsurr_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string("\"") + NLSURR_CLI_PATH + "\" " + args + " > \"" +
                            (dir_ / "stdout.txt").string() + "\" 2> \"" +
                            (dir_ / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  }
  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }

  fs::path dir_;
};

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_F(CliTest, GenerateShape) {
  ASSERT_EQ(run("generate --system logistic --L 32 --N 4 --seed 1 --out " + out("g")), 0);
  const std::string text = nlsurr::read_text(dir_ / "g/realizations.csv");
  EXPECT_EQ(count_lines(text), 4u);
  EXPECT_EQ(count_fields(text.substr(0, text.find('\n'))), 32u);
  EXPECT_TRUE(fs::exists(dir_ / "g/config.json"));
  EXPECT_TRUE(fs::exists(dir_ / "g/realizations.json"));
}

TEST_F(CliTest, UnknownSystemFails) {
  EXPECT_NE(run("generate --system bogus --out " + out("x")), 0);
  EXPECT_NE(nlsurr::read_text(dir_ / "stderr.txt").find("bogus"), std::string::npos);
}

TEST_F(CliTest, InvalidLengthIsConfigError) {
  EXPECT_EQ(run("generate --L 0 --out " + out("x")), 2);
}

TEST_F(CliTest, RerunIsByteIdentical) {
  ASSERT_EQ(run("generate --system henon --L 16 --N 3 --seed 5 --out " + out("a")), 0);
  ASSERT_EQ(run("generate --system henon --L 16 --N 3 --seed 5 --out " + out("b")), 0);
  EXPECT_EQ(nlsurr::read_text(dir_ / "a/realizations.csv"),
            nlsurr::read_text(dir_ / "b/realizations.csv"));
}

TEST_F(CliTest, SubcommandChain) {
  ASSERT_EQ(run("generate --system logistic --L 16 --N 12 --out " + out("g")), 0);
  ASSERT_EQ(run("surrogate --input " + out("g/realizations.csv") + " --out " + out("s")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "s/surrogates.csv"));
  ASSERT_EQ(run("dataset --input " + out("g/realizations.csv") + " --out " + out("d")), 0);
  const std::string ds = nlsurr::read_text(dir_ / "d/dataset.csv");
  EXPECT_EQ(count_lines(ds), 25u);
  ASSERT_EQ(run("train --input " + out("d/dataset.csv") + " --epochs 3 --hidden 2 --out " + out("t")),
            0);
  EXPECT_EQ(count_lines(nlsurr::read_text(dir_ / "t/report.csv")), 4u);
  ASSERT_EQ(run("report --input " + out("t/report.csv")), 0);
  const auto verdict = nlohmann::json::parse(nlsurr::read_text(dir_ / "stdout.txt"));
  EXPECT_TRUE(verdict.contains("p_value"));
}

TEST_F(CliTest, FlagOverridesConfigFile) {
  nlsurr::write_text(dir_ / "cfg.json", R"({"L": 20, "N": 5, "system": "henon"})");
  ASSERT_EQ(run("generate --config " + out("cfg.json") + " --L 24 --out " + out("g")), 0);
  const auto frozen = nlohmann::json::parse(nlsurr::read_text(dir_ / "g/config.json"));
  EXPECT_EQ(frozen["L"], 24);
  EXPECT_EQ(frozen["N"], 5);
  EXPECT_EQ(frozen["system"], "henon");
  const std::string text = nlsurr::read_text(dir_ / "g/realizations.csv");
  EXPECT_EQ(count_lines(text), 5u);
  EXPECT_EQ(count_fields(text.substr(0, text.find('\n'))), 24u);
}

TEST_F(CliTest, PipelineWritesVerdict) {
  ASSERT_EQ(run("pipeline --system logistic --L 16 --N 12 --epochs 2 --hidden 2 --out " +
                out("p")),
            0);
  const auto v = nlohmann::json::parse(nlsurr::read_text(dir_ / "p/verdict.json"));
  EXPECT_EQ(v["system"], "logistic");
}
