#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef TRAPNORM_CLI_PATH
#error "TRAPNORM_CLI_PATH must name the built command-line tool"
#endif

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  std::string cmd = std::string(TRAPNORM_CLI_PATH) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 512> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string field(const std::string& out, const std::string& key) {
  std::istringstream is(out);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind(key + " ", 0) == 0) {
      std::istringstream ls(line.substr(key.size()));
      std::string v;
      ls >> v;
      return v;
    }
  }
  return "";
}

}  // namespace

TEST(Cli, TrapezoidOnTwoIntervals) {
  CliRun r = run("integrate --model In:1 --M 2 --rule trap");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(field(r.out, "value").substr(0, 6), "0.6250");
  EXPECT_EQ(field(r.out, "evals"), "3");
}

TEST(Cli, SimpsonAgainstExactRational) {
  CliRun r = run("integrate --model In:4 --M 64 --rule simpson");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("128/315"), std::string::npos);
  EXPECT_GT(std::stod(field(r.out, "P_obt")), 9.0);
}

TEST(Cli, GaussianPlanAtFiftyDigits) {
  CliRun r = run("integrate --model gauss --digits 50");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(field(r.out, "evals"), "37");
  EXPECT_GE(std::stod(field(r.out, "P_obt")), 50.0);
  EXPECT_EQ(field(r.out, "value").substr(0, 22), "1.77245385090551602729");
}

TEST(Cli, NormalizeHarmonicGroundState) {
  CliRun r = run("normalize --potential x2n:1 --state 0 --digits 20 --cache \"\"");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(field(r.out, "integral"), "1.7724538509055160273");
  EXPECT_EQ(field(r.out, "norm_const"), "0.75112554446494248286");
}

TEST(Cli, BenchWritesCsvHeader) {
  auto path = std::filesystem::temp_directory_path() / "trapnorm_cli_fig1.csv";
  std::filesystem::remove(path);
  CliRun r = run("bench --suite fig1 --out " + path.string());
  ASSERT_EQ(r.status, 0) << r.out;
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "suite,case,digits,h,M,predicted_log10_error,measured_log10_error,evaluations,wall_time_ms,value");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_GT(rows, 10);
  std::filesystem::remove(path);
}

TEST(Cli, ErrorsExitNonZero) {
  EXPECT_EQ(run("integrate --model foo").status, 1);
  EXPECT_NE(run("integrate").status, 0);
  EXPECT_EQ(run("normalize --potential x2n:0 --digits 20 --cache \"\"").status, 1);
  EXPECT_EQ(run("integrate --model gauss --digits 2").status, 1);
}
