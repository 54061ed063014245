#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "fpp/io.hpp"

namespace {

const std::string kCli = FPP_CLI_PATH;
const std::string kData = FPP_DATA_DIR;

int run(const std::string& args, const std::string& out = "") {
  std::string cmd = kCli + " " + args;
  cmd += out.empty() ? " > /dev/null 2>&1" : " > " + out + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fpp_cli_" + name)).string();
}

fpp::Json read_json(const std::string& path) {
  std::ifstream in(path);
  return fpp::Json::parse(in);
}

}  // namespace

TEST(Cli, AnalyzePaw) {
  const std::string out = temp_path("paw.json");
  ASSERT_EQ(run("analyze --graph " + kData + "/graphs/paw.json --from v --to w", out), 0);
  const auto doc = read_json(out);
  EXPECT_EQ(doc["result"]["criterion"]["classification"], "POSITIVE");
  EXPECT_NEAR(doc["result"]["t_star"].get<double>(), 1.0310759384, 1e-9);
  std::filesystem::remove(out);
}

TEST(Cli, SameVertex) {
  const std::string out = temp_path("k2.json");
  ASSERT_EQ(run("analyze --graph " + kData + "/graphs/k2.json --from 0 --to 0", out), 0);
  EXPECT_EQ(read_json(out)["result"]["t_star"].get<double>(), 0.0);
  std::filesystem::remove(out);
}

TEST(Cli, DiagonalConstant) {
  const std::string out = temp_path("const.json");
  ASSERT_EQ(run("constants --diagonal --rho 1", out), 0);
  EXPECT_NEAR(read_json(out)["result"]["diagonal_constant"].get<double>(), 0.33137, 1e-5);
  std::filesystem::remove(out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("analyze --graph " + kData + "/graphs/k2.json --from 0 --to 7"), 2);
  EXPECT_EQ(run("analyze --graph /no/such/file.json --from 0 --to 1"), 2);
  EXPECT_EQ(run("simulate --graph " + kData + "/graphs/k2.json --from 0 --to 1 --weights exp:-1"), 2);
  EXPECT_EQ(run("analyze --graph " + kData + "/graphs/k2.json --from 0 --to 1 --format xml"), 2);
  // Intensities 1e4 and 1e-4 push the series order past its cap.
  EXPECT_EQ(run("analyze --graph " + kData + "/graphs/stiff.json --from a --to c"), 3);
}

TEST(Cli, SimulateIsReproducible) {
  const std::string a = temp_path("a.csv"), b = temp_path("b.csv");
  const std::string args = "simulate --graph " + kData +
                           "/graphs/k2.json --from 0 --to 1 --n 5 --replicas 20 --seed 3 --format csv";
  ASSERT_EQ(run(args, a), 0);
  ASSERT_EQ(run(args, b), 0);
  std::ifstream fa(a), fb(b);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().rfind("n,hamming_k,replica,time,geodesic_length\n", 0), 0u);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Cli, VerifySubset) {
  EXPECT_EQ(run("verify --only 1,2"), 0);
  EXPECT_EQ(run("verify --only 3"), 1);
}
