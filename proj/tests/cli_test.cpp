#include <cstdlib>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "locnoise/report.hpp"
#include "test_support.hpp"

namespace locnoise {
namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args, const fs::path& log) {
  const std::string command =
      std::string("\"") + LOCNOISE_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

TEST(CliTest, AttackWritesReports) {
  const fs::path dir = testing::scratch_dir("cli_attack");
  const int code = run_cli("attack --model random:1 --images synthetic:2:4 --shape 16x16x3 "
                           "--methods fgsm,pgd --gammas 1.0,0.5 --max-iters 30 --out \"" +
                               (dir / "out").string() + "\"",
                           dir / "log.txt");
  EXPECT_EQ(code, 0) << slurp(dir / "log.txt");
  const auto rows = read_report(dir / "out" / "report.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].method, Method::kFgsm);
  EXPECT_EQ(rows[3].gamma, 0.5);
  EXPECT_TRUE(fs::exists(dir / "out" / "details.csv"));
  EXPECT_NE(slurp(dir / "log.txt").find("method,gamma"), std::string::npos);
}

TEST(CliTest, WorkerCountDoesNotChangeTheReport) {
  const fs::path dir = testing::scratch_dir("cli_workers");
  const std::string common =
      "attack --model random:4 --images synthetic:5:4 --shape 16x16x3 --max-iters 20 -q --out ";
  ASSERT_EQ(run_cli(common + "\"" + (dir / "a").string() + "\" --workers 1", dir / "a.txt"), 0);
  ASSERT_EQ(run_cli(common + "\"" + (dir / "b").string() + "\" --workers 3", dir / "b.txt"), 0);
  EXPECT_EQ(slurp(dir / "a" / "report.csv"), slurp(dir / "b" / "report.csv"));
}

TEST(CliTest, WeightFileModel) {
  const fs::path dir = testing::scratch_dir("cli_weights");
  const std::string model = testing::data_path("fixture_net.locn").string();
  const int code = run_cli("attack --model \"" + model +
                               "\" --images synthetic:1:3 --methods pgd --gammas 1.0,0.25 -q --out \"" +
                               dir.string() + "\"",
                           dir / "log.txt");
  EXPECT_EQ(code, 0) << slurp(dir / "log.txt");
  EXPECT_EQ(read_report(dir / "report.csv").size(), 2u);
}

TEST(CliTest, MaskSubcommand) {
  const fs::path dir = testing::scratch_dir("cli_mask");
  ASSERT_EQ(run_cli("mask --height 4 --width 4 --gamma 0.25 --out \"" + (dir / "m.pgm").string() + "\"",
                    dir / "log.txt"),
            0);
  const std::string pgm = slurp(dir / "m.pgm");
  EXPECT_EQ(pgm.substr(0, 11), "P5\n4 4\n255\n");
}

TEST(CliTest, FatalErrorsExitWithOne) {
  const fs::path dir = testing::scratch_dir("cli_errors");
  const std::string out = " --out \"" + (dir / "out").string() + "\"";
  EXPECT_EQ(run_cli("attack --model random:1 --images synthetic:1:2 --methods bogus" + out, dir / "1.txt"), 1);
  EXPECT_EQ(run_cli("attack --model random:1 --images synthetic:1:2 --gammas 0" + out, dir / "2.txt"), 1);
  EXPECT_EQ(run_cli("attack --model \"" + (dir / "absent.locn").string() + "\" --images synthetic:1:2" + out,
                    dir / "3.txt"),
            1);
  EXPECT_NE(slurp(dir / "3.txt").find("error"), std::string::npos);
  EXPECT_EQ(run_cli("attack --model random:1 --images \"" + (dir / "nothing").string() + "\"" + out,
                    dir / "4.txt"),
            1);
  EXPECT_EQ(run_cli("attack --model random:1 --images synthetic:1:2 --epsilon -1" + out, dir / "5.txt"), 1);
  EXPECT_EQ(run_cli("attack --images synthetic:1:2" + out, dir / "6.txt"), 1);
  EXPECT_EQ(run_cli("frobnicate", dir / "7.txt"), 1);
  EXPECT_EQ(run_cli("mask --height 4 --width 4 --gamma 1.5 --out \"" + (dir / "m.pgm").string() + "\"",
                    dir / "8.txt"),
            1);
}

}  // namespace
}  // namespace locnoise
