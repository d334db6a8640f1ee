#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lstmopt/results_io.hpp"

namespace {

namespace fs = std::filesystem;

fs::path scratch() {
  static const fs::path root = [] {
    const fs::path p = fs::temp_directory_path() / "lstmopt_cli_test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

int run(const std::string& args) {
  const std::string cmd = std::string(LSTMOPT_CLI_PATH) + " " + args + " >" +
                          (scratch() / "stdout.txt").string() + " 2>" +
                          (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string l; std::getline(in, l);) n += !l.empty();
  return n;
}

std::vector<std::string> column(const fs::path& csv, std::size_t index) {
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> out;
  while (std::getline(in, line)) {
    std::stringstream s(line);
    std::string field;
    for (std::size_t i = 0; i <= index; ++i) std::getline(s, field, ',');
    out.push_back(field);
  }
  return out;
}

const fs::path& small_dataset() {
  static const fs::path dir = [] {
    const fs::path d = scratch() / "small";
    EXPECT_EQ(run("gen --c 3 --f 100 --T 10 --n 40 --seed 3 --out " + d.string()), 0);
    return d;
  }();
  return dir;
}

TEST(CliGen, SplitsAndManifest) {
  const fs::path d = scratch() / "gen7";
  ASSERT_EQ(run("gen --c 3 --f 1000 --T 20 --n 100 --seed 7 --out " + d.string()), 0);
  EXPECT_EQ(lines(d / "train.jsonl"), 64u);
  EXPECT_EQ(lines(d / "val.jsonl"), 16u);
  EXPECT_EQ(lines(d / "test.jsonl"), 20u);
  ASSERT_TRUE(fs::exists(d / "meta.json"));
  const std::string manifest = slurp(d / "manifest.json");
  EXPECT_NE(manifest.find("\"command\": \"gen\""), std::string::npos);
  EXPECT_NE(manifest.find("train.jsonl"), std::string::npos);
  EXPECT_NE(manifest.find("fnv1a64:"), std::string::npos);
}

TEST(CliGen, RerunIsByteIdentical) {
  const fs::path a = scratch() / "rerun_a", b = scratch() / "rerun_b";
  ASSERT_EQ(run("gen --c 5 --f 100 --T 12 --n 30 --seed 9 --jobs 2 --out " + a.string()), 0);
  ASSERT_EQ(run("gen --c 5 --f 100 --T 12 --n 30 --seed 9 --out " + b.string()), 0);
  for (const char* f : {"meta.json", "train.jsonl", "val.jsonl", "test.jsonl"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(CliGen, UsageErrors) {
  EXPECT_EQ(run("gen --c 3 --f 100 --T 20 --n 5 --out " + (scratch() / "n5").string()), 2);
  EXPECT_EQ(run("gen --c 3 --T 20 --n 20 --preset huge --out " + (scratch() / "x").string()), 2);
  EXPECT_EQ(run("gen --bogus"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("--help"), 0);
}

TEST(CliGen, ConfigFileWithFlagOverride) {
  const fs::path cfg = scratch() / "gen.toml";
  std::ofstream(cfg) << "[gen]\nc = 5\nf = 100\nT = 8\nn = 20\nseed = 4\n";
  const fs::path d = scratch() / "from_config";
  ASSERT_EQ(run("--config " + cfg.string() + " gen --T 6 --out " + d.string()), 0);
  const std::string meta = slurp(d / "meta.json");
  EXPECT_NE(meta.find("\"T\": 6"), std::string::npos) << meta;
  EXPECT_NE(meta.find("\"c_ratio\": 5"), std::string::npos) << meta;
  EXPECT_NE(slurp(d / "manifest.json").find("T=6"), std::string::npos);
}

TEST(CliSolve, BnbAndDpAgree) {
  const fs::path bnb = scratch() / "solve_bnb", dp = scratch() / "solve_dp";
  ASSERT_EQ(run("solve --solver bnb --data " + small_dataset().string() + " --out " + bnb.string()), 0);
  ASSERT_EQ(run("solve --solver dp --data " + small_dataset().string() + " --out " + dp.string()), 0);
  const auto a = column(bnb / "results.csv", 4), b = column(dp / "results.csv", 4);
  ASSERT_EQ(a.size(), 9u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(std::stod(a[i]), std::stod(b[i]), 1e-6 * std::stod(b[i]));
  }
  const fs::path cuts = scratch() / "solve_cuts";
  ASSERT_EQ(run("solve --solver lscuts --ls-rounds 3 --data " + small_dataset().string() +
                " --out " + cuts.string()), 0);
  const auto c = column(cuts / "results.csv", 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(std::stod(c[i]), std::stod(b[i]), 1e-6 * std::stod(b[i]));
  }
}

TEST(CliSolve, Errors) {
  const fs::path long_data = scratch() / "t25";
  ASSERT_EQ(run("gen --c 3 --f 100 --T 25 --n 10 --seed 1 --out " + long_data.string()), 0);
  EXPECT_EQ(run("solve --solver brute --data " + long_data.string() + " --out " +
                (scratch() / "brute").string()), 5);
  EXPECT_EQ(run("solve --data " + (scratch() / "nope").string() + " --out " +
                (scratch() / "nope_out").string()), 3);
  const fs::path empty_test = scratch() / "empty_test";
  ASSERT_EQ(run("gen --c 3 --f 100 --T 5 --n 10 --train 8 --val 2 --test 0 --out " +
                empty_test.string()), 0);
  EXPECT_EQ(run("solve --data " + empty_test.string() + " --out " + (scratch() / "e").string()), 2);
  EXPECT_EQ(run("solve --solver simplex --data " + small_dataset().string() + " --out " +
                (scratch() / "s").string()), 2);
}

class CliModelFlow : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    model_dir_ = scratch() / "model";
    ASSERT_EQ(run("train --data " + small_dataset().string() +
                  " --layers 2 --units 8 --epochs 3 --seed 1 --out " + model_dir_.string()), 0);
  }
  static fs::path model_dir_;
};
fs::path CliModelFlow::model_dir_;

TEST_F(CliModelFlow, TrainWritesModelAndHistory) {
  EXPECT_TRUE(fs::exists(model_dir_ / "model.bin"));
  EXPECT_TRUE(fs::exists(model_dir_ / "model.bin.manifest"));
  const std::string hist = slurp(model_dir_ / "history.csv");
  EXPECT_EQ(hist.substr(0, hist.find('\n')), "epoch,loss,val_accuracy,wall_time");
  EXPECT_GE(lines(model_dir_ / "history.csv"), 2u);
  EXPECT_NE(slurp(model_dir_ / "manifest.json").find("train_cpu_seconds"), std::string::npos);
}

TEST_F(CliModelFlow, PredictEvaluateLevelZero) {
  const fs::path probs = scratch() / "probs_lstm", eval = scratch() / "eval0";
  ASSERT_EQ(run("predict --data " + small_dataset().string() + " --model " +
                (model_dir_ / "model.bin").string() + " --out " + probs.string()), 0);
  EXPECT_EQ(lines(probs / "probabilities.jsonl"), 9u);
  ASSERT_EQ(run("evaluate --data " + small_dataset().string() + " --probs " +
                (probs / "probabilities.jsonl").string() + " --levels 0 --mode hard --out " +
                eval.string()), 0);
  const auto gaps = column(eval / "results.csv", 12);
  ASSERT_EQ(gaps.size(), 9u);
  for (const auto& g : gaps) EXPECT_EQ(std::stod(g), 0.0);
}

TEST_F(CliModelFlow, LogisticBaselineSharesSchema) {
  const fs::path lstm_p = scratch() / "p_lstm", lr_p = scratch() / "p_lr";
  ASSERT_EQ(run("predict --data " + small_dataset().string() + " --model " +
                (model_dir_ / "model.bin").string() + " --out " + lstm_p.string()), 0);
  ASSERT_EQ(run("predict --data " + small_dataset().string() + " --baseline logistic --out " +
                lr_p.string()), 0);
  const fs::path e1 = scratch() / "e_lstm", e2 = scratch() / "e_lr";
  const std::string common = " --levels 50,100 --mode hard,soft,warm --jobs 2 --data " +
                             small_dataset().string();
  ASSERT_EQ(run("evaluate" + common + " --probs " + (lstm_p / "probabilities.jsonl").string() +
                " --out " + e1.string()), 0);
  ASSERT_EQ(run("evaluate" + common + " --probs " + (lr_p / "probabilities.jsonl").string() +
                " --out " + e2.string()), 0);
  const std::string a = slurp(e1 / "results.csv"), b = slurp(e2 / "results.csv");
  EXPECT_EQ(a.substr(0, a.find('\n')), lstmopt::kResultsHeader);
  EXPECT_EQ(a.substr(0, a.find('\n')), b.substr(0, b.find('\n')));
  EXPECT_EQ(lines(e1 / "results.csv"), lines(e2 / "results.csv"));
  EXPECT_EQ(lines(e1 / "results.csv"), 1 + 9u * 4);

  const fs::path rep = scratch() / "report";
  ASSERT_EQ(run("report --results " + (e1 / "results.csv").string() + " --out " + rep.string()), 0);
  EXPECT_NE(slurp(rep / "report.md").find("| hard | 50 |"), std::string::npos);
  EXPECT_TRUE(fs::exists(rep / "figure_optgap.csv"));
  EXPECT_TRUE(fs::exists(rep / "figure_inf.csv"));
  EXPECT_TRUE(fs::exists(rep / "figure_timeimp.csv"));
}

TEST_F(CliModelFlow, ChunkedPrediction) {
  const fs::path long_data = scratch() / "t20";
  ASSERT_EQ(run("gen --c 3 --f 100 --T 20 --n 10 --seed 2 --out " + long_data.string()), 0);
  const fs::path p = scratch() / "p_chunk";
  EXPECT_EQ(run("predict --chunk-T 10 --data " + long_data.string() + " --model " +
                (model_dir_ / "model.bin").string() + " --out " + p.string()), 0);
  EXPECT_EQ(run("predict --chunk-T 7 --data " + long_data.string() + " --model " +
                (model_dir_ / "model.bin").string() + " --out " + p.string()), 6);
}

TEST_F(CliModelFlow, ModelVersionMismatchIsFormatError) {
  std::string bytes = slurp(model_dir_ / "model.bin");
  bytes[8] = 99;
  const fs::path bad = scratch() / "bad_model.bin";
  std::ofstream(bad, std::ios::binary) << bytes;
  EXPECT_EQ(run("predict --data " + small_dataset().string() + " --model " + bad.string() +
                " --out " + (scratch() / "pbad").string()), 4);
}

TEST(CliReport, ZeroGapTable) {
  const fs::path csv = scratch() / "zero.csv";
  std::ofstream(csv) << lstmopt::kResultsHeader << "\n"
                     << "a,3,100,20,hard,50,Optimal,10,10,1,0.5,10,0\n"
                     << "b,3,100,20,hard,50,Optimal,20,20,1,0.5,10,0\n";
  const fs::path rep = scratch() / "zero_report";
  ASSERT_EQ(run("report --results " + csv.string() + " --out " + rep.string()), 0);
  EXPECT_NE(slurp(rep / "report.md").find("| 0.00 | 0.00 |"), std::string::npos);
  std::ofstream(scratch() / "junk.csv") << "nope\n";
  EXPECT_EQ(run("report --results " + (scratch() / "junk.csv").string() + " --out " +
                (scratch() / "junk_report").string()), 4);
}

}  // namespace
