#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "commands.hpp"
#include "scrnn/checkpoint.hpp"
#include "scrnn/csv.hpp"
#include "scrnn/sc_gru.hpp"
#include "scrnn/synth.hpp"

using namespace scrnn;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / "scrnn_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run scrnn_cli(const std::string& args) {
  static int counter = 0;
  const auto dir = fs::temp_directory_path() / "scrnn_cli_tests";
  fs::create_directories(dir);
  const auto err_path = dir / ("stderr_" + std::to_string(++counter) + ".txt");
  const std::string cmd = std::string(SCRNN_CLI_PATH) + " " + args + " 2>" + err_path.string();
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

const char* kTinyTrain =
    "--set observed=4 --set horizon=3 --set epochs=2 --set batch_size=4 --set window_stride=4 "
    "--set learning_rate=0.01";

fs::path tiny_data(const std::string& name) {
  auto dir = scratch(name);
  const auto data = synth_dataset(SynthKind::walk_like, 3, 24, 4, 9);
  for (std::size_t i = 0; i < data.size(); ++i) save_csv(dir / ("seq_" + std::to_string(i) + ".csv"), data[i]);
  return dir;
}

}  // namespace

TEST(Cli, TrainWritesArtifactsAndIsDeterministic) {
  const auto data = tiny_data("train_data");
  const auto a = scratch("train_a"), b = scratch("train_b");
  auto r1 = scrnn_cli(std::string("train ") + kTinyTrain + " --data " + data.string() + " --out " + a.string());
  ASSERT_EQ(r1.code, 0) << r1.err;
  EXPECT_NE(r1.out.find("epoch 2 loss"), std::string::npos);
  EXPECT_NE(r1.out.find("zero_velocity"), std::string::npos);
  for (const char* f : {"checkpoint.txt", "loss.csv", "manifest.json"}) EXPECT_TRUE(fs::exists(a / f)) << f;

  auto r2 = scrnn_cli(std::string("train ") + kTinyTrain + " --data " + data.string() + " --out " + b.string());
  ASSERT_EQ(r2.code, 0) << r2.err;
  EXPECT_EQ(slurp(a / "checkpoint.txt"), slurp(b / "checkpoint.txt"));
  EXPECT_EQ(slurp(a / "loss.csv"), slurp(b / "loss.csv"));

  // replaying from the manifest reproduces the run
  const auto c = scratch("train_c");
  auto r3 = scrnn_cli("train --config " + (a / "manifest.json").string() + " --data " + data.string() + " --out " +
                      c.string());
  ASSERT_EQ(r3.code, 0) << r3.err;
  EXPECT_EQ(slurp(a / "checkpoint.txt"), slurp(c / "checkpoint.txt"));

  // threaded deterministic reduction matches the serial run
  const auto d = scratch("train_d");
  auto r4 = scrnn_cli(std::string("train ") + kTinyTrain + " --threads 3 --deterministic --data " + data.string() +
                      " --out " + d.string());
  ASSERT_EQ(r4.code, 0) << r4.err;
  EXPECT_EQ(load_checkpoint(a / "checkpoint.txt").params, load_checkpoint(d / "checkpoint.txt").params);
  EXPECT_EQ(slurp(a / "loss.csv"), slurp(d / "loss.csv"));
}

TEST(Cli, UnknownVariantIsConfigError) {
  const auto data = tiny_data("variant_data");
  const auto out = scratch("variant_out");
  auto r = scrnn_cli(std::string("train ") + kTinyTrain + " --set variant=no_magic --data " + data.string() +
                     " --out " + out.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error category=config:", 0), 0u) << r.err;
  for (const char* v : {"full", "no_sca", "no_skel_attn", "no_joint_attn"}) EXPECT_NE(r.err.find(v), std::string::npos);
  EXPECT_TRUE(fs::is_empty(out));
}

TEST(Cli, ErrorCategoriesMapToExitCodes) {
  EXPECT_EQ(scrnn_cli("train --data /nonexistent/dir --out /tmp/x").code, 3);
  EXPECT_EQ(scrnn_cli("frobnicate").code, 2);
  EXPECT_EQ(scrnn_cli("train --out /tmp/x").code, 2);
  auto bad = scratch("bad_config");
  std::ofstream(bad / "c.json") << R"({"epochz": 1})";
  auto r = scrnn_cli("gradcheck --config " + (bad / "c.json").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("epochz"), std::string::npos);

  // short sequences are a data problem; the failed run leaves nothing behind
  auto shortd = scratch("short_data");
  save_csv(shortd / "a.csv", synth_generate(SynthKind::sinusoid, 2, 5, 1));
  auto out = scratch("short_out");
  auto rs = scrnn_cli("train --data " + shortd.string() + " --out " + out.string());
  EXPECT_EQ(rs.code, 3) << rs.err;
  EXPECT_FALSE(fs::exists(out / "manifest.json"));
  EXPECT_FALSE(fs::exists(out / "checkpoint.txt"));

  EXPECT_EQ(cli::exit_code(ErrorCategory::shape), 4);
  EXPECT_EQ(cli::exit_code(ErrorCategory::numeric), 5);
  EXPECT_EQ(cli::exit_code(ErrorCategory::internal), 6);
}

TEST(Cli, PredictMatchesLibraryBitwise) {
  const auto data = tiny_data("predict_data");
  const auto run = scratch("predict_run");
  ASSERT_EQ(scrnn_cli(std::string("train ") + kTinyTrain + " --data " + data.string() + " --out " + run.string()).code,
            0);
  const auto input = data / "seq_1.csv";
  const auto out = run / "pred.csv";
  auto r = scrnn_cli("predict --checkpoint " + (run / "checkpoint.txt").string() + " --input " + input.string() +
                     " --horizon 5 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.err;

  const auto ckpt = load_checkpoint(run / "checkpoint.txt");
  const auto cfg = parse_config(ckpt.config_json);
  const auto want = rollout(load_csv(input), 5, ckpt.params, model_config(cfg, 3));
  EXPECT_EQ(load_csv(out), want);

  auto to_stdout = scrnn_cli("predict --checkpoint " + (run / "checkpoint.txt").string() + " --input " +
                             input.string());
  ASSERT_EQ(to_stdout.code, 0);
  EXPECT_EQ(parse_csv(to_stdout.out).length(), 3u);

  auto wrong = scratch("predict_wrong");
  save_csv(wrong / "k2.csv", synth_generate(SynthKind::sinusoid, 2, 8, 1));
  auto rw = scrnn_cli("predict --checkpoint " + (run / "checkpoint.txt").string() + " --input " +
                      (wrong / "k2.csv").string());
  EXPECT_EQ(rw.code, 4);
  EXPECT_NE(rw.err.find("expects 3"), std::string::npos) << rw.err;
}

TEST(Cli, EvalTables) {
  auto dir = scratch("eval");
  const auto s = synth_generate(SynthKind::walk_like, 2, 30, 3);
  auto shifted = s.frames();
  for (auto& f : shifted) f[0] += 1.0;
  save_csv(dir / "truth.csv", s);
  save_csv(dir / "same.csv", s);
  save_csv(dir / "off.csv", SkeletonSequence(2, shifted));
  save_csv(dir / "short.csv", s.slice(1, 10));

  auto same = scrnn_cli("eval --pred " + (dir / "same.csv").string() + " --truth " + (dir / "truth.csv").string() +
                        " --csv " + (dir / "same_table.csv").string());
  ASSERT_EQ(same.code, 0) << same.err;
  EXPECT_EQ(slurp(dir / "same_table.csv"), "tag,80,160,320,400,560,640,720,1000\nprediction,0,0,0,0,0,0,0,0\n");

  auto off = scrnn_cli("eval --pred " + (dir / "off.csv").string() + " --truth " + (dir / "truth.csv").string() +
                       " --horizons-ms 80,400 --tag shifted");
  ASSERT_EQ(off.code, 0) << off.err;
  EXPECT_NE(off.out.find("| shifted | 1.0000 | 1.0000 |"), std::string::npos) << off.out;

  auto mis = scrnn_cli("eval --pred " + (dir / "short.csv").string() + " --truth " + (dir / "truth.csv").string());
  EXPECT_EQ(mis.code, 3);
  EXPECT_NE(mis.err.find("misaligned"), std::string::npos);
}

TEST(Cli, GradCheckPasses) {
  auto r = scrnn_cli("gradcheck");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, AblateZeroEpochs) {
  auto dir = scratch("ablate");
  auto r = scrnn_cli(
      "ablate --set epochs=0 --set observed=4 --set horizon=3 --set synth.count=4 --set synth.frames=40 "
      "--set horizons_ms=[40,80] --markdown " +
      (dir / "t.md").string() + " --csv " + (dir / "t.csv").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(dir / "t.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  for (const char* v : {"full", "no_sca", "no_skel_attn", "no_joint_attn"}) EXPECT_NE(csv.find(v), std::string::npos);
  EXPECT_NE(slurp(dir / "t.md").find("| no_sca |"), std::string::npos);
}

TEST(Cli, SynthIsReproducible) {
  auto a = scratch("synth_a"), b = scratch("synth_b");
  const std::string opts = " --set synth.count=3 --set synth.frames=20 --set synth.kind=sinusoid";
  ASSERT_EQ(scrnn_cli("synth --out " + a.string() + opts).code, 0);
  ASSERT_EQ(scrnn_cli("synth --out " + b.string() + opts).code, 0);
  for (const char* f : {"seq_0001.csv", "seq_0002.csv", "seq_0003.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f));
  }
  EXPECT_EQ(load_csv(a / "seq_0002.csv"), synth_generate(SynthKind::sinusoid, 4, 20, 8));
}
