// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "awse/config.hpp"
#include "awse/wav.hpp"
#include "cli.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace awse;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t data_lines(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++n;
  return n - 1;  // column header
}

// Two short synthetic pairs shared by the command tests.
std::string synth_dir() {
  static const std::string dir = [] {
    const std::string d = testing::temp_path("cli_synth");
    std::filesystem::remove_all(d);
    const auto r = run({"synth", "--output-dir", d, "--count", "2", "--duration-sec", "0.5", "--seed", "5"});
    REQUIRE(r.code == 0);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("config text") {
  RunConfig c;
  apply_config_text(c, "# comment\nl-long = 1024\n  l_short=256  \n\ntau = 0.5 # trailing\noracle_mode = complement\n");
  CHECK(c.l_long == 1024);
  CHECK(c.l_short == 256);
  CHECK(c.tau == 0.5);
  CHECK(c.oracle_mode == learning::OracleMode::Complement);
  CHECK_THROWS_WITH_AS(apply_config_text(c, "tau = 1\nbogus = 3\n"), doctest::Contains("config line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(apply_config_text(c, "seed = twelve\n"), doctest::Contains("config line 1"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "tau 0.5\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "context_r = 3.5\n"), ConfigError);

  RunConfig d;
  d.validate();
  CHECK(d.l_long == 512);
  CHECK(d.l_short == 128);
  CHECK(d.context_r == 5);
  CHECK(d.tau == 1e-4);
  CHECK(d.lambda == 0.1);
  CHECK(d.oracle_mode == learning::OracleMode::Direct);
  RunConfig e;
  apply_config_text(e, to_config_text(c));
  CHECK(to_config_text(e) == to_config_text(c));

  for (const char* bad : {"tau = 0", "tau = -1", "l_short = 96", "context_r = -1", "lambda = -0.5",
                          "learning_rate = 0", "duration_sec = 0", "l_long = 128",
                          "finetune_grad_clip = -1"}) {
    RunConfig f;
    apply_config_text(f, bad);
    CHECK_THROWS_AS(f.validate(), ConfigError);
  }
  CHECK_THROWS_AS(apply_config_file(d, testing::temp_path("no_such.cfg")), ConfigError);
}

TEST_CASE("pr-check exit codes") {
  const auto good = run({"pr-check", "--trials", "10"});
  CHECK(good.code == cli::kExitOk);
  const auto report = nlohmann::json::parse(good.out);
  CHECK(report["schema"] == "awse.pr_check/1");
  CHECK(report["pass"] == true);
  CHECK(report["all_legal_adjacencies_covered"] == true);
  CHECK(report["adjacency_counts"].size() == 6);
  for (const auto& c : report["cases"]) CHECK(c["max_rel_error"].get<double>() <= 1e-10);

  const auto bad = run({"pr-check", "--trials", "5", "--corrupt-window"});
  CHECK(bad.code == cli::kExitAcceptance);
  CHECK(nlohmann::json::parse(bad.out)["pass"] == false);

  CHECK(run({"pr-check", "--tau", "-1"}).code == cli::kExitValidation);
  CHECK(run({"no-such-command"}).code == cli::kExitValidation);
  CHECK(run({"pr-check", "--trials", "3"}).out == run({"pr-check", "--trials", "3"}).out);
}

TEST_CASE("config file and environment precedence") {
  const std::string cfg = testing::temp_path("bad_tau.cfg");
  {
    std::ofstream f(cfg);
    f << "tau = -3\n";
  }
  CHECK(run({"--config", cfg, "pr-check", "--trials", "2"}).code == cli::kExitValidation);
  CHECK(run({"--config", cfg, "--tau", "0.5", "pr-check", "--trials", "2"}).code == cli::kExitOk);
  ::setenv(kConfigEnvVar, cfg.c_str(), 1);
  CHECK(run({"pr-check", "--trials", "2"}).code == cli::kExitValidation);
  const std::string good = testing::temp_path("good.cfg");
  {
    std::ofstream f(good);
    f << "l_long = 256\n";
  }
  CHECK(run({"--config", good, "pr-check", "--trials", "2"}).code == cli::kExitOk);
  ::unsetenv(kConfigEnvVar);
}

TEST_CASE("enhance with unit masks returns the input") {
  const std::string dir = synth_dir();
  const std::string noisy = dir + "/noisy_0000.wav", clean = dir + "/clean_0000.wav";
  const std::string out = testing::temp_path("ones.wav");
  for (const char* mode : {"fixed-long", "fixed-short"}) {
    const auto r = run({"enhance", "--mode", mode, "--mask", "ones", "--input", noisy, "--output", out});
    REQUIRE(r.code == 0);
    const Signal x = read_wav(noisy), y = read_wav(out);
    REQUIRE(y.size() == x.size());
    CHECK((y.samples - x.samples).norm() <= 1e-10 * x.samples.norm());
  }
  const auto m = run({"enhance", "--mode", "fixed-long", "--input", noisy, "--clean", clean, "--output", out});
  REQUIRE(m.code == 0);
  const auto report = nlohmann::json::parse(m.out);
  CHECK(report["schema"] == "awse.enhance/1");
  const auto metrics = report["metrics"];
  CHECK(metrics.contains("sdr"));
  CHECK(metrics.contains("sdr_improvement"));
  CHECK(metrics.contains("mean_segmental_sdr"));
  CHECK(metrics["sdr_improvement"].get<double>() > 0.0);
}

TEST_CASE("enhance argument errors") {
  const std::string dir = synth_dir();
  const std::string noisy = dir + "/noisy_0000.wav";
  const std::string out = testing::temp_path("err.wav");
  const auto no_model = run({"enhance", "--mode", "aws-model", "--input", noisy, "--output", out});
  CHECK(no_model.code == cli::kExitValidation);
  CHECK(no_model.err.find("model") != std::string::npos);
  CHECK(run({"enhance", "--mode", "aws-oracle", "--input", noisy, "--output", out}).code == cli::kExitValidation);
  CHECK(run({"enhance", "--mode", "fixed-long", "--input", noisy, "--output", out}).code == cli::kExitValidation);
  CHECK(run({"enhance", "--mode", "sideways", "--input", noisy, "--output", out}).code == cli::kExitValidation);
  CHECK(run({"enhance", "--mode", "fixed-long", "--mask", "ones", "--input", dir + "/missing.wav", "--output", out})
            .code == cli::kExitValidation);
}

TEST_CASE("segsdr and trace outputs") {
  const std::string dir = synth_dir();
  const std::string noisy = dir + "/noisy_0001.wav", clean = dir + "/clean_0001.wav";
  const Signal x = read_wav(noisy);
  const auto seg = run({"segsdr", "--clean", clean, "--input", noisy});
  REQUIRE(seg.code == 0);
  CHECK(seg.out.rfind("# schema: awse.segsdr/1", 0) == 0);
  CHECK(seg.out.find("frame_index,time_sec,sdr_db,silent_flag") != std::string::npos);
  CHECK(data_lines(seg.out) == static_cast<std::size_t>((x.size() + 255) / 256));
  const auto seg100 = run({"segsdr", "--clean", clean, "--input", noisy, "--frame-len", "100"});
  CHECK(data_lines(seg100.out) == static_cast<std::size_t>((x.size() + 99) / 100));

  const auto tr = run({"trace", "--input", noisy, "--clean", clean});
  REQUIRE(tr.code == 0);
  CHECK(tr.out.rfind("# schema: awse.trace/1", 0) == 0);
  CHECK(tr.out.find("t,z_long,z_start,z_short,z_stop,chosen_kind") != std::string::npos);
  CHECK(data_lines(tr.out) == static_cast<std::size_t>((x.size() + 255) / 256 + 1));
  CHECK(run({"trace", "--input", noisy}).code == cli::kExitValidation);
}

TEST_CASE("train twice with one seed gives identical files") {
  const std::vector<std::string> common{"--l-long", "16", "--l-short", "8", "--context-r", "1",
                                        "--hidden-units", "4", "--corpus-size", "3", "--duration-sec", "0.05",
                                        "--pretrain-epochs", "2", "--gate-epochs", "1", "--finetune-epochs", "1"};
  std::vector<std::string> paths;
  for (int i = 0; i < 2; ++i) {
    const std::string model = testing::temp_path("det_model_" + std::to_string(i) + ".json");
    const std::string history = testing::temp_path("det_history_" + std::to_string(i) + ".csv");
    std::vector<std::string> args{"train", "--model", model, "--history", history, "--quiet"};
    args.insert(args.end(), common.begin(), common.end());
    const auto r = run(args);
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["schema"] == "awse.train/1");
    paths.push_back(model);
    paths.push_back(history);
  }
  CHECK(slurp(paths[0]) == slurp(paths[2]));
  CHECK(slurp(paths[1]) == slurp(paths[3]));
  CHECK_FALSE(slurp(paths[0]).empty());
  const auto rec = learning::load_model(paths[0]);
  CHECK(rec.pipeline.geometry.long_len == 16);

  // The trained model drives aws-model and trace.
  const std::string dir = testing::temp_path("cli_tiny");
  std::filesystem::remove_all(dir);
  REQUIRE(run({"synth", "--output-dir", dir, "--count", "1", "--duration-sec", "0.1"}).code == 0);
  const std::string out = testing::temp_path("tiny_out.wav");
  const auto enh = run({"enhance", "--mode", "aws-model", "--model", paths[0], "--input", dir + "/noisy_0000.wav",
                        "--output", out});
  CHECK(enh.code == 0);
  CHECK(read_wav(out).size() == read_wav(dir + "/noisy_0000.wav").size());
  const auto tr = run({"trace", "--model", paths[0], "--input", dir + "/noisy_0000.wav"});
  CHECK(tr.code == 0);
}
