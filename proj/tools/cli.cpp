// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cli.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "awse/corpus.hpp"
#include "awse/learning/graph.hpp"
#include "awse/learning/train.hpp"
#include "awse/masking.hpp"
#include "awse/mdct.hpp"
#include "awse/metrics.hpp"
#include "awse/wav.hpp"
#include "awse/windows.hpp"

namespace awse::cli {
namespace {

using nlohmann::json;
using learning::ModelRecord;

std::string fmt(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double relative_error(const Vector<double>& reference, const Vector<double>& estimate) {
  const double ref = reference.norm();
  const double err = (reference - estimate).norm();
  return ref > 0.0 ? err / ref : err;
}

Vector<double> random_signal(Eigen::Index len, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector<double> x(len);
  for (Eigen::Index n = 0; n < len; ++n) x[n] = normal(rng);
  return x;
}

std::string pair_name(WindowKind a, WindowKind b) {
  return std::string(kind_name(a)) + "->" + std::string(kind_name(b));
}

SwitchGeometry geometry_of(const RunConfig& config) { return SwitchGeometry(config.l_long, config.l_short); }

learning::PipelineConfig pipeline_config(const RunConfig& config) {
  return learning::PipelineConfig{geometry_of(config), config.context_r, config.amp_floor};
}

void require_same_length(const Signal& a, const Signal& b, const char* what) {
  if (a.size() != b.size()) throw std::invalid_argument(std::string(what) + ": signal lengths differ");
  if (a.sample_rate != b.sample_rate) throw std::invalid_argument(std::string(what) + ": sample rates differ");
}

Signal with_samples(const Signal& like, Vector<double> samples) {
  Signal s;
  s.sample_rate = like.sample_rate;
  s.samples = std::move(samples);
  return s;
}

Signal enhance_fixed_window(const Signal& noisy, const Signal* clean, Eigen::Index len, MaskSource source) {
  const Vector<double> window = sine_window<double>(len);
  const auto seq = frame_signal(noisy.samples, len / 2);
  const Matrix<double> analysis = mdct_matrix<double>(len) * window.asDiagonal();
  MaskSequence mask;
  if (source == MaskSource::Ones) {
    mask = MaskSequence::Ones(len / 2, seq.count() + 1);
  } else {
    if (!clean) throw std::invalid_argument("oracle masks need a clean reference (--clean)");
    mask = oracle_mask<double>(lapped_analyze(analysis, frame_signal(clean->samples, len / 2)),
                               lapped_analyze(analysis, seq));
  }
  return enhance_fixed(noisy, mask, window);
}

Signal enhance_model_states(const ModelRecord& model, const Signal& noisy, WindowKind kind) {
  const learning::Pipeline pipeline(model.pipeline);
  const auto utt = pipeline.prepare(noisy);
  learning::ForwardSpec spec;
  spec.fixed_states = learning::constant_states(kind, utt.analysis_frames());
  spec.include_wa = false;
  const auto res = learning::evaluate(pipeline, model.models, utt, spec);
  return with_samples(noisy, unframe(res.estimate_frames, utt.pad_len));
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace

json pr_check(const RunConfig& config, const PrCheckOptions& options) {
  config.validate();
  if (options.trials <= 0) throw std::invalid_argument("pr-check: trials must be positive");
  const SwitchGeometry geo = geometry_of(config);
  std::mt19937_64 rng(config.seed);

  Vector<double> long_window = sine_window<double>(geo.long_len);
  if (options.corrupt_window) long_window[0] += 0.01;

  json cases = json::array();
  bool pass = true;
  for (Eigen::Index len : {geo.long_len, geo.short_len}) {
    const Vector<double> window = len == geo.long_len ? long_window : sine_window<double>(len);
    std::uniform_int_distribution<Eigen::Index> length(len / 2, 16 * len);
    double worst = 0.0;
    for (int trial = 0; trial < options.trials; ++trial) {
      const Vector<double> x = random_signal(length(rng), rng);
      const auto seq = frame_signal(x, len / 2);
      const Vector<double> y = mdct_synthesize(mdct_analyze(seq, window), window, seq.pad_len);
      worst = std::max(worst, relative_error(x, y));
    }
    const bool ok = worst <= kPrTolerance;
    pass = pass && ok;
    cases.push_back({{"name", "fixed"}, {"window_len", len}, {"trials", options.trials}, {"max_rel_error", worst},
                     {"pass", ok}});
  }

  AnalysisBank<double> bank = build_analysis_bank<double>(geo);
  if (options.corrupt_window)
    bank.matrices[index_of(WindowKind::Long)] = mdct_matrix<double>(geo.long_len) * long_window.asDiagonal();
  std::map<std::string, int> adjacency;
  for (WindowKind a : kAllKinds)
    for (WindowKind b : kAllKinds)
      if (is_legal_adjacency(a, b)) adjacency[pair_name(a, b)] = 0;
  std::uniform_int_distribution<Eigen::Index> frames(8, 64), tail(0, geo.hop() - 1);
  double worst = 0.0;
  for (int trial = 0; trial < options.trials; ++trial) {
    const Eigen::Index count = frames(rng);
    const Vector<double> x = random_signal(count * geo.hop() - tail(rng), rng);
    const auto seq = frame_signal(x, geo.hop());
    const auto kinds = random_legal_kinds(static_cast<std::size_t>(seq.count() + 1), rng, WindowKind::Long);
    WindowKind prev = WindowKind::Long;
    for (WindowKind k : kinds) {
      ++adjacency[pair_name(prev, k)];
      prev = k;
    }
    const auto states = states_from_kinds<double>(kinds);
    const Vector<double> y = switched_synthesize(switched_analyze(seq, states, bank), states, bank, seq.pad_len);
    worst = std::max(worst, relative_error(x, y));
  }
  const bool switched_ok = worst <= kPrTolerance;
  pass = pass && switched_ok;
  cases.push_back({{"name", "switched"},
                   {"window_len", geo.long_len},
                   {"short_len", geo.short_len},
                   {"trials", options.trials},
                   {"max_rel_error", worst},
                   {"pass", switched_ok}});

  bool covered = true;
  json counts = json::object();
  for (const auto& [name, n] : adjacency) {
    counts[name] = n;
    covered = covered && n > 0;
  }
  return json{{"schema", "awse.pr_check/1"},
              {"l_long", geo.long_len},
              {"l_short", geo.short_len},
              {"seed", config.seed},
              {"tolerance", kPrTolerance},
              {"cases", cases},
              {"adjacency_counts", counts},
              {"all_legal_adjacencies_covered", covered},
              {"pass", pass}};
}

EnhanceMode parse_enhance_mode(const std::string& name) {
  if (name == "fixed-long") return EnhanceMode::FixedLong;
  if (name == "fixed-short") return EnhanceMode::FixedShort;
  if (name == "aws-oracle") return EnhanceMode::AwsOracle;
  if (name == "aws-model") return EnhanceMode::AwsModel;
  throw std::invalid_argument("unknown enhance mode: " + name);
}

MaskSource parse_mask_source(const std::string& name) {
  if (name == "oracle") return MaskSource::Oracle;
  if (name == "ones") return MaskSource::Ones;
  if (name == "model") return MaskSource::Model;
  throw std::invalid_argument("unknown mask source: " + name);
}

EnhanceResult enhance(const RunConfig& config, EnhanceMode mode, MaskSource masks, const Signal& noisy,
                      const Signal* clean, const ModelRecord* model) {
  config.validate();
  if (clean) require_same_length(*clean, noisy, "enhance");
  const bool needs_model = mode == EnhanceMode::AwsModel || masks == MaskSource::Model;
  if (needs_model && !model) throw std::invalid_argument("this mode needs a trained model (--model)");
  EnhanceResult out;
  switch (mode) {
    case EnhanceMode::FixedLong:
    case EnhanceMode::FixedShort: {
      const bool is_long = mode == EnhanceMode::FixedLong;
      if (masks == MaskSource::Model) {
        out.enhanced = enhance_model_states(*model, noisy, is_long ? WindowKind::Long : WindowKind::Short);
      } else {
        out.enhanced = enhance_fixed_window(noisy, clean, is_long ? config.l_long : config.l_short, masks);
      }
      return out;
    }
    case EnhanceMode::AwsOracle: {
      if (!clean) throw std::invalid_argument("aws-oracle needs a clean reference (--clean)");
      if (masks != MaskSource::Oracle) throw std::invalid_argument("aws-oracle always uses oracle masks");
      const auto bank = build_analysis_bank<double>(geometry_of(config));
      const auto oracle = oracle_switched_masks(*clean, noisy, bank);
      const auto states = states_from_kinds<double>(best_window_sequence(*clean, noisy, oracle, bank));
      out.enhanced = enhance_switched(noisy, oracle, states, bank);
      out.states = states;
      return out;
    }
    case EnhanceMode::AwsModel: {
      if (masks != MaskSource::Oracle && masks != MaskSource::Model)
        throw std::invalid_argument("aws-model always uses the model masks");
      const learning::Pipeline pipeline(model->pipeline);
      auto res = learning::enhance_with_models(pipeline, model->models, noisy);
      out.enhanced = std::move(res.enhanced);
      out.states = std::move(res.states);
      return out;
    }
  }
  throw std::invalid_argument("unknown enhance mode");
}

json enhance_metrics(const RunConfig& config, const Signal& clean, const Signal& noisy, const Signal& enhanced) {
  require_same_length(clean, enhanced, "metrics");
  const auto seg = segmental_sdr(clean, enhanced, config.l_long / 2);
  const double mean = seg.mean();
  return json{{"sdr", sdr(clean, enhanced)},
              {"sdr_improvement", sdr_improvement(clean, noisy, enhanced)},
              {"mean_segmental_sdr", std::isnan(mean) ? json(nullptr) : json(mean)},
              {"segmental_frame_len", config.l_long / 2}};
}

std::string segsdr_csv(const Signal& reference, const Signal& estimate, Eigen::Index frame_len) {
  require_same_length(reference, estimate, "segsdr");
  const auto seg = segmental_sdr(reference, estimate, frame_len);
  std::string out = "# schema: awse.segsdr/1\nframe_index,time_sec,sdr_db,silent_flag\n";
  for (std::size_t t = 0; t < seg.size(); ++t) {
    const double time = static_cast<double>(t) * static_cast<double>(frame_len) / reference.sample_rate;
    out += std::to_string(t) + "," + fmt(time) + "," + fmt(seg.values_db[t]) + "," + (seg.silent[t] ? "1" : "0") + "\n";
  }
  return out;
}

std::string trace_csv(const StateSequence<double>& states) {
  const auto kinds = kinds_from_states(states);
  std::string out = "# schema: awse.trace/1\nt,z_long,z_start,z_short,z_stop,chosen_kind\n";
  for (Eigen::Index t = 0; t < states.cols(); ++t) {
    out += std::to_string(t);
    for (int j = 0; j < 4; ++j) out += "," + fmt(states(j, t));
    out += "," + std::string(kind_name(kinds[static_cast<std::size_t>(t)])) + "\n";
  }
  return out;
}

StateSequence<double> trace_states(const RunConfig& config, const Signal& noisy, const Signal* clean,
                                   const ModelRecord* model) {
  if (model) {
    const learning::Pipeline pipeline(model->pipeline);
    return learning::enhance_with_models(pipeline, model->models, noisy).states;
  }
  if (!clean) throw std::invalid_argument("trace needs --model or a clean reference (--clean)");
  return *enhance(config, EnhanceMode::AwsOracle, MaskSource::Oracle, noisy, clean, nullptr).states;
}

ModelRecord model_record(const RunConfig& config, const learning::ModelSet& models) {
  ModelRecord r;
  r.pipeline = pipeline_config(config);
  r.tau = config.tau;
  r.lambda = config.lambda;
  r.seed = config.seed;
  r.oracle_mode = config.oracle_mode;
  r.models = models;
  return r;
}

namespace {

learning::TrainConfig train_config(const RunConfig& c) {
  learning::TrainConfig t;
  t.hidden_units = c.hidden_units;
  t.gate_hidden_units = c.gate_hidden_units;
  t.gate_learning_rate = c.gate_learning_rate;
  t.tau = c.tau;
  t.lambda = c.lambda;
  t.learning_rate = c.learning_rate;
  t.pretrain_epochs = c.pretrain_epochs;
  t.gate_epochs = c.gate_epochs;
  t.finetune_epochs = c.finetune_epochs;
  t.grad_clip = c.grad_clip;
  t.finetune_grad_clip = c.finetune_grad_clip;
  t.oracle_mode = c.oracle_mode;
  t.seed = c.seed;
  return t;
}

SyntheticCorpusConfig corpus_config(const RunConfig& c) {
  SyntheticCorpusConfig s;
  s.duration_sec = c.duration_sec;
  s.snr_db = c.snr_db;
  s.seed = c.seed;
  return s;
}

// Lines of "noisy.wav clean.wav"; relative paths resolve against the list.
std::vector<std::pair<Signal, Signal>> read_pairs(const std::string& list) {
  std::vector<std::pair<Signal, Signal>> out;
  const auto base = std::filesystem::path(list).parent_path();
  std::istringstream in(read_text(list));
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string noisy, clean;
    if (!(fields >> noisy)) continue;
    if (noisy[0] == '#') continue;
    if (!(fields >> clean)) throw std::invalid_argument("pair list: expected 'noisy.wav clean.wav' in " + list);
    const auto resolve = [&](const std::string& p) {
      const std::filesystem::path path(p);
      return (path.is_absolute() ? path : base / path).string();
    };
    out.emplace_back(read_wav(resolve(noisy)), read_wav(resolve(clean)));
  }
  if (out.empty()) throw std::invalid_argument("pair list is empty: " + list);
  return out;
}

struct Sink {
  std::ostream& out;
  std::string path;
  void write(const std::string& text) const { write_text(path, text, out); }
};

// First --config value in `args`, else the environment variable.
std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) return std::string(env);
  return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    if (const auto path = config_path(args)) apply_config_file(config, *path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  CLI::App app{"Adaptive window switching for MDCT-domain mask speech enhancement", "awse"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  std::string oracle_mode = learning::oracle_mode_name(config.oracle_mode);
  app.add_option("--config", config_file, "key = value config file (also $" + std::string(kConfigEnvVar) + ")");
  app.add_option("--l-long", config.l_long, "long window length");
  app.add_option("--l-short", config.l_short, "short window length");
  app.add_option("--context-r", config.context_r, "feature context radius in frames");
  app.add_option("--tau", config.tau, "Gumbel-softmax temperature");
  app.add_option("--lambda", config.lambda, "weight of the window-decision loss");
  app.add_option("--seed", config.seed, "random seed");
  app.add_option("--amp-floor", config.amp_floor, "amplitude floor of the log features");
  app.add_option("--oracle-mode", oracle_mode, "window target rule")->check(CLI::IsMember({"direct", "complement"}));
  app.add_option("--hidden-units", config.hidden_units, "hidden layer width");
  app.add_option("--gate-hidden-units", config.gate_hidden_units, "gate hidden layer width (0 = hidden-units)");
  app.add_option("--learning-rate", config.learning_rate, "gradient step size");
  app.add_option("--gate-learning-rate", config.gate_learning_rate, "gate step size (0 = learning-rate)");
  app.add_option("--pretrain-epochs", config.pretrain_epochs, "mask pretraining epochs");
  app.add_option("--gate-epochs", config.gate_epochs, "gate pretraining epochs");
  app.add_option("--finetune-epochs", config.finetune_epochs, "joint fine-tuning epochs");
  app.add_option("--grad-clip", config.grad_clip, "per-network gradient norm limit (0 = off)");
  app.add_option("--finetune-grad-clip", config.finetune_grad_clip, "gradient norm limit in stage 3 (0 = off)");
  app.add_option("--corpus-size", config.corpus_size, "synthetic utterances");
  app.add_option("--duration-sec", config.duration_sec, "synthetic utterance length");
  app.add_option("--snr-db", config.snr_db, "synthetic mixture SNR");

  std::string format_name = "float32";
  const auto sample_format = [&] { return parse_sample_format(format_name); };

  auto* pr = app.add_subcommand("pr-check", "perfect reconstruction trials (exit 2 on failure)");
  PrCheckOptions pr_options;
  std::string report_path;
  pr->add_option("--trials", pr_options.trials, "trials per case");
  pr->add_option("--report", report_path, "JSON report path (default stdout)");
  pr->add_flag("--corrupt-window", pr_options.corrupt_window)->group("");

  auto* enh = app.add_subcommand("enhance", "mask-based enhancement of a noisy WAV");
  std::string mode_name = "fixed-long", mask_name = "oracle", input_path, clean_path, output_path, model_path;
  enh->add_option("--mode", mode_name, "fixed-long | fixed-short | aws-oracle | aws-model");
  enh->add_option("--mask", mask_name, "mask source of the fixed modes: oracle | ones | model");
  enh->add_option("--input", input_path, "noisy WAV")->required();
  enh->add_option("--clean", clean_path, "clean reference WAV");
  enh->add_option("--model", model_path, "trained model file");
  enh->add_option("--output", output_path, "enhanced WAV")->required();
  enh->add_option("--report", report_path, "metrics JSON path (default stdout)");
  enh->add_option("--format", format_name, "output sample format: float32 | pcm16");

  auto* seg = app.add_subcommand("segsdr", "per-frame SDR of an estimate against a reference");
  Eigen::Index frame_len = 0;
  seg->add_option("--clean", clean_path, "reference WAV")->required();
  seg->add_option("--input", input_path, "estimate WAV")->required();
  seg->add_option("--frame-len", frame_len, "frame length in samples (default L_long / 2)");
  seg->add_option("--output", output_path, "CSV path (default stdout)");

  auto* tr = app.add_subcommand("trace", "per-frame window states and decisions");
  tr->add_option("--input", input_path, "noisy WAV")->required();
  tr->add_option("--model", model_path, "trained model (gate decisions)");
  tr->add_option("--clean", clean_path, "clean reference (oracle decisions when no model)");
  tr->add_option("--output", output_path, "CSV path (default stdout)");

  auto* trn = app.add_subcommand("train", "three-stage training on a corpus");
  std::string pairs_path, history_path;
  trn->add_option("--pairs", pairs_path, "list of 'noisy.wav clean.wav' lines (default: synthetic corpus)");
  trn->add_option("--model", model_path, "output model file")->required();
  trn->add_option("--history", history_path, "loss history CSV");
  trn->add_option("--report", report_path, "summary JSON path (default stdout)");
  bool quiet = false;
  trn->add_flag("--quiet", quiet, "no per-epoch progress on stderr");

  auto* syn = app.add_subcommand("synth", "write synthetic clean/noisy WAV pairs");
  std::string out_dir;
  int count = 0;
  bool stationary = false;
  syn->add_option("--output-dir", out_dir, "destination directory")->required();
  syn->add_option("--count", count, "number of pairs (default corpus_size)");
  syn->add_flag("--stationary", stationary, "one tone per utterance, no transients");
  syn->add_option("--format", format_name, "sample format: float32 | pcm16");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    config.oracle_mode = learning::parse_oracle_mode(oracle_mode);
    config.validate();
    const auto load_optional = [](const std::string& path) {
      return path.empty() ? std::optional<Signal>() : std::optional<Signal>(read_wav(path));
    };
    const auto load_model_optional = [](const std::string& path) {
      return path.empty() ? std::optional<ModelRecord>() : std::optional<ModelRecord>(learning::load_model(path));
    };

    if (pr->parsed()) {
      const json report = pr_check(config, pr_options);
      Sink{out, report_path}.write(report.dump(2) + "\n");
      return report.at("pass").get<bool>() ? kExitOk : kExitAcceptance;
    }

    if (enh->parsed()) {
      const EnhanceMode mode = parse_enhance_mode(mode_name);
      const MaskSource masks = parse_mask_source(mask_name);
      const SampleFormat format = sample_format();
      const Signal noisy = read_wav(input_path);
      const auto clean = load_optional(clean_path);
      const auto model = load_model_optional(model_path);
      const auto res = enhance(config, mode, masks, noisy, clean ? &*clean : nullptr, model ? &*model : nullptr);
      write_wav(output_path, res.enhanced, format);
      json report{{"schema", "awse.enhance/1"}, {"mode", mode_name}, {"mask", mask_name}, {"output", output_path}};
      if (res.states) {
        std::map<std::string, int> counts;
        for (WindowKind k : kinds_from_states(*res.states)) ++counts[std::string(kind_name(k))];
        report["window_counts"] = counts;
      }
      report["metrics"] = clean ? enhance_metrics(config, *clean, noisy, res.enhanced) : json(nullptr);
      Sink{out, report_path}.write(report.dump(2) + "\n");
      return kExitOk;
    }

    if (seg->parsed()) {
      const Signal clean = read_wav(clean_path);
      const Signal estimate = read_wav(input_path);
      if (frame_len == 0) frame_len = config.l_long / 2;
      if (frame_len < 0) throw std::invalid_argument("--frame-len must be positive");
      Sink{out, output_path}.write(segsdr_csv(clean, estimate, frame_len));
      return kExitOk;
    }

    if (tr->parsed()) {
      const Signal noisy = read_wav(input_path);
      const auto clean = load_optional(clean_path);
      const auto model = load_model_optional(model_path);
      Sink{out, output_path}.write(
          trace_csv(trace_states(config, noisy, clean ? &*clean : nullptr, model ? &*model : nullptr)));
      return kExitOk;
    }

    if (trn->parsed()) {
      const learning::Pipeline pipeline(pipeline_config(config));
      std::vector<learning::PreparedUtterance> corpus;
      if (!pairs_path.empty()) {
        for (const auto& [noisy, clean] : read_pairs(pairs_path)) {
          require_same_length(clean, noisy, "train");
          corpus.push_back(pipeline.prepare(noisy, &clean));
        }
      } else {
        for (const auto& u : make_synthetic_corpus(corpus_config(config), static_cast<std::size_t>(config.corpus_size)))
          corpus.push_back(pipeline.prepare(u.noisy, &u.clean));
      }
      const auto progress = [&](const learning::HistoryRow& r) {
        if (quiet) return;
        err << "stage " << r.stage << " epoch " << r.epoch << " j_wa " << fmt(r.j_wa) << " j_aws " << fmt(r.j_aws)
            << " total " << fmt(r.total) << "\n";
      };
      const auto result = learning::train(pipeline, corpus, train_config(config), progress);
      learning::save_model(model_path, model_record(config, result.models));
      if (!history_path.empty()) write_text(history_path, learning::history_csv(result.history), out);
      const auto scores = learning::score_corpus(pipeline, result.models, corpus, config.lambda);
      const json report{{"schema", "awse.train/1"},
                        {"model", model_path},
                        {"utterances", corpus.size()},
                        {"j_wa_long", scores.wa_long},
                        {"j_wa_short", scores.wa_short},
                        {"j_wa_switched", scores.wa_switched},
                        {"j_aws", scores.aws},
                        {"combined", scores.combined},
                        {"gate_agreement", learning::gate_agreement(result.models, corpus)}};
      Sink{out, report_path}.write(report.dump(2) + "\n");
      return kExitOk;
    }

    if (syn->parsed()) {
      const SampleFormat format = sample_format();
      auto cc = corpus_config(config);
      cc.stationary_only = stationary;
      const int n = count > 0 ? count : config.corpus_size;
      std::filesystem::create_directories(out_dir);
      json files = json::array();
      for (int i = 0; i < n; ++i) {
        const auto u = make_synthetic_utterance(cc, static_cast<std::uint64_t>(i));
        char stem[32];
        std::snprintf(stem, sizeof stem, "%04d", i);
        const auto dir = std::filesystem::path(out_dir);
        const std::string clean = (dir / ("clean_" + std::string(stem) + ".wav")).string();
        const std::string noisy = (dir / ("noisy_" + std::string(stem) + ".wav")).string();
        write_wav(clean, u.clean, format);
        write_wav(noisy, u.noisy, format);
        files.push_back({{"clean", clean}, {"noisy", noisy}});
      }
      out << json{{"schema", "awse.synth/1"}, {"files", files}}.dump(2) << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace awse::cli
