// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "awse/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "awse/windows.hpp"

namespace awse {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("not a number: '" + text + "'");
  return value;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

template <typename T>
std::string format_number(T v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

struct Field {
  Setter set;
  Getter get;
};

template <typename T>
Field numeric(T RunConfig::*member) {
  return Field{[member](RunConfig& c, const std::string& v) { c.*member = parse_number<T>(v); },
               [member](const RunConfig& c) { return format_number(c.*member); }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      {"l_long", numeric(&RunConfig::l_long)},
      {"l_short", numeric(&RunConfig::l_short)},
      {"context_r", numeric(&RunConfig::context_r)},
      {"tau", numeric(&RunConfig::tau)},
      {"lambda", numeric(&RunConfig::lambda)},
      {"seed", numeric(&RunConfig::seed)},
      {"amp_floor", numeric(&RunConfig::amp_floor)},
      {"oracle_mode",
       Field{[](RunConfig& c, const std::string& v) {
               try {
                 c.oracle_mode = learning::parse_oracle_mode(v);
               } catch (const std::invalid_argument& e) {
                 throw ConfigError(e.what());
               }
             },
             [](const RunConfig& c) { return learning::oracle_mode_name(c.oracle_mode); }}},
      {"hidden_units", numeric(&RunConfig::hidden_units)},
      {"gate_hidden_units", numeric(&RunConfig::gate_hidden_units)},
      {"learning_rate", numeric(&RunConfig::learning_rate)},
      {"gate_learning_rate", numeric(&RunConfig::gate_learning_rate)},
      {"pretrain_epochs", numeric(&RunConfig::pretrain_epochs)},
      {"gate_epochs", numeric(&RunConfig::gate_epochs)},
      {"finetune_epochs", numeric(&RunConfig::finetune_epochs)},
      {"grad_clip", numeric(&RunConfig::grad_clip)},
      {"finetune_grad_clip", numeric(&RunConfig::finetune_grad_clip)},
      {"corpus_size", numeric(&RunConfig::corpus_size)},
      {"duration_sec", numeric(&RunConfig::duration_sec)},
      {"snr_db", numeric(&RunConfig::snr_db)},
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  try {
    SwitchGeometry(l_long, l_short);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (context_r < 0) throw ConfigError("context_r must be non-negative");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be non-negative");
  if (!(amp_floor > 0.0)) throw ConfigError("amp_floor must be positive");
  if (hidden_units <= 0) throw ConfigError("hidden_units must be positive");
  if (gate_hidden_units < 0) throw ConfigError("gate_hidden_units must be non-negative");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(gate_learning_rate >= 0.0)) throw ConfigError("gate_learning_rate must be non-negative");
  if (pretrain_epochs < 0 || gate_epochs < 0 || finetune_epochs < 0) throw ConfigError("epoch counts must be non-negative");
  if (!(grad_clip >= 0.0)) throw ConfigError("grad_clip must be non-negative");
  if (!(finetune_grad_clip >= 0.0)) throw ConfigError("finetune_grad_clip must be non-negative");
  if (corpus_size <= 0) throw ConfigError("corpus_size must be positive");
  if (!(duration_sec > 0.0)) throw ConfigError("duration_sec must be positive");
  if (!std::isfinite(snr_db)) throw ConfigError("snr_db must be finite");
}

void apply_config_text(RunConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '-', '_');
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
    try {
      it->second.set(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(number) + ": " + key + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(config, buf.str());
}

std::string to_config_text(const RunConfig& config) {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(config) + "\n";
  return out;
}

}  // namespace awse
