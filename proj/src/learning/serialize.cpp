// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "awse/learning/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace awse::learning {
namespace {

using nlohmann::json;

json network_to_json(const Mlp& m, const std::string& kind) {
  json j;
  j["kind"] = kind;
  j["layer_sizes"] = m.layer_sizes;
  j["output"] = m.output == OutputActivation::Sigmoid ? "sigmoid" : "linear";
  j["input_shift"] = std::vector<double>(m.input_shift.data(), m.input_shift.data() + m.input_shift.size());
  j["input_scale"] = std::vector<double>(m.input_scale.data(), m.input_scale.data() + m.input_scale.size());
  json weights = json::array(), biases = json::array();
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    // Row-major flattening.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w = m.weights[l];
    weights.push_back(std::vector<double>(w.data(), w.data() + w.size()));
    biases.push_back(std::vector<double>(m.biases[l].data(), m.biases[l].data() + m.biases[l].size()));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  return j;
}

Mlp network_from_json(const json& j) {
  Mlp m;
  m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  if (m.layer_sizes.size() < 2) throw std::runtime_error("model file: network needs at least two layers");
  const auto output = j.at("output").get<std::string>();
  if (output == "sigmoid") m.output = OutputActivation::Sigmoid;
  else if (output == "linear") m.output = OutputActivation::Linear;
  else throw std::runtime_error("model file: unknown output activation " + output);
  const auto shift = j.at("input_shift").get<std::vector<double>>();
  const auto scale = j.at("input_scale").get<std::vector<double>>();
  const auto in = static_cast<std::size_t>(m.layer_sizes.front());
  if (shift.size() != in || scale.size() != in) throw std::runtime_error("model file: standardization size mismatch");
  m.input_shift = Eigen::Map<const Vec>(shift.data(), static_cast<Eigen::Index>(in));
  m.input_scale = Eigen::Map<const Vec>(scale.data(), static_cast<Eigen::Index>(in));
  const auto& weights = j.at("weights");
  const auto& biases = j.at("biases");
  if (weights.size() + 1 != m.layer_sizes.size() || biases.size() + 1 != m.layer_sizes.size())
    throw std::runtime_error("model file: layer count mismatch");
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    const auto w = weights[l].get<std::vector<double>>();
    const auto b = biases[l].get<std::vector<double>>();
    const int rows = m.layer_sizes[l + 1], cols = m.layer_sizes[l];
    if (w.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) ||
        b.size() != static_cast<std::size_t>(rows))
      throw std::runtime_error("model file: parameter array size mismatch");
    m.weights.push_back(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        w.data(), rows, cols));
    m.biases.push_back(Eigen::Map<const Vec>(b.data(), rows));
  }
  return m;
}

}  // namespace

std::string to_text(const ModelRecord& r) {
  json j;
  j["schema"] = kModelSchema;
  j["l_long"] = r.pipeline.geometry.long_len;
  j["l_short"] = r.pipeline.geometry.short_len;
  j["context_r"] = r.pipeline.context_radius;
  j["amp_floor"] = r.pipeline.amp_floor;
  j["tau"] = r.tau;
  j["lambda"] = r.lambda;
  j["seed"] = r.seed;
  j["oracle_mode"] = oracle_mode_name(r.oracle_mode);
  json masks = json::array();
  for (int k = 0; k < 4; ++k)
    masks.push_back(network_to_json(r.models.masks[static_cast<std::size_t>(k)],
                                    std::string(kind_name(static_cast<WindowKind>(k)))));
  j["masks"] = std::move(masks);
  j["gate"] = network_to_json(r.models.gate, "gate");
  return j.dump(1) + "\n";
}

ModelRecord from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("model file: ") + e.what());
  }
  if (j.value("schema", "") != kModelSchema)
    throw std::runtime_error("model file: expected schema " + std::string(kModelSchema));
  ModelRecord r;
  try {
    r.pipeline.geometry = SwitchGeometry(j.at("l_long").get<Eigen::Index>(), j.at("l_short").get<Eigen::Index>());
    r.pipeline.context_radius = j.at("context_r").get<int>();
    r.pipeline.amp_floor = j.at("amp_floor").get<double>();
    r.tau = j.at("tau").get<double>();
    r.lambda = j.at("lambda").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.oracle_mode = parse_oracle_mode(j.at("oracle_mode").get<std::string>());
    const auto& masks = j.at("masks");
    if (masks.size() != 4) throw std::runtime_error("model file: need 4 mask networks");
    for (std::size_t k = 0; k < 4; ++k) r.models.masks[k] = network_from_json(masks[k]);
    r.models.gate = network_from_json(j.at("gate"));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("model file: ") + e.what());
  }
  return r;
}

void save_model(const std::string& path, const ModelRecord& record) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << to_text(record);
  if (!out) throw std::runtime_error("write failed: " + path);
}

ModelRecord load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

}  // namespace awse::learning
