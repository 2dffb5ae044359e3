#include "vpd/teachers.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vpd/envs.hpp"

namespace vpd {

namespace {

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kIdentity: return "identity";
  }
  return "identity";
}

Activation parse_activation(const std::string& name, int layer_idx) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  throw std::invalid_argument("layer " + std::to_string(layer_idx) +
                              ": unknown activation '" + name + "'");
}

}  // namespace

MlpTeacher::MlpTeacher(std::vector<MlpLayer> layers, bool squash_output,
                       int state_dim, int action_dim)
    : layers_(std::move(layers)),
      squash_output_(squash_output),
      state_dim_(state_dim),
      action_dim_(action_dim) {
  if (layers_.empty()) throw std::invalid_argument("teacher has no layers");
  int prev = state_dim_;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const MlpLayer& l = layers_[i];
    if (l.in_dim != prev)
      throw std::invalid_argument("layer " + std::to_string(i) +
                                  ": input dim " + std::to_string(l.in_dim) +
                                  " does not match previous output " +
                                  std::to_string(prev));
    if (l.weights.size() != static_cast<std::size_t>(l.in_dim) * l.out_dim ||
        l.bias.size() != static_cast<std::size_t>(l.out_dim))
      throw std::invalid_argument("layer " + std::to_string(i) +
                                  ": weight/bias shape mismatch");
    prev = l.out_dim;
  }
  if (prev != action_dim_)
    throw std::invalid_argument("final layer output " + std::to_string(prev) +
                                " does not match action_dim " +
                                std::to_string(action_dim_));
}

Vec MlpTeacher::act(const Vec& state) const {
  if (static_cast<int>(state.size()) != state_dim_)
    throw std::invalid_argument("teacher_act: dimension mismatch");
  Vec cur = state;
  for (const MlpLayer& l : layers_) {
    Vec next(static_cast<std::size_t>(l.out_dim));
    for (int o = 0; o < l.out_dim; ++o) {
      double acc = l.bias[static_cast<std::size_t>(o)];
      const double* row = l.weights.data() + static_cast<std::size_t>(o) * l.in_dim;
      for (int j = 0; j < l.in_dim; ++j) acc += row[j] * cur[static_cast<std::size_t>(j)];
      switch (l.activation) {
        case Activation::kRelu: acc = acc > 0.0 ? acc : 0.0; break;
        case Activation::kTanh: acc = std::tanh(acc); break;
        case Activation::kIdentity: break;
      }
      next[static_cast<std::size_t>(o)] = acc;
    }
    cur = std::move(next);
  }
  if (squash_output_)
    for (double& v : cur) v = std::tanh(v);
  return cur;
}

MlpTeacher MlpTeacher::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("teacher file is not valid JSON: ") + e.what());
  }
  try {
    const int state_dim = doc.at("state_dim").get<int>();
    const int action_dim = doc.at("action_dim").get<int>();
    const bool squash = doc.at("squash_output").get<bool>();
    std::vector<MlpLayer> layers;
    int idx = 0;
    for (const auto& jl : doc.at("layers")) {
      MlpLayer l;
      const auto& w = jl.at("w");
      l.out_dim = static_cast<int>(w.size());
      if (l.out_dim == 0)
        throw std::invalid_argument("layer " + std::to_string(idx) + ": empty weight matrix");
      l.in_dim = static_cast<int>(w.at(0).size());
      for (const auto& row : w) {
        if (static_cast<int>(row.size()) != l.in_dim)
          throw std::invalid_argument("layer " + std::to_string(idx) +
                                      ": ragged weight rows");
        for (const auto& v : row) l.weights.push_back(v.get<double>());
      }
      l.bias = jl.at("b").get<Vec>();
      l.activation = parse_activation(jl.at("act").get<std::string>(), idx);
      layers.push_back(std::move(l));
      ++idx;
    }
    return MlpTeacher(std::move(layers), squash, state_dim, action_dim);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed teacher file: ") + e.what());
  }
}

MlpTeacher MlpTeacher::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open teacher file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string MlpTeacher::to_json_text() const {
  nlohmann::json doc;
  doc["state_dim"] = state_dim_;
  doc["action_dim"] = action_dim_;
  doc["squash_output"] = squash_output_;
  auto& layers = doc["layers"] = nlohmann::json::array();
  for (const MlpLayer& l : layers_) {
    nlohmann::json jl;
    auto& w = jl["w"] = nlohmann::json::array();
    for (int o = 0; o < l.out_dim; ++o) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < l.in_dim; ++j)
        row.push_back(l.weights[static_cast<std::size_t>(o * l.in_dim + j)]);
      w.push_back(std::move(row));
    }
    jl["b"] = l.bias;
    jl["act"] = activation_name(l.activation);
    layers.push_back(std::move(jl));
  }
  return doc.dump(2) + "\n";
}

void MlpTeacher::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write teacher file '" + path + "'");
  out << to_json_text();
}

Vec SimpleGoalPotentialField::act(const Vec& state) const {
  if (state.size() != 2)
    throw std::invalid_argument("teacher_act: dimension mismatch");
  const double gx = simplegoal::kGoalCenterX - state[0];
  const double gy = simplegoal::kGoalCenterY - state[1];
  const double dg = std::hypot(gx, gy);
  double ax = 0.0, ay = 0.0;
  if (dg > 1e-12) {
    ax = gx / dg;
    ay = gy / dg;
  }
  const double px = state[0] - 0.5;
  const double py = state[1] - 0.5;
  const double dp = std::hypot(px, py);
  if (dp > 1e-12 && dp < cutoff_) {
    const double mag = gain_ * (1.0 / dp - 1.0 / cutoff_) / (dp * dp);
    ax += mag * px / dp;
    ay += mag * py / dp;
  }
  return {clamp(ax, -1.0, 1.0), clamp(ay, -1.0, 1.0)};
}

std::unique_ptr<Teacher> make_teacher(const std::string& source) {
  if (source.rfind("oracle:", 0) == 0) {
    const std::string tag = source.substr(7);
    if (tag == "simplegoal_potential_field")
      return std::make_unique<SimpleGoalPotentialField>();
    if (tag == "mountaincar_energy")
      return std::make_unique<MountainCarEnergy>();
    throw std::invalid_argument("unknown oracle tag '" + tag + "'");
  }
  if (source.rfind("file:", 0) == 0)
    return std::make_unique<MlpTeacher>(MlpTeacher::load(source.substr(5)));
  throw std::invalid_argument(
      "teacher source must be 'oracle:<tag>' or 'file:<path>', got '" + source + "'");
}

}  // namespace vpd
