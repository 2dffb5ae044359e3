#include "vpd/bundle.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "vpd/envs.hpp"

namespace vpd {

namespace {

using OrderedJson = nlohmann::ordered_json;

std::string major_version(const std::string& version) {
  const auto dot = version.find('.');
  return dot == std::string::npos ? version : version.substr(0, dot);
}

}  // namespace

std::string bundle_to_json_text(const PolicyBundle& bundle) {
  const DistilledPolicy& dp = bundle.policy;
  OrderedJson j;
  j["format_version"] = kBundleFormatVersion;
  j["environment"] = bundle.environment;
  j["state_dim"] = dp.partition.dim();
  j["action_dim"] = dp.subpolicies.empty() ? 0 : dp.subpolicies[0].action_dim;
  j["codewords"] = dp.partition.codewords();

  OrderedJson subs = OrderedJson::array();
  for (const LinearPolicy& p : dp.subpolicies) {
    OrderedJson rows = OrderedJson::array();
    for (int r = 0; r < p.action_dim; ++r) {
      OrderedJson row = OrderedJson::array();
      for (int c = 0; c < p.state_dim; ++c) row.push_back(p.weight(r, c));
      rows.push_back(std::move(row));
    }
    subs.push_back({{"weights", std::move(rows)}, {"bias", p.bias}});
  }
  j["subpolicies"] = std::move(subs);

  OrderedJson ab = OrderedJson::array();
  for (const Interval& iv : dp.action_bounds) ab.push_back({iv.lo, iv.hi});
  j["action_bounds"] = std::move(ab);

  if (bundle.has_provenance)
    j["provenance"] = {{"seed", bundle.seed},
                       {"config_hash", bundle.config_hash}};
  return j.dump(2) + "\n";
}

PolicyBundle bundle_from_json_text(const std::string& text) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("bundle is not valid JSON: ") +
                                e.what());
  }

  try {
    const std::string version = j.at("format_version").get<std::string>();
    if (major_version(version) != kBundleFormatVersion)
      throw std::invalid_argument("unsupported bundle format version '" +
                                  version + "'");

    PolicyBundle bundle;
    bundle.environment = j.at("environment").get<std::string>();
    const int state_dim = j.at("state_dim").get<int>();
    const int action_dim = j.at("action_dim").get<int>();
    if (state_dim < 1 || action_dim < 1)
      throw std::invalid_argument("bundle dimensions must be positive");

    const auto codewords = j.at("codewords").get<std::vector<Vec>>();
    if (codewords.empty())
      throw std::invalid_argument("bundle has no codewords");
    for (const Vec& cw : codewords)
      if (static_cast<int>(cw.size()) != state_dim)
        throw std::invalid_argument("codeword length does not match state_dim");

    DistilledPolicy dp(state_dim);
    for (const Vec& cw : codewords) dp.partition.insert(cw);

    const auto& subs = j.at("subpolicies");
    if (subs.size() != codewords.size())
      throw std::invalid_argument(
          "subpolicy count does not match codeword count");
    for (const auto& sub : subs) {
      const auto rows = sub.at("weights").get<std::vector<Vec>>();
      const auto bias = sub.at("bias").get<Vec>();
      if (static_cast<int>(rows.size()) != action_dim ||
          static_cast<int>(bias.size()) != action_dim)
        throw std::invalid_argument(
            "subpolicy shape does not match action_dim");
      LinearPolicy p;
      p.state_dim = state_dim;
      p.action_dim = action_dim;
      p.bias = bias;
      p.weights.reserve(static_cast<std::size_t>(state_dim * action_dim));
      for (const Vec& row : rows) {
        if (static_cast<int>(row.size()) != state_dim)
          throw std::invalid_argument(
              "subpolicy weight row does not match state_dim");
        p.weights.insert(p.weights.end(), row.begin(), row.end());
      }
      dp.subpolicies.push_back(std::move(p));
    }

    const auto bounds = j.at("action_bounds").get<std::vector<Vec>>();
    if (static_cast<int>(bounds.size()) != action_dim)
      throw std::invalid_argument(
          "action_bounds length does not match action_dim");
    for (const Vec& iv : bounds) {
      if (iv.size() != 2 || !(iv[0] <= iv[1]))
        throw std::invalid_argument("malformed action bound interval");
      dp.action_bounds.push_back({iv[0], iv[1]});
    }

    bundle.policy = std::move(dp);
    if (j.contains("provenance")) {
      bundle.has_provenance = true;
      bundle.seed = j.at("provenance").at("seed").get<std::uint64_t>();
      bundle.config_hash =
          j.at("provenance").at("config_hash").get<std::string>();
    }
    return bundle;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed bundle: ") + e.what());
  }
}

void save_bundle(const PolicyBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
  out << bundle_to_json_text(bundle);
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

PolicyBundle load_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return bundle_from_json_text(buf.str());
}

namespace {

std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string codeword_label(const Vec& cw) {
  std::string out = "(";
  for (std::size_t i = 0; i < cw.size(); ++i) {
    if (i) out += ", ";
    out += fmt_coord(cw[i]);
  }
  out += ")";
  return out;
}

}  // namespace

std::string render_inspect_table(const PolicyBundle& bundle) {
  const DistilledPolicy& dp = bundle.policy;
  const int action_dim = dp.subpolicies.empty() ? 0 : dp.subpolicies[0].action_dim;

  std::vector<std::string> state_names, action_names;
  try {
    const auto env = make_env(bundle.environment);
    state_names = env->spec().state_names;
    action_names = env->spec().action_names;
  } catch (const std::invalid_argument&) {
    for (int i = 0; i < dp.partition.dim(); ++i)
      state_names.push_back("s" + std::to_string(i));
    for (int i = 0; i < action_dim; ++i)
      action_names.push_back("a" + std::to_string(i));
  }

  std::string head;
  head += "environment: " + bundle.environment + "\n";
  head += "cells: " + std::to_string(dp.size()) + "\n";
  head += "state_dim: " + std::to_string(dp.partition.dim()) + "\n";
  head += "action_dim: " + std::to_string(action_dim) + "\n";
  if (bundle.has_provenance) {
    head += "seed: " + std::to_string(bundle.seed) + "\n";
    head += "config_hash: " + bundle.config_hash + "\n";
  }
  head += "\n";

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"cell", "codeword"};
  for (const std::string& name : action_names) header.push_back(name);
  rows.push_back(header);
  for (int k = 0; k < dp.size(); ++k) {
    std::vector<std::string> row{std::to_string(k),
                                 codeword_label(dp.partition.coords(k))};
    for (int r = 0; r < action_dim; ++r)
      row.push_back(format_formula(dp.subpolicies[static_cast<std::size_t>(k)],
                                   r, state_names));
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> widths(rows[0].size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());

  std::string out = head;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += row[c];
      if (c + 1 < row.size())
        line += std::string(widths[c] - row[c].size(), ' ');
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace vpd
