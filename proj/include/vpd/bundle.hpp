#pragma once

#include <cstdint>
#include <string>

#include "vpd/distiller.hpp"

namespace vpd {

/// Serializable distilled-policy artifact. The JSON layout is versioned;
/// loading rejects any unknown major version.
struct PolicyBundle {
  std::string environment;
  DistilledPolicy policy;
  bool has_provenance = false;
  std::uint64_t seed = 0;
  std::string config_hash;

  PolicyBundle() : policy(1) {}
  PolicyBundle(std::string env_name, DistilledPolicy p)
      : environment(std::move(env_name)), policy(std::move(p)) {}
};

inline constexpr const char* kBundleFormatVersion = "1";

std::string bundle_to_json_text(const PolicyBundle& bundle);
PolicyBundle bundle_from_json_text(const std::string& text);

void save_bundle(const PolicyBundle& bundle, const std::string& path);
PolicyBundle load_bundle(const std::string& path);

/// Human-readable cell table: index, codeword, and one affine formula per
/// action dimension, using the environment's variable names when available.
std::string render_inspect_table(const PolicyBundle& bundle);

}  // namespace vpd
