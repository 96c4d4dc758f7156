#pragma once

// Run manifests: every output file embeds the command, its full parameter
// set, seed, tool version, and input-file digests, so identical manifests
// give byte-identical outputs.

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace cqkd {

inline constexpr const char* kToolName = "cqkd";
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

struct RunManifest {
  std::string command;
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;  // path -> fnv1a64 hex
  std::string timestamp;  // empty unless the caller asked for one

  Json to_json() const;
};

// FNV-1a 64 digest of a file's bytes, hex encoded.
std::string digest_file(const std::string& path);

// Writes text to path, creating parent directories.
void write_file(const std::string& path, const std::string& text);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace cqkd
