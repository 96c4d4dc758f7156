#include "cqkd/manifest.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cqkd/rng.hpp"
#include "cqkd/tolerances.hpp"

namespace cqkd {

Json RunManifest::to_json() const {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["parameters"] = parameters;
  j["seed"] = seed;
  if (!input_digests.empty()) {
    Json d = Json::object();
    for (const auto& [path, digest] : input_digests) d[path] = digest;
    j["inputs"] = d;
  }
  if (!timestamp.empty()) j["timestamp"] = timestamp;
  return j;
}

std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("digest: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return hex;
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace cqkd
