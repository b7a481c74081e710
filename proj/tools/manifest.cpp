#include "manifest.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>

#include <json.hpp>

#include "gaugeword/error.hpp"
#include "gaugeword/format.hpp"

namespace gaugeword::cli {

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)),
      argv_(std::move(argv)),
      start_(std::chrono::steady_clock::now()) {}

std::string RunManifest::to_json(int indent) const {
  using nlohmann::json;
  json j;
  j["command"] = command_;
  j["argv"] = argv_;
  j["seed"] = seed_ ? json(*seed_) : json(nullptr);
  j["inputs"] = json::array();
  for (const auto& p : inputs_) {
    j["inputs"].push_back({{"path", p}, {"fnv1a64", file_digest(p)}});
  }
  j["outputs"] = json::array();
  for (const auto& p : outputs_) {
    j["outputs"].push_back({{"path", p}, {"fnv1a64", file_digest(p)}});
  }
  j["tool_version"] = kToolVersion;
  j["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
          .count();
  return j.dump(indent);
}

void RunManifest::emit(std::ostream& err) const {
  if (outputs_.empty()) {
    err << "manifest: " << to_json(-1) << '\n';
    return;
  }
  const std::string text = to_json(2);
  for (const auto& p : outputs_) {
    std::ofstream out(p + ".manifest.json", std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write manifest for " + p);
    out << text << '\n';
  }
}

}  // namespace gaugeword::cli
