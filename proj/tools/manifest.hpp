#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gaugeword::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Records what a run read and wrote. After the command finishes, one
// "<output>.manifest.json" is written beside every output file; runs without
// output files print the manifest as a single JSON line on the error stream.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> argv);

  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_input(const std::string& path) { inputs_.push_back(path); }
  void add_output(const std::string& path) { outputs_.push_back(path); }

  const std::vector<std::string>& outputs() const { return outputs_; }

  // JSON text of the manifest (pretty-printed with `indent` >= 0).
  std::string to_json(int indent) const;

  void emit(std::ostream& err) const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

// FNV-1a 64 of a file's bytes, as 16 lowercase hex digits.
std::string file_digest(const std::string& path);

}  // namespace gaugeword::cli
