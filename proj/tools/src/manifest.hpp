#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace lstmopt::cli {

// Provenance record; each output directory holds exactly one manifest.json,
// the only place where timestamps appear.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> argv, std::string config_snapshot);

  void set(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }
  void add_seed(const std::string& name, std::uint64_t seed) { seeds_[name] = seed; }

  // Hashes every regular file under dir (except the manifest itself) and
  // writes dir/manifest.json.
  void write(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::string config_;
  std::string started_;
  nlohmann::json seeds_ = nlohmann::json::object();
  nlohmann::json extra_ = nlohmann::json::object();
};

std::string utc_timestamp();
std::string host_description();
std::string file_checksum(const std::filesystem::path& path);

}  // namespace lstmopt::cli
