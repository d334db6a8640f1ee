#include "manifest.hpp"

#include <sys/utsname.h>

#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "lstmopt/errors.hpp"
#include "lstmopt/model_io.hpp"

namespace lstmopt::cli {

namespace fs = std::filesystem;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string host_description() {
  utsname u{};
  std::ostringstream out;
  if (uname(&u) == 0) out << u.sysname << ' ' << u.release << ' ' << u.machine << ", ";
  out << std::thread::hardware_concurrency() << " hardware threads";
  return out.str();
}

std::string file_checksum(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0')
      << fnv1a64(bytes.data(), bytes.size());
  return out.str();
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv,
                         std::string config_snapshot)
    : command_(std::move(command)),
      argv_(std::move(argv)),
      config_(std::move(config_snapshot)),
      started_(utc_timestamp()) {}

void RunManifest::write(const fs::path& dir) const {
  nlohmann::json artifacts = nlohmann::json::object();
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename() != "manifest.json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) artifacts[fs::relative(f, dir).string()] = file_checksum(f);

  nlohmann::json j = {{"command", command_},
                      {"argv", argv_},
                      {"config", config_},
                      {"seeds", seeds_},
                      {"artifacts", artifacts},
                      {"tool_version", LSTMOPT_VERSION},
                      {"started_at", started_},
                      {"finished_at", utc_timestamp()},
                      {"host", host_description()}};
  for (const auto& [k, v] : extra_.items()) j[k] = v;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << j.dump(2) << '\n';
}

}  // namespace lstmopt::cli
