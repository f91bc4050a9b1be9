#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pcanon::cli {

// Bumped whenever a command's output could change; cache files written by
// another version are ignored.
inline constexpr int kAlgorithmVersion = 3;

enum class Format { Json, Csv, Text };

struct JobSpec {
  std::string command;
  std::string type;      // named Cartan type or group ("A2", "A1~", "SL2")
  std::string gcm_file;  // JSON file with {"type": ...} or {"matrix": ...}
  std::vector<std::string> order;
  unsigned long prime = 0;
  long max_length = 3;
  long weight_bound = 0;
  std::vector<std::string> parabolic;
  std::string left, right;
  std::string method = "hecke";
  Format format = Format::Text;
  std::string cache_dir;
  int threads = 0;
};

// A command result: cells are strings so that every format renders the
// same values.
struct Table {
  std::string command;
  nlohmann::json parameters;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  nlohmann::json to_json() const;
  static Table from_json(const nlohmann::json& j);
  friend bool operator==(const Table&, const Table&) = default;
};

Table cmd_kl(const JobSpec& spec);
Table cmd_pkl(const JobSpec& spec);
Table cmd_antispherical(const JobSpec& spec);
Table cmd_tilt(const JobSpec& spec);
Table cmd_pairing(const JobSpec& spec);
Table cmd_selftest(const JobSpec& spec);

// Dispatches on spec.command, going through the cache when one is set.
Table run_command(const JobSpec& spec);

std::string render(const Table& t, Format f);

// Cache lookups keyed by everything that determines a table.
nlohmann::json cache_key(const JobSpec& spec);
std::optional<Table> cache_load(const std::string& dir, const nlohmann::json& key);
void cache_store(const std::string& dir, const nlohmann::json& key, const Table& t);

// Full command line handling; returns the process exit code (0 success,
// 1 input error, 2 resource cap, 3 internal inconsistency).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pcanon::cli
