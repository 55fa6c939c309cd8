#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace martin_games {

inline constexpr const char* kToolName = "martin-games";
inline constexpr const char* kToolVersion = "0.1.0";

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hash_hex(std::uint64_t h);
// Hash of the compact dump; nlohmann objects keep sorted keys, so equal
// documents hash equally.
std::string json_hash(const nlohmann::json& doc);

// One run's artifacts: JSON-lines records and a markdown summary. No timestamps
// or paths, so identical inputs give identical bytes.
class Report {
 public:
  Report(std::string subcommand, nlohmann::json config, std::string game_hash);

  void add(nlohmann::json record);
  // Check line: fails the report when !ok.
  void check(const std::string& name, bool ok, nlohmann::json details = nlohmann::json::object());
  // Result that is valid but not certified (statistical, widened, bracketed).
  void flag(const std::string& what);
  void note(const std::string& line) { notes_.push_back(line); }
  // Aborted run: the record must carry "message".
  void error(nlohmann::json record);

  bool pass() const { return pass_; }
  bool flagged() const { return !flags_.empty(); }
  const std::string& config_hash() const { return config_hash_; }
  const std::string& game_hash() const { return game_hash_; }
  const std::vector<nlohmann::json>& records() const { return records_; }

  std::string jsonl() const;
  std::string markdown() const;
  // Writes report.jsonl and report.md into dir (created when missing).
  void write(const std::string& dir) const;

 private:
  std::string subcommand_;
  nlohmann::json config_;
  std::string config_hash_;
  std::string game_hash_;
  std::vector<nlohmann::json> records_;
  std::vector<std::pair<std::string, bool>> checks_;
  std::vector<std::string> flags_;
  std::vector<std::string> notes_;
  std::string error_;
  bool pass_ = true;
};

// Writes text to path, creating parent directories.
void write_text(const std::string& path, const std::string& text);

}  // namespace martin_games
