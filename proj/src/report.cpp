#include "martin_games/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "martin_games/errors.hpp"

namespace martin_games {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string json_hash(const nlohmann::json& doc) { return hash_hex(fnv1a(doc.dump())); }

Report::Report(std::string subcommand, nlohmann::json config, std::string game_hash)
    : subcommand_(std::move(subcommand)),
      config_(std::move(config)),
      config_hash_(json_hash(config_)),
      game_hash_(std::move(game_hash)) {}

void Report::add(nlohmann::json record) { records_.push_back(std::move(record)); }

void Report::check(const std::string& name, bool ok, nlohmann::json details) {
  details["type"] = "check";
  details["name"] = name;
  details["pass"] = ok;
  records_.push_back(std::move(details));
  checks_.emplace_back(name, ok);
  pass_ = pass_ && ok;
}

void Report::flag(const std::string& what) {
  flags_.push_back(what);
  records_.push_back({{"type", "flag"}, {"message", what}});
}

void Report::error(nlohmann::json record) {
  error_ = record.value("message", std::string("error"));
  record["type"] = "error";
  records_.push_back(std::move(record));
  pass_ = false;
}

std::string Report::jsonl() const {
  std::ostringstream out;
  const nlohmann::json header = {{"type", "header"},          {"tool", kToolName},
                                 {"version", kToolVersion},   {"subcommand", subcommand_},
                                 {"config_hash", config_hash_}, {"game_hash", game_hash_},
                                 {"config", config_}};
  out << header.dump() << '\n';
  for (const auto& r : records_) out << r.dump() << '\n';
  const nlohmann::json verdict = {
      {"type", "verdict"}, {"pass", pass_}, {"flagged", flagged()}, {"error", !error_.empty()}};
  out << verdict.dump() << '\n';
  return out.str();
}

std::string Report::markdown() const {
  std::ostringstream out;
  out << "# " << kToolName << ' ' << subcommand_ << "\n\n";
  out << "- version: " << kToolVersion << '\n';
  out << "- config hash: " << config_hash_ << '\n';
  out << "- game hash: " << game_hash_ << '\n';
  out << "- verdict: " << (!error_.empty() ? "ERROR" : pass_ ? "PASS" : "FAIL") << (flagged() ? " (flagged)" : "")
      << "\n";
  if (!error_.empty()) out << "- error: " << error_ << '\n';
  if (!checks_.empty()) {
    out << "\n| check | result |\n|---|---|\n";
    for (const auto& [name, ok] : checks_) out << "| " << name << " | " << (ok ? "pass" : "FAIL") << " |\n";
  }
  if (!flags_.empty()) {
    out << "\nFlags:\n\n";
    for (const auto& f : flags_) out << "- " << f << '\n';
  }
  if (!notes_.empty()) {
    out << '\n';
    for (const auto& n : notes_) out << n << '\n';
  }
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InvalidInputError("cannot write " + path);
  f << text;
}

void Report::write(const std::string& dir) const {
  write_text((std::filesystem::path(dir) / "report.jsonl").string(), jsonl());
  write_text((std::filesystem::path(dir) / "report.md").string(), markdown());
}

}  // namespace martin_games
