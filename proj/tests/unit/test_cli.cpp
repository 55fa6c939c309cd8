#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "martin_games/cli.hpp"
#include "martin_games/corpus.hpp"
#include "martin_games/game_io.hpp"
#include "martin_games/report.hpp"

using namespace martin_games;

namespace {

std::string data(const std::string& name) { return std::string(MARTIN_GAMES_TEST_DATA) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("martin_games_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<nlohmann::json> lines(const std::string& jsonl) {
  std::vector<nlohmann::json> out;
  std::istringstream in(jsonl);
  for (std::string l; std::getline(in, l);) out.push_back(nlohmann::json::parse(l));
  return out;
}

RunConfig on(const std::string& sub, const std::string& game) {
  RunConfig c;
  c.subcommand = sub;
  c.game_path = data(game);
  return c;
}

}  // namespace

TEST_CASE("hashing") {
  // Published FNV-1a 64 vectors.
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
  CHECK(hash_hex(0xabcULL) == "0000000000000abc");
  CHECK(json_hash({{"b", 1}, {"a", 2}}) == json_hash({{"a", 2}, {"b", 1}}));
}

TEST_CASE("configuration checks") {
  RunConfig c = on("solve-subgame", "constant.json");
  c.epsilon = 0.0;
  CHECK(run(c).exit_code == kExitParse);
  c.epsilon = 1.5;
  CHECK(run(c).exit_code == kExitParse);
  c = on("mediate", "prisoners_dilemma.json");
  c.rollouts = 10;
  CHECK(run(c).exit_code == kExitParse);  // no seed
  c = on("corpus", "");
  CHECK(run(c).exit_code == kExitParse);
  c = on("synth", "prisoners_dilemma.json");
  CHECK(run(c).exit_code == kExitParse);  // no mode
  c = on("bogus", "prisoners_dilemma.json");
  CHECK(run(c).exit_code == kExitParse);
}

TEST_CASE("validate") {
  SUBCASE("malformed JSON reports line and column") {
    const RunResult r = run(on("validate", "malformed.json"));
    CHECK(r.exit_code == kExitParse);
    REQUIRE(r.report);
    const auto recs = lines(r.report->jsonl());
    bool found = false;
    for (const auto& rec : recs)
      if (rec["type"] == "error") {
        found = true;
        CHECK(rec["class"] == "parse");
        CHECK(rec["line"] == 4);
        CHECK(rec["column"].get<int>() >= 1);
      }
    CHECK(found);
    CHECK(r.report->markdown().find("ERROR") != std::string::npos);
  }
  SUBCASE("semantic violations fail the assertion") {
    const RunResult r = run(on("validate", "bad_rows.json"));
    CHECK(r.exit_code == kExitAssertion);
    CHECK(r.report->jsonl().find("row sum") != std::string::npos);
  }
  SUBCASE("other subcommands refuse invalid games") {
    CHECK(run(on("martin", "bad_rows.json")).exit_code == kExitParse);
  }
  SUBCASE("valid game") { CHECK(run(on("validate", "prisoners_dilemma.json")).exit_code == kExitOk); }
}

TEST_CASE("solve-subgame on a constant game") {
  const RunResult r = run(on("solve-subgame", "constant.json"));
  CHECK(r.exit_code == kExitOk);
  int gains = 0;
  for (const auto& rec : lines(r.report->jsonl()))
    if (rec["type"] == "check" && rec.contains("gain")) {
      CHECK(rec["gain"] == 0.0);
      ++gains;
    }
  CHECK(gains == 2);
}

TEST_CASE("reports embed version and hashes, and are deterministic") {
  for (const char* sub : {"values", "martin", "mediate", "solve-subgame"}) {
    CAPTURE(sub);
    RunConfig c = on(sub, "prisoners_dilemma.json");
    c.seed = 5;
    if (std::string(sub) == "mediate") c.rollouts = 200;
    c.out_dir = scratch(std::string(sub) + "_a").string();
    const RunResult a = run(c);
    c.out_dir = scratch(std::string(sub) + "_b").string();
    const RunResult b = run(c);
    CHECK(a.exit_code == kExitOk);
    const std::string ja = slurp(std::filesystem::path(a.report ? c.out_dir : "") / "report.jsonl");
    CHECK(ja == a.report->jsonl());
    CHECK(a.report->jsonl() == b.report->jsonl());
    CHECK(a.report->markdown() == b.report->markdown());
    const auto header = lines(a.report->jsonl()).front();
    CHECK(header["version"] == kToolVersion);
    CHECK(header["config_hash"] == json_hash(config_json(c)));
    CHECK(header["game_hash"] == json_hash(game_to_json(load_game(c.game_path))));
    // The output directory does not enter the configuration hash.
    CHECK(a.report->config_hash() == b.report->config_hash());
  }
}

TEST_CASE("mediate writes a transcript") {
  RunConfig c = on("mediate", "prisoners_dilemma.json");
  c.seed = 2;
  c.rollouts = 100;
  c.out_dir = scratch("transcript").string();
  CHECK(run(c).exit_code == kExitOk);
  const std::string t = slurp(std::filesystem::path(c.out_dir) / "transcript.jsonl");
  CHECK(lines(t).size() == 2);
}

TEST_CASE("corpus") {
  SUBCASE("empty") {
    RunConfig c = on("corpus", "");
    c.game_path.clear();
    c.seed = 1;
    c.count = 0;
    c.out_dir = scratch("empty").string();
    CHECK(run(c).exit_code == kExitOk);
    const auto manifest = nlohmann::json::parse(slurp(std::filesystem::path(c.out_dir) / "manifest.json"));
    CHECK(manifest["games"].empty());
  }
  SUBCASE("zero-sum family, reloaded and checked") {
    RunConfig c = on("corpus", "");
    c.game_path.clear();
    c.seed = 3;
    c.count = 4;
    c.family = "zero-sum-total";
    c.min_players = 3;
    c.out_dir = scratch("zero").string();
    CHECK(run(c).exit_code == kExitOk);
    const auto manifest = nlohmann::json::parse(slurp(std::filesystem::path(c.out_dir) / "manifest.json"));
    REQUIRE(manifest["games"].size() == 4);
    for (const auto& g : manifest["games"]) {
      RunConfig z;
      z.subcommand = "check-zero-sum";
      z.game_path = (std::filesystem::path(c.out_dir) / g["file"].get<std::string>()).string();
      CHECK(run(z).exit_code == kExitOk);
      // Files reload to the generated game.
      const auto doc = random_game_json(g["seed"].get<std::uint64_t>(), corpus_params(c));
      CHECK(json_hash(game_to_json(load_game(z.game_path))) == json_hash(game_to_json(game_from_json(doc))));
    }
  }
  SUBCASE("same seed, same bytes") {
    RunConfig c = on("corpus", "");
    c.game_path.clear();
    c.seed = 9;
    c.count = 3;
    c.out_dir = scratch("det_a").string();
    run(c);
    const std::string a = slurp(std::filesystem::path(c.out_dir) / "manifest.json") +
                          slurp(std::filesystem::path(c.out_dir) / "game_0002.json");
    c.out_dir = scratch("det_b").string();
    run(c);
    const std::string b = slurp(std::filesystem::path(c.out_dir) / "manifest.json") +
                          slurp(std::filesystem::path(c.out_dir) / "game_0002.json");
    CHECK(a == b);
  }
}

TEST_CASE("synth and check-zero-sum") {
  RunConfig c = on("synth", "prisoners_dilemma.json");
  c.mode = "maxmin";
  CHECK(run(c).exit_code == kExitOk);
  c.mode = "acceptable";
  CHECK(run(c).exit_code == kExitOk);
  // Not a zero-sum-total game.
  CHECK(run(on("check-zero-sum", "prisoners_dilemma.json")).exit_code == kExitParse);
}
