#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ranksentinel/cli.hpp"
#include "ranksentinel/errors.hpp"

using namespace ranksentinel;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ranksentinel_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RANKSENTINEL_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// The subset of JSON Schema used by schema/report.schema.json.
void validate(const json& v, const json& s, const std::string& where, std::vector<std::string>& errs) {
  auto type_ok = [&](const std::string& t) {
    if (t == "null") return v.is_null();
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    return false;
  };
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (const auto& t : s["type"]) ok = ok || type_ok(t.get<std::string>());
    } else {
      ok = type_ok(s["type"].get<std::string>());
    }
    if (!ok) {
      errs.push_back(where + ": wrong type");
      return;
    }
  }
  if (s.contains("const") && v != s["const"]) errs.push_back(where + ": const mismatch");
  if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end()) {
    errs.push_back(where + ": not in enum");
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (s.contains("minimum") && x < s["minimum"].get<double>()) errs.push_back(where + ": below minimum");
    if (s.contains("maximum") && x > s["maximum"].get<double>()) errs.push_back(where + ": above maximum");
    if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>()) {
      errs.push_back(where + ": not above exclusiveMinimum");
    }
  }
  if (s.contains("oneOf")) {
    int matches = 0;
    for (const auto& alt : s["oneOf"]) {
      std::vector<std::string> sub;
      validate(v, alt, where, sub);
      matches += sub.empty();
    }
    if (matches != 1) errs.push_back(where + ": oneOf matched " + std::to_string(matches));
  }
  if (v.is_object()) {
    for (const auto& key : s.value("required", json::array())) {
      if (!v.contains(key.get<std::string>())) errs.push_back(where + ": missing " + key.get<std::string>());
    }
    const auto props = s.value("properties", json::object());
    for (const auto& [key, value] : v.items()) {
      if (props.contains(key)) {
        validate(value, props[key], where + "." + key, errs);
      } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
        errs.push_back(where + ": unexpected " + key);
      }
    }
  }
  if (v.is_array() && s.contains("items")) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      validate(v[i], s["items"], where + "[" + std::to_string(i) + "]", errs);
    }
  }
}

std::vector<std::string> schema_errors(const json& report) {
  const auto schema = json::parse(slurp(fs::path(RANKSENTINEL_SOURCE_DIR) / "schema" / "report.schema.json"));
  std::vector<std::string> errs;
  validate(report, schema, "$", errs);
  return errs;
}

SyntheticSpec small_spec(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_features = 500;
  spec.contaminated = 4;
  spec.seed = seed;
  return spec;
}

RunConfig config_for(const fs::path& dir) {
  RunConfig c;
  c.matrix = dir / "matrix.tsv";
  c.labels = dir / "labels.tsv";
  c.output_dir = dir / "out";
  c.normalize = false;
  return c;
}

}  // namespace

TEST_CASE("csv numbers carry six significant digits") {
  CHECK(csv_number(0.0115129) == "0.0115129");
  CHECK(csv_number(1234567.0) == "1.23457e+06");
  CHECK(csv_number(0.0) == "0");
}

TEST_CASE("generate is deterministic for a seed") {
  auto dir = scratch("generate");
  run_generate(small_spec(7), dir / "a.tsv", dir / "a_labels.tsv");
  run_generate(small_spec(7), dir / "b.tsv", dir / "b_labels.tsv");
  run_generate(small_spec(8), dir / "c.tsv", dir / "c_labels.tsv");
  CHECK(slurp(dir / "a.tsv") == slurp(dir / "b.tsv"));
  CHECK(slurp(dir / "a_labels.tsv") == slurp(dir / "b_labels.tsv"));
  CHECK(slurp(dir / "a.tsv") != slurp(dir / "c.tsv"));

  auto bad = small_spec(1);
  bad.contaminated = 60;
  CHECK_THROWS_AS(run_generate(bad, dir / "x.tsv", dir / "y.tsv"), InputError);
  bad = small_spec(1);
  bad.signal_features = 501;
  CHECK_THROWS_AS(run_generate(bad, dir / "x.tsv", dir / "y.tsv"), InputError);
}

TEST_CASE("detect end to end") {
  auto dir = scratch("detect");
  run_generate(small_spec(3), dir / "matrix.tsv", dir / "labels.tsv");
  auto config = config_for(dir);
  config.fixed_weights = FixedScheme::roc;
  auto result = run_detect(config);

  const auto out = config.output_dir;
  for (const char* f : {"original_ranking.csv", "loo_ranks.csv", "weights.csv", "influence.csv",
                        "report.json", "detect.svg", "fixed_weights.svg"}) {
    CHECK(fs::exists(out / f));
  }
  REQUIRE(result.scores.report);
  CHECK(result.scores.report->flagged == 4);

  const auto report = json::parse(slurp(out / "report.json"));
  CHECK(schema_errors(report).empty());
  for (const auto& e : schema_errors(report)) MESSAGE(e);
  CHECK(report["status"] == "ok");
  CHECK(report["flagged"]["case"] == 5);
  CHECK(report["flagged"]["sample_id"] == "obs5");
  CHECK(report["flagged"]["status"] == "candidate");
  CHECK(report["kappa"]["fitted"] == true);
  CHECK(report["kappa"]["value"].get<double>() == result.analysis.fit->model.kappa());
  CHECK(report["n_cases"] == 60);
  CHECK(report["m"] == 200);
  CHECK(report["config"]["top_m"] == 200);
  CHECK_FALSE(report["config"].contains("threads"));

  SUBCASE("tables round-trip at printed precision") {
    auto influence = read_csv(out / "influence.csv");
    REQUIRE(influence.size() == 61);
    CHECK(influence[0] == std::vector<std::string>{"case", "sample_id", "raw", "standardized"});
    for (std::size_t i = 0; i < 60; ++i) {
      const auto& row = influence[i + 1];
      CHECK(row[0] == std::to_string(i + 1));
      const double raw = std::stod(row[2]);
      CHECK(csv_number(raw) == row[2]);
      CHECK(row[2] == csv_number(result.scores.raw[i]));
      CHECK(std::abs(raw - result.scores.raw[i]) <= 5e-6 * std::abs(result.scores.raw[i]));
      CHECK(row[3] == csv_number(result.scores.report->std_scores[i]));
    }
    auto ranking = read_csv(out / "original_ranking.csv");
    REQUIRE(ranking.size() == 201);
    const auto& original = result.analysis.loo.original();
    for (std::size_t k = 0; k < 200; ++k) {
      CHECK(ranking[k + 1][0] == original.feature_ids[k]);
      CHECK(ranking[k + 1][1] == std::to_string(k + 1));
      CHECK(ranking[k + 1][2] == csv_number(original.t[k]));
    }
    auto loo = read_csv(out / "loo_ranks.csv");
    REQUIRE(loo.size() == 201);
    REQUIRE(loo[0].size() == 62);
    for (std::size_t k = 0; k < 200; k += 13) {
      for (std::size_t i = 0; i < 60; i += 7) {
        CHECK(std::stoul(loo[k + 1][i + 2]) == result.analysis.loo.ranks(i)[k]);
      }
    }
    auto weights = read_csv(out / "weights.csv");
    REQUIRE(weights.size() == 201);
    CHECK(std::stod(weights[1][1]) == doctest::Approx(result.analysis.model->weight(1)).epsilon(1e-5));
  }
}

TEST_CASE("fixed kappa reproduces the 0.010 weight column") {
  auto dir = scratch("fixed_kappa");
  run_generate(small_spec(4), dir / "matrix.tsv", dir / "labels.tsv");
  auto config = config_for(dir);
  config.analysis.kappa = 0.010;
  auto result = run_detect(config);
  CHECK_FALSE(result.analysis.fit);
  auto weights = read_csv(config.output_dir / "weights.csv");
  CHECK(weights[1][0] == "1");
  CHECK(weights[1][1].rfind("0.0115", 0) == 0);
  CHECK(weights[20][1].rfind("0.0095", 0) == 0);
  const auto report = json::parse(slurp(config.output_dir / "report.json"));
  CHECK(report["kappa"]["fitted"] == false);
  CHECK(report["kappa"]["rounded"] == 0.01);
  CHECK(report["kappa"]["r_squared"].is_null());
  CHECK(schema_errors(report).empty());
}

TEST_CASE("no rank changes is a clean success") {
  ExpressionMatrix x;
  x.feature_ids = {"strong", "noise_a", "noise_b"};
  for (int s = 0; s < 10; ++s) {
    x.sample_ids.push_back("s" + std::to_string(s));
    x.labels.push_back(s < 5 ? Group::tumor : Group::control);
  }
  for (int s = 0; s < 10; ++s) x.values.push_back(s < 5 ? 1000 + s : 10 + s);
  for (int s = 0; s < 10; ++s) x.values.push_back(50 + (s * 7) % 5);
  for (int s = 0; s < 10; ++s) x.values.push_back(60 + (s * 3) % 4);
  auto dir = scratch("no_change");
  RunConfig config;
  config.output_dir = dir;
  config.analysis.top_m = 1;
  auto result = run_detect(x, config);
  CHECK(result.analysis.no_changes());
  CHECK_FALSE(result.scores.report);
  const auto report = json::parse(slurp(dir / "report.json"));
  CHECK(report["status"] == "no_rank_changes");
  CHECK(report["flagged"].is_null());
  CHECK(report["kappa"]["value"].is_null());
  CHECK(schema_errors(report).empty());
  for (const auto& e : schema_errors(report)) MESSAGE(e);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.balance_ratio = 2;
  CHECK_THROWS_AS(validate(c), InputError);
  c.seed = 1;
  CHECK_NOTHROW(validate(c));
  RunConfig k;
  k.analysis.kappa = -1;
  CHECK_THROWS_AS(validate(k), InputError);
  RunConfig bracket;
  bracket.analysis.fit.kappa_min = 2;
  bracket.analysis.fit.kappa_max = 1;
  CHECK_THROWS_AS(validate(bracket), InputError);
}

TEST_CASE("error kinds map to exit codes") {
  CHECK(InputError("x").exit_code() == 2);
  CHECK(DegenerateError("x").exit_code() == 3);
  CHECK(OptimizationError("x").exit_code() == 4);
  RankChangeSet flat;
  flat.m = 10;
  flat.pairs = {{1, 3, 0}, {2, 3, 1}};
  CHECK_THROWS_AS(fit_kappa(flat), OptimizationError);
}

TEST_CASE("command line") {
  auto dir = scratch("binary");
  const std::string d = dir.string();
  REQUIRE(run_cli("generate --seed 2 --features 300 --contaminated 3 --matrix-out " + d +
                  "/m.tsv --labels-out " + d + "/l.tsv") == 0);
  const std::string io = " -m " + d + "/m.tsv -l " + d + "/l.tsv --no-normalize";

  CHECK(run_cli("detect" + io + " -o " + d + "/out") == 0);
  CHECK(json::parse(slurp(dir / "out" / "report.json"))["flagged"]["case"] == 3);
  CHECK(run_cli("--version") == 0);
  CHECK(run_cli("detect -m " + d + "/missing.tsv -l " + d + "/l.tsv") == 2);
  CHECK(run_cli("detect" + io + " --ttest student") == 2);
  CHECK(run_cli("detect" + io + " --fixed-weights rs") == 2);
  CHECK(run_cli("detect" + io + " --balance 2 -o " + d + "/bal") == 2);
  CHECK(run_cli("detect" + io + " --top-m 301 -o " + d + "/big") == 2);
  CHECK(run_cli("generate --features 10") == 2);

  // two controls: deleting either leaves a single control
  std::ofstream(dir / "few_labels.tsv") << "sample_id\tlabel\n";
  {
    std::ifstream in(dir / "l.tsv");
    std::ofstream out(dir / "few_labels.tsv", std::ios::app);
    std::string line;
    std::getline(in, line);
    int controls = 0;
    while (std::getline(in, line)) {
      if (line.find("control") != std::string::npos && ++controls > 2) {
        line.replace(line.find("control"), 7, "case");
      }
      out << line << '\n';
    }
  }
  CHECK(run_cli("detect -m " + d + "/m.tsv -l " + d + "/few_labels.tsv --no-normalize -o " + d +
                "/few") == 3);

  SUBCASE("flags override config file values") {
    std::ofstream(dir / "cfg.toml") << "[detect]\ntop-m = 50\n";
    CHECK(run_cli("--config " + d + "/cfg.toml detect" + io + " -o " + d + "/cfg") == 0);
    CHECK(json::parse(slurp(dir / "cfg" / "report.json"))["config"]["top_m"] == 50);
    CHECK(run_cli("--config " + d + "/cfg.toml detect" + io + " --top-m 30 -o " + d + "/cfg2") == 0);
    CHECK(json::parse(slurp(dir / "cfg2" / "report.json"))["config"]["top_m"] == 30);
  }
  SUBCASE("weights table") {
    CHECK(run_cli("weights-table --kappa 0.010 --m 200 --fixed-weights rr -o " + d + "/wt") == 0);
    auto rows = read_csv(dir / "wt" / "weights.csv");
    REQUIRE(rows.size() == 201);
    CHECK(rows[1][1].rfind("0.0115", 0) == 0);
    CHECK(fs::exists(dir / "wt" / "weights.svg"));
  }
}

TEST_CASE("compare agrees on a dominant influential case") {
  auto dir = scratch("compare");
  auto spec = small_spec(2);
  spec.signal_features = 300;
  run_generate(spec, dir / "matrix.tsv", dir / "labels.tsv");
  auto config = config_for(dir);
  auto scores = run_compare(config);
  CHECK(scores[0].metric == Metric::spearman);
  CHECK(scores[1].metric == Metric::weighted_spearman);
  CHECK(scores[2].metric == Metric::adaptive);
  for (const auto& s : scores) {
    REQUIRE(s.report);
    CHECK(s.report->flagged == 4);
  }
  for (const char* f : {"comparison.csv", "top_changes.csv", "comparison.json", "comparison.svg",
                        "top_changes.svg"}) {
    CHECK(fs::exists(config.output_dir / f));
  }
  const auto j = json::parse(slurp(config.output_dir / "comparison.json"));
  CHECK(j["metrics_agree"] == true);
  auto top = read_csv(config.output_dir / "top_changes.csv");
  CHECK(top.size() == 1 + 3 * 10);
}
