#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "ranksentinel/analysis.hpp"
#include "ranksentinel/baselines.hpp"
#include "ranksentinel/ingest.hpp"
#include "ranksentinel/synthetic.hpp"

namespace ranksentinel {

std::string tool_version();

struct RunConfig {
  std::filesystem::path matrix;
  std::filesystem::path labels;
  std::filesystem::path exclude;  // optional feature exclusion list
  std::filesystem::path output_dir = ".";
  LoadOptions load;
  bool normalize = true;  // counts per million; disable for pre-normalized input
  bool filter = true;     // drop features that are zero in more than half the samples
  unsigned balance_ratio = 0;  // 0 disables group balancing
  std::optional<std::uint64_t> seed;
  Metric metric = Metric::adaptive;
  std::optional<FixedScheme> fixed_weights;
  AnalysisOptions analysis;
};

/// Throws InputError for out-of-range parameters or a randomized step without a seed.
void validate(const RunConfig& config);

/// The effective configuration as echoed in report.json. Thread count and
/// output location are excluded so reports do not depend on them.
nlohmann::ordered_json config_json(const RunConfig& config);

/// Load, balance, normalize, filter and exclude, in that order.
ExpressionMatrix prepare_input(const RunConfig& config);

struct DetectResult {
  Analysis analysis;
  MetricScores scores;
};

/// Runs the three detection steps and writes original_ranking.csv, loo_ranks.csv,
/// weights.csv, influence.csv, report.json and detect.svg into the output directory.
DetectResult run_detect(const RunConfig& config);
DetectResult run_detect(const ExpressionMatrix& x, const RunConfig& config);

/// All three metrics on one dataset: comparison.csv, top_changes.csv,
/// comparison.json, comparison.svg, top_changes.svg.
std::array<MetricScores, 3> run_compare(const RunConfig& config);

void run_generate(const SyntheticSpec& spec, const std::filesystem::path& matrix_path,
                  const std::filesystem::path& label_path);

/// weights.csv (rank, weight[, fixed scheme]) and weights.svg for a given kappa and m.
void run_weights_table(std::optional<double> kappa, std::size_t m,
                       std::optional<FixedScheme> fixed, const std::filesystem::path& output_dir);

/// Six significant digits, the precision of every CSV table.
std::string csv_number(double v);

}  // namespace ranksentinel
