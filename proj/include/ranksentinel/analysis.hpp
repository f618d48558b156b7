#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ranksentinel/baselines.hpp"
#include "ranksentinel/influence.hpp"
#include "ranksentinel/matrix.hpp"
#include "ranksentinel/ranker.hpp"
#include "ranksentinel/weights.hpp"

namespace ranksentinel {

struct AnalysisOptions {
  std::size_t top_m = 200;
  RankOptions rank;
  /// Fixed kappa; when unset kappa is fitted to the pooled rank changes.
  std::optional<double> kappa;
  FitOptions fit;
  DetectOptions detect;
  unsigned threads = 0;
};

/// The three detection steps: rankings, weight model, per-case totals.
struct Analysis {
  std::vector<std::string> case_ids;
  LooRankingSet loo;
  RankChangeSet changes;
  std::optional<KappaFit> fit;
  /// Absent only when nothing changed and no kappa was supplied.
  std::optional<WeightModel> model;
  std::vector<double> adaptive;  // R_i per deleted case; zeros without a model

  bool no_changes() const noexcept { return changes.empty(); }
};

Analysis analyze(const ExpressionMatrix& x, const AnalysisOptions& options);

/// Steps two and three on precomputed leave-one-out ranks.
Analysis analyze(LooRankingSet loo, std::vector<std::string> case_ids,
                 const AnalysisOptions& options);

struct MetricScores {
  Metric metric = Metric::adaptive;
  std::vector<double> raw;
  /// Absent when no deletion changed any rank.
  std::optional<InfluenceReport> report;
  bool clamped = false;
};

MetricScores score_metric(const Analysis& analysis, Metric metric,
                          const AnalysisOptions& options);

struct ChangedFeature {
  std::string feature;
  std::uint32_t original;
  std::uint32_t loo;
  double contribution;  // the feature's term in the metric's per-case sum
};

/// The `count` features contributing most to one deletion's score under `metric`.
std::vector<ChangedFeature> top_changes(const Analysis& analysis, Metric metric,
                                        std::size_t deleted_case, std::size_t count = 10);

}  // namespace ranksentinel
