#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ranksentinel/ranker.hpp"
#include "ranksentinel/weights.hpp"

namespace ranksentinel {

/// Pools every (original, leave-one-out) pair whose ranks differ.
RankChangeSet collect_changes(const LooRankingSet& loo);

/// Total weighted rank change of one deletion:
///     R_i = sum_j (w(r_0j) - w(r_ij))^2
double total_rank_change(const WeightModel& model, std::span<const std::uint32_t> original,
                         std::span<const std::uint32_t> loo);

/// R_i for every deleted case, parallel over cases.
std::vector<double> total_rank_changes(const WeightModel& model, const LooRankingSet& loo,
                                       unsigned threads = 0);
std::vector<double> total_rank_changes_serial(const WeightModel& model, const LooRankingSet& loo);

enum class Standardization {
  scale,   // divide by the sample standard deviation
  zscore,  // subtract the mean, then divide
};

double sample_sd(std::span<const double> xs);

/// Throws DegenerateError for fewer than two scores or zero spread.
std::vector<double> standardize(std::span<const double> scores,
                                Standardization mode = Standardization::scale);

struct InfluenceReport {
  std::vector<std::string> case_ids;
  std::vector<double> raw_scores;
  std::vector<double> std_scores;
  std::size_t flagged = 0;  // 0-based case position of the arg-max
  double gap = 0.0;         // (max - second max) / sd
  bool candidate = false;   // gap >= threshold
  std::string note;
  double kappa = 0.0;
  std::size_t m = 0;
};

struct DetectOptions {
  double gap_threshold = 1.0;
  Standardization standardization = Standardization::scale;
};

/// Flags the single arg-max case as a candidate influential point and
/// reports the gap separating it from the runner-up. Ties resolve to the lowest index.
InfluenceReport detect_ip(std::vector<double> scores, std::vector<std::string> case_ids,
                          const DetectOptions& options = {});

}  // namespace ranksentinel
