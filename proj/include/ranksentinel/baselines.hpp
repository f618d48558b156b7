#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ranksentinel/ranker.hpp"

namespace ranksentinel {

/// D_s = sum (R_i - Q_i)^2. Throws InputError on a length mismatch.
double spearman_distance(std::span<const std::uint32_t> r, std::span<const std::uint32_t> q);

/// D_w = sum (R_i - Q_i)^2 ((m - R_i + 1) + (m - Q_i + 1)).
///
/// Ranks beyond m are clamped to m inside the weight term only, so each weight
/// stays >= 2. `clamped`, when given, is set if that happened.
double weighted_spearman_distance(std::span<const std::uint32_t> r,
                                  std::span<const std::uint32_t> q, std::size_t m,
                                  bool* clamped = nullptr);

enum class FixedScheme { rr, roc };

FixedScheme parse_fixed_scheme(std::string_view name);

/// RR: 1/r. ROC: 100 * (sum_{i=r..n} 1/i) / (sum_{i=1..n} 1/i).
std::vector<double> fixed_weights(FixedScheme scheme, std::size_t n);

enum class Metric { adaptive, spearman, weighted_spearman };

Metric parse_metric(std::string_view name);
std::string_view metric_name(Metric metric);

struct BaselineScores {
  std::vector<double> raw;
  std::vector<double> standardized;
  std::size_t flagged = 0;
  bool clamped = false;
};

/// Per-case D_s or D_w between the original and each leave-one-out ranking,
/// divided by the standard deviation across cases. Metric::adaptive is rejected.
BaselineScores baseline_influence(Metric metric, const LooRankingSet& loo, unsigned threads = 0);

}  // namespace ranksentinel
