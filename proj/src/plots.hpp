#pragma once

#include <array>
#include <string>
#include <vector>

#include "ranksentinel/analysis.hpp"

namespace ranksentinel::plots {

/// Three panels: original vs leave-one-out ranks, weight curve with the
/// flagged case's changes, per-case standardized influence.
std::string detection(const Analysis& analysis, const MetricScores& scores,
                      const std::string& version);

/// Standardized influence of the three metrics side by side.
std::string comparison(const Analysis& analysis, const std::array<MetricScores, 3>& scores,
                       const std::string& version);

/// For each metric's flagged case: its rank changes with the top changed features boxed.
std::string top_changes(const Analysis& analysis, const std::array<MetricScores, 3>& scores,
                        const std::string& version);

/// A weight curve over ranks 1..weights.size().
std::string weight_curve(const std::vector<double>& weights, const std::string& title,
                         const std::string& version);

}  // namespace ranksentinel::plots
