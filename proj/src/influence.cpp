#include "ranksentinel/influence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <omp.h>

#include "ranksentinel/errors.hpp"

namespace ranksentinel {

RankChangeSet collect_changes(const LooRankingSet& loo) {
  RankChangeSet out;
  out.m = loo.m();
  for (std::size_t i = 0; i < loo.cases(); ++i) {
    auto ranks = loo.ranks(i);
    for (std::uint32_t k = 0; k < ranks.size(); ++k) {
      const std::uint32_t original = k + 1;
      if (ranks[k] != original) {
        out.pairs.push_back({original, ranks[k], static_cast<std::uint32_t>(i)});
      }
    }
  }
  return out;
}

double total_rank_change(const WeightModel& model, std::span<const std::uint32_t> original,
                         std::span<const std::uint32_t> loo) {
  if (original.size() != loo.size()) {
    throw InputError("original and leave-one-out rankings cover different feature sets");
  }
  long double total = 0.0L;
  for (std::size_t j = 0; j < original.size(); ++j) {
    if (original[j] == loo[j]) continue;
    const long double d = model.weight_extended(original[j]) - model.weight_extended(loo[j]);
    total += d * d;
  }
  return static_cast<double>(total);
}

std::vector<double> total_rank_changes(const WeightModel& model, const LooRankingSet& loo,
                                       unsigned threads) {
  const auto n = static_cast<std::ptrdiff_t>(loo.cases());
  const std::size_t m = loo.m();
  std::uint32_t max_rank = static_cast<std::uint32_t>(m);
  for (std::size_t i = 0; i < loo.cases(); ++i) {
    for (auto r : loo.ranks(i)) max_rank = std::max(max_rank, r);
  }
  std::vector<long double> w(max_rank + 1);
  for (std::uint32_t r = 1; r <= max_rank; ++r) w[r] = model.weight_extended(r);

  std::vector<double> out(loo.cases());
  const int nthreads = threads > 0 ? static_cast<int>(threads) : omp_get_max_threads();
#pragma omp parallel for num_threads(nthreads) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ranks = loo.ranks(static_cast<std::size_t>(i));
    long double total = 0.0L;
    for (std::size_t k = 0; k < m; ++k) {
      if (ranks[k] == k + 1) continue;
      const long double d = w[k + 1] - w[ranks[k]];
      total += d * d;
    }
    out[i] = static_cast<double>(total);
  }
  return out;
}

std::vector<double> total_rank_changes_serial(const WeightModel& model,
                                              const LooRankingSet& loo) {
  const auto original = loo.original_ranks();
  std::vector<double> out(loo.cases());
  for (std::size_t i = 0; i < loo.cases(); ++i) {
    out[i] = total_rank_change(model, original, loo.ranks(i));
  }
  return out;
}

double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) throw DegenerateError("standard deviation needs at least two scores");
  const long double n = static_cast<long double>(xs.size());
  long double mean = 0.0L;
  for (double x : xs) mean += x;
  mean /= n;
  long double ss = 0.0L;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return static_cast<double>(std::sqrt(ss / (n - 1)));
}

std::vector<double> standardize(std::span<const double> scores, Standardization mode) {
  const double sd = sample_sd(scores);
  if (!(sd > 0.0)) throw DegenerateError("scores have zero standard deviation");
  double center = 0.0;
  if (mode == Standardization::zscore) {
    center = std::accumulate(scores.begin(), scores.end(), 0.0) /
             static_cast<double>(scores.size());
  }
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = (scores[i] - center) / sd;
  return out;
}

InfluenceReport detect_ip(std::vector<double> scores, std::vector<std::string> case_ids,
                          const DetectOptions& options) {
  if (scores.size() != case_ids.size()) {
    throw InputError("score and case id counts differ");
  }
  if (scores.size() < 3) throw DegenerateError("influence detection needs at least three cases");

  InfluenceReport r;
  r.std_scores = standardize(scores, options.standardization);
  const double sd = sample_sd(scores);

  r.flagged = static_cast<std::size_t>(
      std::distance(scores.begin(), std::max_element(scores.begin(), scores.end())));
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i != r.flagged) second = std::max(second, scores[i]);
  }
  r.gap = (scores[r.flagged] - second) / sd;
  r.candidate = r.gap >= options.gap_threshold;
  if (r.candidate) {
    r.note = "candidate influential point: separated from the remaining cases by a gap of " +
             std::to_string(r.gap) + " sd; confirm by inspecting the case";
  } else {
    r.note = "no outstanding gap: the largest score is within " + std::to_string(r.gap) +
             " sd of the runner-up; several cases may be comparably influential";
  }
  r.raw_scores = std::move(scores);
  r.case_ids = std::move(case_ids);
  return r;
}

}  // namespace ranksentinel
