#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ranksentinel/matrix.hpp"

namespace ranksentinel {

enum class TTestVariant { welch, pooled };

struct RankOptions {
  TTestVariant variant = TTestVariant::welch;
  /// Apply log2(v + 1) before testing.
  bool log_transform = true;
};

struct TTestResult {
  double t = 0.0;
  long double p = 1.0L;  // long double: p-values below DBL_MIN must still order
  /// Zero variance in both groups; such features sort after every finite result.
  bool degenerate = false;
};

/// Group summary used by the t-test. Centered form so that removing one
/// observation does not cancel catastrophically.
struct GroupMoments {
  long double count = 0;
  long double mean = 0;
  long double m2 = 0;  // sum of squared deviations from the mean
};

TTestResult t_test(const GroupMoments& tumor, const GroupMoments& control, TTestVariant variant);

/// Ordered top-m feature list. Position k holds rank k + 1.
struct Ranking {
  std::vector<std::size_t> rows;  // row index into the source matrix
  std::vector<std::string> feature_ids;
  std::vector<double> t;
  std::vector<double> p;

  std::size_t size() const noexcept { return rows.size(); }
};

/// Original ranking plus, for every deleted case, the global ranks of the
/// selected features in the full leave-one-out ranking (values may exceed m).
class LooRankingSet {
public:
  LooRankingSet() = default;
  LooRankingSet(Ranking original, std::size_t cases);

  const Ranking& original() const noexcept { return original_; }
  std::size_t cases() const noexcept { return cases_; }
  std::size_t m() const noexcept { return original_.size(); }

  std::span<const std::uint32_t> ranks(std::size_t deleted_case) const noexcept {
    return {ranks_.data() + deleted_case * m(), m()};
  }
  std::span<std::uint32_t> ranks(std::size_t deleted_case) noexcept {
    return {ranks_.data() + deleted_case * m(), m()};
  }

  /// 1..m, the ranks of the selected features in the original ranking.
  std::vector<std::uint32_t> original_ranks() const;

private:
  Ranking original_;
  std::size_t cases_ = 0;
  std::vector<std::uint32_t> ranks_;
};

/// Full-data per-feature, per-group moments of the (optionally transformed) values.
/// The leave-one-out statistics are obtained by removing one observation from these.
class TTestModel {
public:
  TTestModel(const ExpressionMatrix& x, const RankOptions& options);

  std::size_t features() const noexcept { return features_; }
  std::size_t samples() const noexcept { return samples_; }
  const RankOptions& options() const noexcept { return options_; }

  /// Tests on all samples.
  std::vector<TTestResult> full() const;

  /// Tests with one sample removed, by downdating the full-data moments.
  /// Throws DegenerateError if the deletion leaves a group with fewer than two samples.
  std::vector<TTestResult> without(std::size_t deleted_case) const;
  void without(std::size_t deleted_case, std::span<TTestResult> out) const;

  /// Feature positions in the lexicographic order of their ids, used to break p-value ties.
  std::span<const std::uint32_t> lexical_position() const noexcept { return lexical_; }

private:
  GroupMoments recompute(std::size_t feature, Group g, std::size_t deleted_case) const;

  RankOptions options_;
  std::size_t features_ = 0;
  std::size_t samples_ = 0;
  std::vector<double> data_;  // transformed values, row-major
  std::vector<Group> labels_;
  std::vector<GroupMoments> tumor_, control_;
  std::vector<std::uint32_t> lexical_;
};

/// Feature indices ordered by ascending p-value, degenerate features last, ties by feature id.
std::vector<std::uint32_t> rank_order(std::span<const TTestResult> results,
                                      std::span<const std::uint32_t> lexical_position);

/// Top-m features of the full data by ascending two-sided t-test p-value.
Ranking t_rank(const ExpressionMatrix& x, std::size_t top_m, const RankOptions& options = {});

/// Leave-one-out ranks of `selected` for every sample, parallel over deleted cases.
/// `threads == 0` uses the OpenMP default.
LooRankingSet loo_rankings(const ExpressionMatrix& x, const Ranking& selected,
                           const RankOptions& options = {}, unsigned threads = 0);

/// Single-threaded reference for loo_rankings. Same results, bit for bit.
LooRankingSet loo_rankings_serial(const ExpressionMatrix& x, const Ranking& selected,
                                  const RankOptions& options = {});

}  // namespace ranksentinel
