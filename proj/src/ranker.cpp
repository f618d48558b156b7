#include "ranksentinel/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <omp.h>

#include "ranksentinel/errors.hpp"

namespace ranksentinel {

namespace {

// Below this the double incomplete beta loses range; redo in long double.
constexpr double kTinyP = 1e-290;

// Downdated m2 below this (relative) is recomputed exactly, so a group that
// becomes constant after a deletion is recognized as zero variance.
constexpr long double kResidualM2 = 1e-12L;

long double two_sided_p(long double t, long double df) {
  if (t == 0.0L) return 1.0L;
  const long double x = df / (df + t * t);
  const double fast = boost::math::ibeta(static_cast<double>(df / 2), 0.5, static_cast<double>(x));
  if (fast > kTinyP) return fast;
  return boost::math::ibeta(df / 2, 0.5L, x);
}

GroupMoments moments(std::span<const double> row, std::span<const Group> labels, Group g,
                     std::size_t skip) {
  GroupMoments out;
  long double sum = 0.0L;
  for (std::size_t s = 0; s < row.size(); ++s) {
    if (s == skip || labels[s] != g) continue;
    out.count += 1;
    sum += row[s];
  }
  if (out.count == 0) return out;
  out.mean = sum / out.count;
  for (std::size_t s = 0; s < row.size(); ++s) {
    if (s == skip || labels[s] != g) continue;
    const long double d = row[s] - out.mean;
    out.m2 += d * d;
  }
  return out;
}

}  // namespace

TTestResult t_test(const GroupMoments& tumor, const GroupMoments& control, TTestVariant variant) {
  const long double n1 = tumor.count;
  const long double n2 = control.count;
  if (n1 < 2 || n2 < 2) throw DegenerateError("t-test needs at least two samples per group");

  const long double diff = tumor.mean - control.mean;
  long double se2 = 0.0L;
  long double df = 0.0L;
  if (variant == TTestVariant::welch) {
    const long double a = tumor.m2 / (n1 - 1) / n1;
    const long double b = control.m2 / (n2 - 1) / n2;
    se2 = a + b;
    if (se2 > 0.0L) df = se2 * se2 / (a * a / (n1 - 1) + b * b / (n2 - 1));
  } else {
    df = n1 + n2 - 2;
    se2 = (tumor.m2 + control.m2) / df * (1 / n1 + 1 / n2);
  }
  if (!(se2 > 0.0L)) return {0.0, 1.0L, true};

  const long double t = diff / std::sqrt(se2);
  return {static_cast<double>(t), two_sided_p(t, df), false};
}

LooRankingSet::LooRankingSet(Ranking original, std::size_t cases)
    : original_(std::move(original)), cases_(cases), ranks_(cases * original_.size(), 0) {}

std::vector<std::uint32_t> LooRankingSet::original_ranks() const {
  std::vector<std::uint32_t> r(m());
  std::iota(r.begin(), r.end(), 1U);
  return r;
}

TTestModel::TTestModel(const ExpressionMatrix& x, const RankOptions& options)
    : options_(options),
      features_(x.features()),
      samples_(x.samples()),
      data_(x.values),
      labels_(x.labels),
      tumor_(x.features()),
      control_(x.features()),
      lexical_(x.features()) {
  if (options_.log_transform) {
    for (auto& v : data_) v = std::log2(v + 1.0);
  }
  for (std::size_t j = 0; j < features_; ++j) {
    auto row = std::span<const double>(data_).subspan(j * samples_, samples_);
    tumor_[j] = moments(row, labels_, Group::tumor, samples_);
    control_[j] = moments(row, labels_, Group::control, samples_);
  }
  std::vector<std::uint32_t> by_id(features_);
  std::iota(by_id.begin(), by_id.end(), 0U);
  std::sort(by_id.begin(), by_id.end(),
            [&](auto a, auto b) { return x.feature_ids[a] < x.feature_ids[b]; });
  for (std::uint32_t k = 0; k < features_; ++k) lexical_[by_id[k]] = k;
}

std::vector<TTestResult> TTestModel::full() const {
  std::vector<TTestResult> out(features_);
  for (std::size_t j = 0; j < features_; ++j) {
    out[j] = t_test(tumor_[j], control_[j], options_.variant);
  }
  return out;
}

GroupMoments TTestModel::recompute(std::size_t feature, Group g, std::size_t deleted_case) const {
  auto row = std::span<const double>(data_).subspan(feature * samples_, samples_);
  return moments(row, labels_, g, deleted_case);
}

std::vector<TTestResult> TTestModel::without(std::size_t deleted_case) const {
  std::vector<TTestResult> out(features_);
  without(deleted_case, out);
  return out;
}

void TTestModel::without(std::size_t deleted_case, std::span<TTestResult> out) const {
  if (deleted_case >= samples_) throw InputError("deleted case index out of range");
  const Group g = labels_[deleted_case];
  const auto& group = g == Group::tumor ? tumor_ : control_;
  const auto& other = g == Group::tumor ? control_ : tumor_;
  if (features_ > 0 && group[0].count - 1 < 2) {
    throw DegenerateError("deleting a sample would leave the " + std::string(group_name(g)) +
                          " group with fewer than two samples");
  }

  for (std::size_t j = 0; j < features_; ++j) {
    const GroupMoments& full = group[j];
    const long double v = data_[j * samples_ + deleted_case];
    GroupMoments reduced;
    reduced.count = full.count - 1;
    reduced.mean = full.mean - (v - full.mean) / reduced.count;
    reduced.m2 = full.m2 - (v - full.mean) * (v - reduced.mean);

    const long double scale = std::max(1.0L, reduced.mean * reduced.mean) * reduced.count;
    if (reduced.m2 < -1e-9L || reduced.m2 <= kResidualM2 * scale) {
      reduced = recompute(j, g, deleted_case);
    }
    if (reduced.m2 < 0.0L) reduced.m2 = 0.0L;

    out[j] = g == Group::tumor ? t_test(reduced, other[j], options_.variant)
                               : t_test(other[j], reduced, options_.variant);
  }
}

std::vector<std::uint32_t> rank_order(std::span<const TTestResult> results,
                                      std::span<const std::uint32_t> lexical_position) {
  std::vector<std::uint32_t> order(results.size());
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto& ra = results[a];
    const auto& rb = results[b];
    if (ra.degenerate != rb.degenerate) return rb.degenerate;
    if (ra.p != rb.p) return ra.p < rb.p;
    return lexical_position[a] < lexical_position[b];
  });
  return order;
}

Ranking t_rank(const ExpressionMatrix& x, std::size_t top_m, const RankOptions& options) {
  if (x.group_size(Group::tumor) < 2 || x.group_size(Group::control) < 2) {
    throw DegenerateError("t-test ranking needs at least two samples per group");
  }
  if (top_m == 0 || top_m > x.features()) {
    throw InputError("top_m must be between 1 and the number of features (" +
                     std::to_string(x.features()) + ")");
  }
  TTestModel model(x, options);
  const auto results = model.full();
  const auto order = rank_order(results, model.lexical_position());

  Ranking r;
  for (std::size_t k = 0; k < top_m; ++k) {
    const auto j = order[k];
    r.rows.push_back(j);
    r.feature_ids.push_back(x.feature_ids[j]);
    r.t.push_back(results[j].t);
    r.p.push_back(static_cast<double>(results[j].p));
  }
  return r;
}

namespace {

void check_loo_preconditions(const ExpressionMatrix& x, const Ranking& selected) {
  for (Group g : {Group::tumor, Group::control}) {
    if (x.group_size(g) < 3) {
      throw DegenerateError("deleting a sample would leave the " + std::string(group_name(g)) +
                            " group with fewer than two samples");
    }
  }
  for (auto row : selected.rows) {
    if (row >= x.features()) throw InputError("ranking refers to a feature outside the matrix");
  }
}

// Ranks of the selected rows after deleting one case. `results` and `position`
// are per-thread scratch.
void rank_one_deletion(const TTestModel& model, const Ranking& selected, std::size_t deleted,
                       std::vector<TTestResult>& results, std::vector<std::uint32_t>& position,
                       std::span<std::uint32_t> out) {
  model.without(deleted, results);
  const auto order = rank_order(results, model.lexical_position());
  for (std::uint32_t k = 0; k < order.size(); ++k) position[order[k]] = k + 1;
  for (std::size_t k = 0; k < selected.size(); ++k) out[k] = position[selected.rows[k]];
}

}  // namespace

LooRankingSet loo_rankings(const ExpressionMatrix& x, const Ranking& selected,
                           const RankOptions& options, unsigned threads) {
  check_loo_preconditions(x, selected);
  const TTestModel model(x, options);
  LooRankingSet out(selected, x.samples());
  const auto n = static_cast<std::ptrdiff_t>(x.samples());
  const int nthreads = threads > 0 ? static_cast<int>(threads) : omp_get_max_threads();

#pragma omp parallel num_threads(nthreads)
  {
    std::vector<TTestResult> results(model.features());
    std::vector<std::uint32_t> position(model.features());
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      rank_one_deletion(model, selected, static_cast<std::size_t>(i), results, position,
                        out.ranks(static_cast<std::size_t>(i)));
    }
  }
  return out;
}

LooRankingSet loo_rankings_serial(const ExpressionMatrix& x, const Ranking& selected,
                                  const RankOptions& options) {
  check_loo_preconditions(x, selected);
  const TTestModel model(x, options);
  LooRankingSet out(selected, x.samples());
  std::vector<TTestResult> results(model.features());
  std::vector<std::uint32_t> position(model.features());
  for (std::size_t i = 0; i < x.samples(); ++i) {
    rank_one_deletion(model, selected, i, results, position, out.ranks(i));
  }
  return out;
}

}  // namespace ranksentinel
