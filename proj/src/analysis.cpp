#include "ranksentinel/analysis.hpp"

#include <algorithm>
#include <numeric>

#include "ranksentinel/errors.hpp"

namespace ranksentinel {

Analysis analyze(const ExpressionMatrix& x, const AnalysisOptions& options) {
  auto ranking = t_rank(x, options.top_m, options.rank);
  auto loo = loo_rankings(x, ranking, options.rank, options.threads);
  return analyze(std::move(loo), x.sample_ids, options);
}

Analysis analyze(LooRankingSet loo, std::vector<std::string> case_ids,
                 const AnalysisOptions& options) {
  if (case_ids.size() != loo.cases()) throw InputError("case id count does not match rankings");
  Analysis a;
  a.case_ids = std::move(case_ids);
  a.loo = std::move(loo);
  a.changes = collect_changes(a.loo);

  if (options.kappa) {
    a.model.emplace(*options.kappa, a.loo.m());
  } else if (!a.changes.empty()) {
    auto fit_options = options.fit;
    if (fit_options.threads == 0) fit_options.threads = options.threads;
    a.fit = fit_kappa(a.changes, fit_options);
    a.model = a.fit->model;
  }

  if (a.model) {
    a.adaptive = total_rank_changes(*a.model, a.loo, options.threads);
  } else {
    a.adaptive.assign(a.loo.cases(), 0.0);
  }
  return a;
}

MetricScores score_metric(const Analysis& analysis, Metric metric,
                          const AnalysisOptions& options) {
  MetricScores out;
  out.metric = metric;
  if (analysis.no_changes()) {
    out.raw.assign(analysis.loo.cases(), 0.0);
    return out;
  }
  if (metric == Metric::adaptive) {
    out.raw = analysis.adaptive;
  } else {
    auto scores = baseline_influence(metric, analysis.loo, options.threads);
    out.raw = std::move(scores.raw);
    out.clamped = scores.clamped;
  }
  out.report = detect_ip(out.raw, analysis.case_ids, options.detect);
  if (analysis.model) {
    out.report->kappa = analysis.model->kappa();
  }
  out.report->m = analysis.loo.m();
  return out;
}

std::vector<ChangedFeature> top_changes(const Analysis& analysis, Metric metric,
                                        std::size_t deleted_case, std::size_t count) {
  const auto& loo = analysis.loo;
  if (deleted_case >= loo.cases()) throw InputError("case index out of range");
  if (metric == Metric::adaptive && !analysis.model) return {};

  const auto ranks = loo.ranks(deleted_case);
  const double m = static_cast<double>(loo.m());
  std::vector<ChangedFeature> changed;
  for (std::uint32_t k = 0; k < ranks.size(); ++k) {
    const std::uint32_t original = k + 1;
    if (ranks[k] == original) continue;
    const double d = static_cast<double>(original) - static_cast<double>(ranks[k]);
    double contribution = d * d;
    if (metric == Metric::weighted_spearman) {
      contribution *= (m - std::min<double>(original, m) + 1) + (m - std::min<double>(ranks[k], m) + 1);
    } else if (metric == Metric::adaptive) {
      const double dw = analysis.model->weight(original) - analysis.model->weight(ranks[k]);
      contribution = dw * dw;
    }
    changed.push_back({loo.original().feature_ids[k], original, ranks[k], contribution});
  }
  std::stable_sort(changed.begin(), changed.end(), [](const auto& a, const auto& b) {
    return a.contribution > b.contribution;
  });
  if (changed.size() > count) changed.resize(count);
  return changed;
}

}  // namespace ranksentinel
