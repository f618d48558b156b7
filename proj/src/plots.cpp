#include "plots.hpp"

#include <algorithm>

#include "svg.hpp"

namespace ranksentinel::plots {

namespace {

constexpr const char* kGrey = "#9a9a9a";
constexpr const char* kHighlight = "#000000";
constexpr const char* kCurve = "#1f5fa8";

std::uint32_t max_loo_rank(const LooRankingSet& loo) {
  std::uint32_t hi = static_cast<std::uint32_t>(loo.m());
  for (std::size_t i = 0; i < loo.cases(); ++i) {
    auto r = loo.ranks(i);
    hi = std::max(hi, *std::max_element(r.begin(), r.end()));
  }
  return hi;
}

std::size_t flagged_case(const MetricScores& scores) {
  return scores.report ? scores.report->flagged : scores.raw.size();
}

void rank_scatter(svg::Canvas& c, const svg::Panel& p, const LooRankingSet& loo,
                  std::size_t highlight) {
  c.line(p.px(1), p.py(1), p.px(p.xmax), p.py(p.xmax), kGrey);
  for (std::size_t i = 0; i < loo.cases(); ++i) {
    if (i == highlight) continue;
    auto r = loo.ranks(i);
    for (std::uint32_t k = 0; k < r.size(); ++k) {
      if (r[k] != k + 1) c.circle(p.px(k + 1), p.py(r[k]), 1.5, kGrey, 0.5);
    }
  }
  if (highlight < loo.cases()) {
    auto r = loo.ranks(highlight);
    for (std::uint32_t k = 0; k < r.size(); ++k) {
      if (r[k] != k + 1) c.circle(p.px(k + 1), p.py(r[k]), 2.2, kHighlight);
    }
  }
}

void influence_bars(svg::Canvas& c, const svg::Panel& p, const std::vector<double>& values,
                    std::size_t highlight) {
  const double bar = p.width / static_cast<double>(std::max<std::size_t>(values.size(), 1));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double y0 = p.py(std::max(0.0, p.ymin));
    const double y1 = p.py(values[i]);
    c.rect(p.left + bar * static_cast<double>(i) + bar * 0.1, std::min(y0, y1), bar * 0.8,
           std::abs(y1 - y0), i == highlight ? kHighlight : kGrey);
  }
  if (highlight < values.size()) {
    c.text(p.left + bar * (static_cast<double>(highlight) + 0.5), p.py(values[highlight]) - 4,
           "obs" + std::to_string(highlight + 1), 10);
  }
}

std::vector<double> displayed_scores(const MetricScores& s) {
  return s.report ? s.report->std_scores : s.raw;
}

std::pair<double, double> score_range(const std::vector<double>& v) {
  double lo = 0.0, hi = 1.0;
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi * 1.08};
}

}  // namespace

std::string detection(const Analysis& analysis, const MetricScores& scores,
                      const std::string& version) {
  const auto& loo = analysis.loo;
  const std::size_t flagged = flagged_case(scores);
  const double hi_rank = max_loo_rank(loo);
  svg::Canvas c(1260, 440);
  c.comment("ranksentinel " + version);

  svg::Panel scatter{70, 50, 330, 320, 1, static_cast<double>(loo.m()), 1, hi_rank};
  scatter.draw_axes(c, "Step 1: rankings", "original rank", "leave-one-out rank");
  rank_scatter(c, scatter, loo, flagged);

  if (analysis.model) {
    const auto& model = *analysis.model;
    const double w_top = model.weight(1.0);
    const double w_bottom = model.weight(hi_rank);
    svg::Panel curve{490, 50, 330, 320, 1, static_cast<double>(loo.m()), w_bottom, w_top * 1.02};
    curve.draw_axes(c, "Step 2: weights (kappa=" + svg::format_number(model.kappa()) + ")",
                    "original rank", "weight");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t x = 1; x <= loo.m(); ++x) {
      pts.emplace_back(curve.px(static_cast<double>(x)), curve.py(model.weight(x)));
    }
    c.polyline(pts, kCurve);
    for (std::size_t i = 0; i < loo.cases(); ++i) {
      auto r = loo.ranks(i);
      for (std::uint32_t k = 0; k < r.size(); ++k) {
        if (r[k] == k + 1) continue;
        const double x = curve.px(k + 1);
        if (i == flagged) {
          c.line(x, curve.py(model.weight(k + 1)), x, curve.py(model.weight(r[k])), kHighlight);
          c.circle(x, curve.py(model.weight(r[k])), 2.2, kHighlight);
        } else {
          c.circle(x, curve.py(model.weight(r[k])), 1.5, kGrey, 0.5);
        }
      }
    }
  } else {
    c.text(655, 210, "no rank changes: weights not fitted", 12);
  }

  const auto values = displayed_scores(scores);
  const auto [lo, hi] = score_range(values);
  svg::Panel bars{910, 50, 330, 320, 0, static_cast<double>(values.size()), lo, hi};
  bars.draw_axes(c, "Step 3: total weighted rank change", "case", "standardized R_i");
  influence_bars(c, bars, values, flagged);
  return c.str();
}

std::string comparison(const Analysis& analysis, const std::array<MetricScores, 3>& scores,
                        const std::string& version) {
  (void)analysis;
  svg::Canvas c(1260, 440);
  c.comment("ranksentinel " + version);
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const auto values = displayed_scores(scores[k]);
    const auto [lo, hi] = score_range(values);
    svg::Panel p{70 + 420.0 * static_cast<double>(k), 50, 330, 320, 0,
                 static_cast<double>(values.size()), lo, hi};
    p.draw_axes(c, std::string(metric_name(scores[k].metric)), "case", "standardized score");
    influence_bars(c, p, values, flagged_case(scores[k]));
  }
  return c.str();
}

std::string top_changes(const Analysis& analysis, const std::array<MetricScores, 3>& scores,
                        const std::string& version) {
  const auto& loo = analysis.loo;
  const double hi_rank = max_loo_rank(loo);
  svg::Canvas c(1260, 440);
  c.comment("ranksentinel " + version);
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const std::size_t flagged = flagged_case(scores[k]);
    svg::Panel p{70 + 420.0 * static_cast<double>(k), 50, 330, 320, 1,
                 static_cast<double>(loo.m()), 1, hi_rank};
    std::string title = std::string(metric_name(scores[k].metric));
    if (flagged < loo.cases()) title += ": obs" + std::to_string(flagged + 1);
    p.draw_axes(c, title, "original rank", "leave-one-out rank");
    c.line(p.px(1), p.py(1), p.px(p.xmax), p.py(p.xmax), kGrey);
    if (flagged >= loo.cases()) continue;
    auto r = loo.ranks(flagged);
    for (std::uint32_t j = 0; j < r.size(); ++j) {
      if (r[j] != j + 1) c.circle(p.px(j + 1), p.py(r[j]), 2.0, kHighlight);
    }
    for (const auto& f : ranksentinel::top_changes(analysis, scores[k].metric, flagged)) {
      c.square(p.px(f.original), p.py(f.loo), 5, "#c0392b");
    }
  }
  return c.str();
}

std::string weight_curve(const std::vector<double>& weights, const std::string& title,
                         const std::string& version) {
  svg::Canvas c(520, 440);
  c.comment("ranksentinel " + version);
  const double hi = weights.empty() ? 1.0 : *std::max_element(weights.begin(), weights.end());
  const double lo = weights.empty() ? 0.0 : *std::min_element(weights.begin(), weights.end());
  svg::Panel p{80, 50, 400, 320, 1, static_cast<double>(std::max<std::size_t>(weights.size(), 2)),
               std::min(0.0, lo), hi * 1.02};
  p.draw_axes(c, title, "rank", "weight");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t x = 0; x < weights.size(); ++x) {
    pts.emplace_back(p.px(static_cast<double>(x + 1)), p.py(weights[x]));
  }
  c.polyline(pts, kCurve);
  return c.str();
}

}  // namespace ranksentinel::plots
