#include "ranksentinel/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "plots.hpp"
#include "ranksentinel/errors.hpp"

#ifndef RANKSENTINEL_VERSION
#define RANKSENTINEL_VERSION "0.0.0"
#endif

namespace ranksentinel {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string tool_version() { return RANKSENTINEL_VERSION; }

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << content;
}

fs::path prepare_output(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + dir.string() + "'");
  return dir;
}

const char* variant_name(TTestVariant v) { return v == TTestVariant::welch ? "welch" : "pooled"; }

ordered_json nullable(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

std::string original_ranking_csv(const Ranking& r) {
  std::ostringstream out;
  out << "feature,rank,t,p\n";
  for (std::size_t k = 0; k < r.size(); ++k) {
    out << r.feature_ids[k] << ',' << k + 1 << ',' << csv_number(r.t[k]) << ','
        << csv_number(r.p[k]) << '\n';
  }
  return out.str();
}

std::string loo_ranks_csv(const Analysis& a) {
  std::ostringstream out;
  out << "feature,original";
  for (const auto& id : a.case_ids) out << ',' << id;
  out << '\n';
  for (std::size_t k = 0; k < a.loo.m(); ++k) {
    out << a.loo.original().feature_ids[k] << ',' << k + 1;
    for (std::size_t i = 0; i < a.loo.cases(); ++i) out << ',' << a.loo.ranks(i)[k];
    out << '\n';
  }
  return out.str();
}

std::string weights_csv(const std::optional<WeightModel>& model, std::size_t m,
                        const std::optional<FixedScheme>& fixed) {
  std::ostringstream out;
  out << "rank,weight";
  std::vector<double> extra;
  if (fixed) {
    out << ',' << (*fixed == FixedScheme::rr ? "rr" : "roc");
    extra = fixed_weights(*fixed, m);
  }
  out << '\n';
  if (!model && !fixed) return out.str();
  for (std::size_t x = 1; x <= m; ++x) {
    out << x << ',' << (model ? csv_number(model->weight(static_cast<double>(x))) : "");
    if (fixed) out << ',' << csv_number(extra[x - 1]);
    out << '\n';
  }
  return out.str();
}

std::string influence_csv(const Analysis& a, const MetricScores& s) {
  std::ostringstream out;
  out << "case,sample_id,raw,standardized\n";
  for (std::size_t i = 0; i < a.case_ids.size(); ++i) {
    const double std_score = s.report ? s.report->std_scores[i] : 0.0;
    out << i + 1 << ',' << a.case_ids[i] << ',' << csv_number(s.raw[i]) << ','
        << csv_number(std_score) << '\n';
  }
  return out.str();
}

ordered_json flagged_json(const Analysis& a, const MetricScores& s) {
  if (!s.report) return nullptr;
  const auto& r = *s.report;
  ordered_json j;
  j["case"] = r.flagged + 1;
  j["sample_id"] = a.case_ids[r.flagged];
  j["raw_score"] = r.raw_scores[r.flagged];
  j["standardized_score"] = r.std_scores[r.flagged];
  j["gap"] = r.gap;
  j["status"] = r.candidate ? "candidate" : "inconclusive";
  j["note"] = r.note;
  return j;
}

ordered_json kappa_json(const Analysis& a) {
  ordered_json j;
  j["value"] = a.model ? ordered_json(a.model->kappa()) : ordered_json(nullptr);
  j["rounded"] = a.model ? ordered_json(round3(a.model->kappa())) : ordered_json(nullptr);
  j["fitted"] = a.fit.has_value();
  j["r_squared"] = a.fit ? ordered_json(a.fit->r_squared) : ordered_json(nullptr);
  return j;
}

ordered_json report_header(const Analysis& a) {
  ordered_json j;
  j["schema"] = "ranksentinel-report";
  j["schema_version"] = 1;
  j["tool"] = {{"name", "ranksentinel"}, {"version", tool_version()}};
  j["status"] = a.no_changes() ? "no_rank_changes" : "ok";
  j["n_cases"] = a.loo.cases();
  j["m"] = a.loo.m();
  j["changed_pairs"] = a.changes.size();
  return j;
}

std::vector<std::string> warnings_for(const MetricScores& s) {
  std::vector<std::string> w;
  if (s.clamped) {
    w.push_back("leave-one-out ranks beyond m were clamped to m in the wspearman weight term");
  }
  return w;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.analysis.top_m == 0) throw InputError("--top-m must be at least 1");
  if (c.analysis.kappa && !(*c.analysis.kappa > 0.0)) throw InputError("--kappa must be positive");
  const auto& f = c.analysis.fit;
  if (!(f.kappa_min > 0.0) || !(f.kappa_min < f.kappa_max)) {
    throw InputError("kappa bracket must satisfy 0 < --kappa-min < --kappa-max");
  }
  if (!(f.tolerance > 0.0)) throw InputError("--kappa-tol must be positive");
  if (c.balance_ratio > 0 && !c.seed) {
    throw InputError("--balance requires --seed");
  }
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["matrix"] = c.matrix.string();
  j["labels"] = c.labels.string();
  j["exclude"] = c.exclude.empty() ? ordered_json(nullptr) : ordered_json(c.exclude.string());
  j["delimiter"] = !c.load.delimiter ? "auto" : *c.load.delimiter == ',' ? "comma" : "tab";
  j["normalize"] = c.normalize;
  j["filter"] = c.filter;
  j["balance_ratio"] = c.balance_ratio;
  j["seed"] = c.seed ? ordered_json(*c.seed) : ordered_json(nullptr);
  j["metric"] = std::string(metric_name(c.metric));
  j["top_m"] = c.analysis.top_m;
  j["ttest"] = variant_name(c.analysis.rank.variant);
  j["log_transform"] = c.analysis.rank.log_transform;
  j["kappa"] = nullable(c.analysis.kappa);
  j["kappa_min"] = c.analysis.fit.kappa_min;
  j["kappa_max"] = c.analysis.fit.kappa_max;
  j["kappa_tol"] = c.analysis.fit.tolerance;
  j["kappa_grid"] = c.analysis.fit.grid_points;
  j["gap_threshold"] = c.analysis.detect.gap_threshold;
  j["standardization"] =
      c.analysis.detect.standardization == Standardization::scale ? "scale" : "zscore";
  return j;
}

ExpressionMatrix prepare_input(const RunConfig& c) {
  auto x = load_matrix(c.matrix, c.labels, c.load);
  if (c.balance_ratio > 0) x = balance_groups(x, c.balance_ratio, *c.seed);
  if (c.normalize) x = cpm_normalize(x);
  if (c.filter) x = filter_low_expressed(x);
  if (!c.exclude.empty()) x = drop_features(x, load_exclusion_list(c.exclude));
  return x;
}

DetectResult run_detect(const RunConfig& config) {
  validate(config);
  return run_detect(prepare_input(config), config);
}

DetectResult run_detect(const ExpressionMatrix& x, const RunConfig& config) {
  validate(config);
  const auto dir = prepare_output(config.output_dir);

  DetectResult result{analyze(x, config.analysis), {}};
  const auto& a = result.analysis;
  result.scores = score_metric(a, config.metric, config.analysis);

  write_file(dir / "original_ranking.csv", original_ranking_csv(a.loo.original()));
  write_file(dir / "loo_ranks.csv", loo_ranks_csv(a));
  write_file(dir / "weights.csv", weights_csv(a.model, a.loo.m(), std::nullopt));
  write_file(dir / "influence.csv", influence_csv(a, result.scores));

  auto report = report_header(a);
  report["metric"] = std::string(metric_name(config.metric));
  report["kappa"] = kappa_json(a);
  report["flagged"] = flagged_json(a, result.scores);
  report["warnings"] = warnings_for(result.scores);
  report["config"] = config_json(config);
  write_file(dir / "report.json", report.dump(2) + "\n");

  write_file(dir / "detect.svg", plots::detection(a, result.scores, tool_version()));
  if (config.fixed_weights) {
    write_file(dir / "fixed_weights.svg",
               plots::weight_curve(fixed_weights(*config.fixed_weights, a.loo.m()),
                                   *config.fixed_weights == FixedScheme::rr ? "RR weights"
                                                                            : "ROC weights",
                                   tool_version()));
  }
  return result;
}

std::array<MetricScores, 3> run_compare(const RunConfig& config) {
  validate(config);
  const auto x = prepare_input(config);
  const auto dir = prepare_output(config.output_dir);
  const auto a = analyze(x, config.analysis);

  std::array<MetricScores, 3> scores{
      score_metric(a, Metric::spearman, config.analysis),
      score_metric(a, Metric::weighted_spearman, config.analysis),
      score_metric(a, Metric::adaptive, config.analysis),
  };

  std::ostringstream table;
  table << "case,sample_id";
  for (const auto& s : scores) {
    table << ',' << metric_name(s.metric) << "_raw," << metric_name(s.metric) << "_standardized";
  }
  table << '\n';
  for (std::size_t i = 0; i < a.case_ids.size(); ++i) {
    table << i + 1 << ',' << a.case_ids[i];
    for (const auto& s : scores) {
      table << ',' << csv_number(s.raw[i]) << ','
            << csv_number(s.report ? s.report->std_scores[i] : 0.0);
    }
    table << '\n';
  }
  write_file(dir / "comparison.csv", table.str());

  std::ostringstream top;
  top << "metric,case,sample_id,feature,original_rank,loo_rank,contribution\n";
  for (const auto& s : scores) {
    if (!s.report) continue;
    const auto i = s.report->flagged;
    for (const auto& f : top_changes(a, s.metric, i)) {
      top << metric_name(s.metric) << ',' << i + 1 << ',' << a.case_ids[i] << ',' << f.feature
          << ',' << f.original << ',' << f.loo << ',' << csv_number(f.contribution) << '\n';
    }
  }
  write_file(dir / "top_changes.csv", top.str());

  auto report = report_header(a);
  report["kappa"] = kappa_json(a);
  ordered_json metrics = ordered_json::object();
  std::vector<std::string> warnings;
  for (const auto& s : scores) {
    metrics[std::string(metric_name(s.metric))] = flagged_json(a, s);
    for (auto& w : warnings_for(s)) warnings.push_back(std::move(w));
  }
  report["flagged"] = metrics;
  bool agree = true;
  for (const auto& s : scores) {
    agree = agree && s.report && scores[0].report && s.report->flagged == scores[0].report->flagged;
  }
  report["metrics_agree"] = agree;
  report["warnings"] = warnings;
  report["config"] = config_json(config);
  write_file(dir / "comparison.json", report.dump(2) + "\n");

  write_file(dir / "comparison.svg", plots::comparison(a, scores, tool_version()));
  write_file(dir / "top_changes.svg", plots::top_changes(a, scores, tool_version()));
  return scores;
}

void run_generate(const SyntheticSpec& spec, const fs::path& matrix_path,
                  const fs::path& label_path) {
  const auto x = generate(spec);
  if (matrix_path.has_parent_path()) prepare_output(matrix_path.parent_path());
  if (label_path.has_parent_path()) prepare_output(label_path.parent_path());
  write_matrix(x, matrix_path, label_path, '\t');
}

void run_weights_table(std::optional<double> kappa, std::size_t m,
                       std::optional<FixedScheme> fixed, const fs::path& output_dir) {
  if (!kappa && !fixed) throw InputError("weights-table needs --kappa or --fixed-weights");
  std::optional<WeightModel> model;
  if (kappa) model.emplace(*kappa, m);
  const auto dir = prepare_output(output_dir);
  write_file(dir / "weights.csv", weights_csv(model, m, fixed));
  if (fixed) {
    write_file(dir / "weights.svg",
               plots::weight_curve(fixed_weights(*fixed, m),
                                   *fixed == FixedScheme::rr ? "RR weights" : "ROC weights",
                                   tool_version()));
  } else {
    write_file(dir / "weights.svg",
               plots::weight_curve(model->curve(),
                                   "kappa=" + csv_number(*kappa) + ", m=" + std::to_string(m),
                                   tool_version()));
  }
}

}  // namespace ranksentinel
