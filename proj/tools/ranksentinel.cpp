// ranksentinel: influential-point detection for t-test feature rankings.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ranksentinel/cli.hpp"
#include "ranksentinel/errors.hpp"

using namespace ranksentinel;

namespace {

struct RunFlags {
  std::string delimiter = "auto";
  std::string metric = "adaptive";
  std::string ttest = "welch";
  std::string fixed;
  bool no_normalize = false;
  bool no_filter = false;
  bool no_log = false;
  bool zscore = false;
  double kappa = 0.0;
  std::uint64_t seed = 0;
};

void add_run_options(CLI::App* cmd, RunConfig& config, RunFlags& flags) {
  cmd->add_option("-m,--matrix", config.matrix, "Expression matrix (features x samples)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-l,--labels", config.labels, "Sample labels: sample_id,label (case|control)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-o,--output", config.output_dir, "Output directory")->capture_default_str();
  cmd->add_option("--exclude", config.exclude, "File of feature ids to drop")
      ->check(CLI::ExistingFile);
  cmd->add_option("--delimiter", flags.delimiter, "Field separator")
      ->check(CLI::IsMember({"auto", "tab", "comma"}))
      ->capture_default_str();
  cmd->add_flag("--no-normalize", flags.no_normalize,
                "Input is already normalized; skip counts-per-million scaling");
  cmd->add_flag("--no-filter", flags.no_filter, "Keep features that are mostly zero");
  cmd->add_option("--balance", config.balance_ratio,
                  "Subsample cases to RATIO x controls (requires --seed)");
  cmd->add_option("--seed", flags.seed, "Seed for randomized steps");
  cmd->add_option("--top-m", config.analysis.top_m, "Number of top features compared")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--ttest", flags.ttest, "t-test variant")
      ->check(CLI::IsMember({"welch", "pooled"}))
      ->capture_default_str();
  cmd->add_flag("--no-log", flags.no_log, "Test raw values instead of log2(v + 1)");
  cmd->add_option("--kappa", flags.kappa, "Fixed kappa; skips fitting");
  cmd->add_option("--kappa-min", config.analysis.fit.kappa_min, "Lower kappa bracket")
      ->capture_default_str();
  cmd->add_option("--kappa-max", config.analysis.fit.kappa_max, "Upper kappa bracket")
      ->capture_default_str();
  cmd->add_option("--kappa-tol", config.analysis.fit.tolerance, "Tolerance on log(kappa)")
      ->capture_default_str();
  cmd->add_option("--gap-threshold", config.analysis.detect.gap_threshold,
                  "Gap (in sd) at which the top case is labelled a candidate")
      ->capture_default_str();
  cmd->add_flag("--zscore", flags.zscore, "Center scores before dividing by the sd");
  cmd->add_option("--fixed-weights", flags.fixed, "Also plot a fixed weight scheme")
      ->check(CLI::IsMember({"rr", "roc"}));
  cmd->add_option("--threads", config.analysis.threads, "Worker threads (0 = all)")
      ->envname("RANKSENTINEL_THREADS");
}

void finish(CLI::App* cmd, RunConfig& config, const RunFlags& flags) {
  if (flags.delimiter == "tab") config.load.delimiter = '\t';
  if (flags.delimiter == "comma") config.load.delimiter = ',';
  config.normalize = !flags.no_normalize;
  config.filter = !flags.no_filter;
  if (cmd->count("--seed")) config.seed = flags.seed;
  if (cmd->count("--kappa")) config.analysis.kappa = flags.kappa;
  if (!flags.fixed.empty()) config.fixed_weights = parse_fixed_scheme(flags.fixed);
  config.analysis.rank.variant = flags.ttest == "pooled" ? TTestVariant::pooled : TTestVariant::welch;
  config.analysis.rank.log_transform = !flags.no_log;
  config.analysis.detect.standardization =
      flags.zscore ? Standardization::zscore : Standardization::scale;
  config.metric = parse_metric(flags.metric);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect influential points in t-test feature rankings by leave-one-out re-ranking"};
  app.set_version_flag("--version", tool_version());
  app.set_config("--config", "", "TOML/INI file of option defaults; flags take precedence");
  app.require_subcommand(1);

  RunConfig detect_config;
  RunFlags detect_flags;
  auto* detect = app.add_subcommand("detect", "Rank, re-rank without each case, score influence");
  add_run_options(detect, detect_config, detect_flags);
  detect->add_option("--metric", detect_flags.metric, "Influence metric")
      ->check(CLI::IsMember({"adaptive", "spearman", "wspearman"}))
      ->capture_default_str();

  RunConfig compare_config;
  RunFlags compare_flags;
  auto* compare = app.add_subcommand("compare", "Score influence with all three metrics");
  add_run_options(compare, compare_config, compare_flags);

  SyntheticSpec spec;
  std::size_t contaminated = 1;
  std::string matrix_out = "synthetic_matrix.tsv";
  std::string labels_out = "synthetic_labels.tsv";
  auto* gen = app.add_subcommand("generate", "Write a synthetic data set with a planted case");
  gen->add_option("--cases", spec.n_cases, "Case-group samples")->capture_default_str();
  gen->add_option("--controls", spec.n_controls, "Control-group samples")->capture_default_str();
  gen->add_option("--features", spec.n_features, "Features")->capture_default_str();
  gen->add_option("--signal", spec.signal_features, "Differentially expressed features")
      ->capture_default_str();
  gen->add_option("--effect", spec.effect_size, "Group shift of signal features, in sd")
      ->capture_default_str();
  gen->add_option("--contaminated", contaminated, "1-based sample receiving the extra shift")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen->add_option("--magnitude", spec.magnitude, "Extra shift of the contaminated sample, in sd")
      ->capture_default_str();
  gen->add_option("--seed", spec.seed, "Random seed")->required();
  gen->add_option("--matrix-out", matrix_out, "Matrix file to write")->capture_default_str();
  gen->add_option("--labels-out", labels_out, "Label file to write")->capture_default_str();

  double kappa = 0.0;
  std::size_t m = 200;
  std::string fixed;
  std::string weights_dir = ".";
  auto* weights = app.add_subcommand("weights-table", "Dump a weight curve for a kappa and m");
  weights->add_option("--kappa", kappa, "Curve steepness");
  weights->add_option("--m", m, "List length")->check(CLI::PositiveNumber)->capture_default_str();
  weights->add_option("--fixed-weights", fixed, "Fixed scheme column and plot")
      ->check(CLI::IsMember({"rr", "roc"}));
  weights->add_option("-o,--output", weights_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::input);
  }

  try {
    if (*detect) {
      finish(detect, detect_config, detect_flags);
      const auto result = run_detect(detect_config);
      if (result.scores.report) {
        const auto& r = *result.scores.report;
        std::cout << (r.candidate ? "candidate influential point: " : "top case (no clear gap): ")
                  << "obs" << r.flagged + 1 << " (" << r.case_ids[r.flagged]
                  << "), gap " << r.gap << " sd\n";
      } else {
        std::cout << "no rank changes: no case alters the top-" << detect_config.analysis.top_m
                  << " ranking\n";
      }
    } else if (*compare) {
      finish(compare, compare_config, compare_flags);
      const auto scores = run_compare(compare_config);
      for (const auto& s : scores) {
        std::cout << metric_name(s.metric) << ": ";
        if (s.report) {
          std::cout << "obs" << s.report->flagged + 1 << " (gap " << s.report->gap << " sd)\n";
        } else {
          std::cout << "no rank changes\n";
        }
      }
    } else if (*gen) {
      spec.contaminated = contaminated - 1;
      run_generate(spec, matrix_out, labels_out);
    } else if (*weights) {
      std::optional<double> k;
      if (weights->count("--kappa")) k = kappa;
      std::optional<FixedScheme> scheme;
      if (!fixed.empty()) scheme = parse_fixed_scheme(fixed);
      run_weights_table(k, m, scheme, weights_dir);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
