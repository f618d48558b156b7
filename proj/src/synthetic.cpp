#include "ranksentinel/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ranksentinel/errors.hpp"

namespace ranksentinel {

void validate(const SyntheticSpec& spec) {
  if (spec.n_cases < 3 || spec.n_controls < 3) {
    throw InputError("synthetic data needs at least three cases and three controls");
  }
  if (spec.n_features == 0) throw InputError("synthetic data needs at least one feature");
  if (spec.signal_features > spec.n_features) {
    throw InputError("more signal features than features");
  }
  if (spec.contaminated >= spec.n_cases + spec.n_controls) {
    throw InputError("contaminated sample index is out of range");
  }
  if (!std::isfinite(spec.effect_size) || !std::isfinite(spec.magnitude) || spec.magnitude < 0) {
    throw InputError("effect size must be finite and magnitude finite and non-negative");
  }
}

ExpressionMatrix generate(const SyntheticSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n_cases + spec.n_controls;

  ExpressionMatrix x;
  for (std::size_t s = 0; s < n; ++s) {
    x.sample_ids.push_back("obs" + std::to_string(s + 1));
    x.labels.push_back(s < spec.n_cases ? Group::tumor : Group::control);
  }
  const auto width = std::to_string(spec.n_features).size();
  for (std::size_t j = 0; j < spec.n_features; ++j) {
    auto id = std::to_string(j + 1);
    x.feature_ids.push_back("gene" + std::string(width - id.size(), '0') + id);
  }

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> location(4.0, 10.0);
  std::uniform_real_distribution<double> spread(0.5, 1.5);
  std::normal_distribution<double> noise(0.0, 1.0);

  x.values.resize(spec.n_features * n);
  for (std::size_t j = 0; j < spec.n_features; ++j) {
    const double mu = location(rng);
    const double sigma = spread(rng);
    const bool signal = j < spec.signal_features;
    const double direction = j % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t s = 0; s < n; ++s) {
      double log_value = mu + sigma * noise(rng);
      if (signal && x.labels[s] == Group::tumor) log_value += spec.effect_size * sigma;
      if (signal && s == spec.contaminated) log_value += direction * spec.magnitude * sigma;
      x.at(j, s) = std::max(0.0, std::exp2(log_value) - 1.0);
    }
  }
  return x;
}

}  // namespace ranksentinel
