#include "ranksentinel/baselines.hpp"

#include <algorithm>
#include <string>

#include <omp.h>

#include "ranksentinel/errors.hpp"
#include "ranksentinel/influence.hpp"

namespace ranksentinel {

namespace {

void require_same_length(std::span<const std::uint32_t> r, std::span<const std::uint32_t> q) {
  if (r.size() != q.size()) throw InputError("rank lists differ in length");
}

}  // namespace

double spearman_distance(std::span<const std::uint32_t> r, std::span<const std::uint32_t> q) {
  require_same_length(r, q);
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = static_cast<double>(r[i]) - static_cast<double>(q[i]);
    total += d * d;
  }
  return total;
}

double weighted_spearman_distance(std::span<const std::uint32_t> r,
                                  std::span<const std::uint32_t> q, std::size_t m,
                                  bool* clamped) {
  require_same_length(r, q);
  const auto mm = static_cast<double>(m);
  bool any_clamped = false;
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ri = r[i];
    const double qi = q[i];
    const double d = ri - qi;
    if (d == 0.0) continue;
    if (ri > mm || qi > mm) any_clamped = true;
    const double weight = (mm - std::min(ri, mm) + 1) + (mm - std::min(qi, mm) + 1);
    total += d * d * weight;
  }
  if (clamped) *clamped = any_clamped;
  return total;
}

FixedScheme parse_fixed_scheme(std::string_view name) {
  if (name == "rr") return FixedScheme::rr;
  if (name == "roc") return FixedScheme::roc;
  throw InputError("unknown fixed weight scheme '" + std::string(name) + "' (expected rr or roc)");
}

std::vector<double> fixed_weights(FixedScheme scheme, std::size_t n) {
  if (n == 0) throw InputError("fixed weight vector length must be at least 1");
  std::vector<double> w(n);
  if (scheme == FixedScheme::rr) {
    for (std::size_t r = 1; r <= n; ++r) w[r - 1] = 1.0 / static_cast<double>(r);
    return w;
  }
  // Suffix sums of the harmonic terms, accumulated from the small end.
  double tail = 0.0;
  for (std::size_t r = n; r >= 1; --r) {
    tail += 1.0 / static_cast<double>(r);
    w[r - 1] = tail;
  }
  const double total = tail;
  for (auto& v : w) v = 100.0 * v / total;
  return w;
}

Metric parse_metric(std::string_view name) {
  if (name == "adaptive") return Metric::adaptive;
  if (name == "spearman") return Metric::spearman;
  if (name == "wspearman") return Metric::weighted_spearman;
  throw InputError("unknown metric '" + std::string(name) +
                   "' (expected adaptive, spearman or wspearman)");
}

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::adaptive: return "adaptive";
    case Metric::spearman: return "spearman";
    case Metric::weighted_spearman: return "wspearman";
  }
  return "unknown";
}

BaselineScores baseline_influence(Metric metric, const LooRankingSet& loo, unsigned threads) {
  if (metric == Metric::adaptive) {
    throw InputError("baseline_influence handles the spearman and wspearman metrics only");
  }
  const auto original = loo.original_ranks();
  BaselineScores out;
  out.raw.resize(loo.cases());
  std::vector<unsigned char> clamped(loo.cases(), 0);
  const auto n = static_cast<std::ptrdiff_t>(loo.cases());
  const int nthreads = threads > 0 ? static_cast<int>(threads) : omp_get_max_threads();
#pragma omp parallel for num_threads(nthreads) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto q = loo.ranks(static_cast<std::size_t>(i));
    if (metric == Metric::spearman) {
      out.raw[i] = spearman_distance(original, q);
    } else {
      bool c = false;
      out.raw[i] = weighted_spearman_distance(original, q, loo.m(), &c);
      clamped[i] = c;
    }
  }
  out.clamped = std::any_of(clamped.begin(), clamped.end(), [](auto c) { return c != 0; });
  out.standardized = standardize(out.raw);
  out.flagged = static_cast<std::size_t>(
      std::distance(out.raw.begin(), std::max_element(out.raw.begin(), out.raw.end())));
  return out;
}

}  // namespace ranksentinel
