#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace ranksentinel {

/// Normalized exponential rank weights:
///
///     w(x) = -(1 - e^k) / (1 - e^(-k m)) * e^(-k x)
///
/// which sum to one over x = 1..m for every k > 0. As k -> 0 the weights
/// tend to the uniform 1/m. The formula is also evaluated for x > m, giving
/// smaller positive weights to ranks that fell out of the top-m window.
class WeightModel {
public:
  WeightModel(double kappa, std::size_t m);

  double kappa() const noexcept { return kappa_; }
  std::size_t m() const noexcept { return m_; }
  double normalizer() const noexcept { return normalizer_; }

  double weight(double rank) const noexcept;
  double operator()(double rank) const noexcept { return weight(rank); }
  /// Same curve in long double. Stays positive and strictly decreasing where
  /// the double result has underflowed (k x beyond ~745).
  long double weight_extended(long double rank) const noexcept;

  /// Weights of ranks 1..m.
  std::vector<double> curve() const;

private:
  double kappa_;
  std::size_t m_;
  double normalizer_;
};

struct RankChange {
  std::uint32_t original;  // x', rank in the original list, 1..m
  std::uint32_t loo;       // x, rank after deleting the case
  std::uint32_t deleted_case;
};

/// Pooled (original, leave-one-out) rank pairs that differ, over all deletions.
struct RankChangeSet {
  std::vector<RankChange> pairs;
  std::size_t m = 0;

  bool empty() const noexcept { return pairs.empty(); }
  std::size_t size() const noexcept { return pairs.size(); }
};

/// Coefficient of determination of the weighted leave-one-out ranks f(w|k,x)
/// predicted by the weighted original ranks f(w'|k,x'):
///
///     1 - sum (f(x') - f(x))^2 / sum (f(x) - mean f(x))^2
///
/// Throws DegenerateError on an empty set or a zero denominator.
double r_squared(const RankChangeSet& changes, double kappa);

struct FitOptions {
  double kappa_min = 1e-6;
  double kappa_max = 10.0;
  /// Bracket width at which golden-section refinement stops, in log(kappa).
  double tolerance = 1e-8;
  std::size_t grid_points = 50;
  /// OpenMP threads for the coarse grid; 0 uses the default.
  unsigned threads = 0;
};

struct KappaFit {
  WeightModel model;
  double r_squared;
  std::size_t evaluations;
};

/// Maximizes r_squared over [kappa_min, kappa_max]: a log-spaced coarse grid
/// picks the bracketing cell, then golden-section search refines in log(kappa).
/// Throws OptimizationError if the objective is undefined on the whole grid.
KappaFit fit_kappa(const RankChangeSet& changes, const FitOptions& options = {});

struct GoldenResult {
  double argmax;
  double value;
  std::size_t evaluations;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
GoldenResult golden_section_maximize(const std::function<double(double)>& f, double lo,
                                     double hi, double tolerance,
                                     std::size_t max_iterations = 200);

}  // namespace ranksentinel
