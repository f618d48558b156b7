#include "ranksentinel/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "ranksentinel/errors.hpp"

namespace ranksentinel {

WeightModel::WeightModel(double kappa, std::size_t m) : kappa_(kappa), m_(m) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw InputError("kappa must be a positive finite number");
  }
  if (m == 0) throw InputError("list length m must be at least 1");
  // -(1 - e^k) / (1 - e^(-k m)), written with expm1 so small k keeps its digits.
  normalizer_ = std::expm1(kappa) / -std::expm1(-kappa * static_cast<double>(m));
}

double WeightModel::weight(double rank) const noexcept {
  return normalizer_ * std::exp(-kappa_ * rank);
}

long double WeightModel::weight_extended(long double rank) const noexcept {
  const long double k = kappa_;
  return std::expm1(k) / -std::expm1(-k * static_cast<long double>(m_)) * std::exp(-k * rank);
}

std::vector<double> WeightModel::curve() const {
  std::vector<double> w(m_);
  for (std::size_t x = 1; x <= m_; ++x) w[x - 1] = weight(static_cast<double>(x));
  return w;
}

double r_squared(const RankChangeSet& changes, double kappa) {
  if (changes.empty()) throw DegenerateError("rank change set is empty");
  if (!(kappa > 0.0)) throw InputError("kappa must be positive");

  // R^2 is invariant to a common scale and shift of the weighted ranks, so the
  // normalizer drops out and e^(-k x) can be replaced by expm1(-k (x - x0)).
  // That keeps far-tail terms from underflowing against the head and keeps
  // precision as k -> 0.
  std::uint32_t x0 = std::numeric_limits<std::uint32_t>::max();
  for (const auto& c : changes.pairs) x0 = std::min({x0, c.original, c.loo});
  auto f = [&](std::uint32_t x) {
    return static_cast<long double>(std::expm1(-kappa * static_cast<double>(x - x0)));
  };

  long double sum = 0.0L;
  long double sse = 0.0L;
  for (const auto& c : changes.pairs) {
    const long double observed = f(c.loo);
    const long double eps = f(c.original) - observed;
    sum += observed;
    sse += eps * eps;
  }
  const long double mean = sum / static_cast<long double>(changes.size());
  long double sst = 0.0L;
  for (const auto& c : changes.pairs) {
    const long double d = f(c.loo) - mean;
    sst += d * d;
  }
  if (!(sst > 0.0L)) {
    throw DegenerateError("weighted leave-one-out ranks have zero variance");
  }
  return static_cast<double>(1.0L - sse / sst);
}

GoldenResult golden_section_maximize(const std::function<double(double)>& f, double lo,
                                     double hi, double tolerance, std::size_t max_iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  GoldenResult best{lo, f(lo), 1};
  auto consider = [&](double x, double fx) {
    if (fx > best.value) {
      best.argmax = x;
      best.value = fx;
    }
  };
  consider(hi, f(hi));
  best.evaluations = 2;

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  best.evaluations += 2;
  consider(c, fc);
  consider(d, fd);

  for (std::size_t it = 0; it < max_iterations && (b - a) > tolerance; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
    ++best.evaluations;
  }
  return best;
}

KappaFit fit_kappa(const RankChangeSet& changes, const FitOptions& options) {
  if (!(options.kappa_min > 0.0) || !(options.kappa_min < options.kappa_max)) {
    throw InputError("kappa bracket must satisfy 0 < kappa_min < kappa_max");
  }
  if (!(options.tolerance > 0.0)) throw InputError("kappa tolerance must be positive");
  if (options.grid_points < 3) throw InputError("kappa grid needs at least three points");
  if (changes.empty()) throw DegenerateError("rank change set is empty");
  if (changes.m == 0) throw InputError("rank change set has no list length");

  constexpr double kUndefined = -std::numeric_limits<double>::infinity();
  auto objective = [&](double log_kappa) {
    try {
      const double r2 = r_squared(changes, std::exp(log_kappa));
      return std::isfinite(r2) ? r2 : kUndefined;
    } catch (const DegenerateError&) {
      return kUndefined;
    }
  };

  const std::size_t points = options.grid_points;
  const double lo = std::log(options.kappa_min);
  const double hi = std::log(options.kappa_max);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  std::vector<double> grid(points);
  std::vector<double> value(points);
  for (std::size_t k = 0; k < points; ++k) grid[k] = lo + step * static_cast<double>(k);
  grid.back() = hi;

  const int nthreads = options.threads > 0 ? static_cast<int>(options.threads)
                                           : omp_get_max_threads();
  const auto npoints = static_cast<std::ptrdiff_t>(points);
#pragma omp parallel for num_threads(nthreads) schedule(static)
  for (std::ptrdiff_t k = 0; k < npoints; ++k) value[k] = objective(grid[k]);

  const auto best = static_cast<std::size_t>(
      std::distance(value.begin(), std::max_element(value.begin(), value.end())));
  if (value[best] == kUndefined) {
    throw OptimizationError("R-squared objective is undefined over the whole kappa bracket");
  }

  const std::size_t left = best == 0 ? 0 : best - 1;
  const std::size_t right = std::min(best + 1, points - 1);
  auto refined = golden_section_maximize(objective, grid[left], grid[right], options.tolerance);

  double log_kappa = grid[best];
  double r2 = value[best];
  if (refined.value > r2) {
    log_kappa = refined.argmax;
    r2 = refined.value;
  }
  return KappaFit{WeightModel(std::exp(log_kappa), changes.m), r2, points + refined.evaluations};
}

}  // namespace ranksentinel
