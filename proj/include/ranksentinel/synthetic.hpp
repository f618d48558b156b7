#pragma once

#include <cstddef>
#include <cstdint>

#include "ranksentinel/matrix.hpp"

namespace ranksentinel {

/// Planted-influential-point data. Expression is drawn on a log2 scale,
/// value = 2^(mu_j + sigma_j z) - 1, with signal features shifted upward by
/// `effect_size * sigma_j` in the case group. The contaminated sample gets an
/// extra `magnitude * sigma_j` on every signal feature, alternating in sign
/// across signal features, so its deletion reorders the signal features among themselves.
struct SyntheticSpec {
  std::size_t n_cases = 30;
  std::size_t n_controls = 30;
  std::size_t n_features = 2000;
  std::size_t signal_features = 20;
  double effect_size = 2.0;
  std::size_t contaminated = 0;  // 0-based sample position; cases come first
  double magnitude = 8.0;
  std::uint64_t seed = 1;
};

/// Throws InputError on invalid fields.
void validate(const SyntheticSpec& spec);

/// Deterministic for a fixed spec. Samples are named obs1..obsN, cases first.
ExpressionMatrix generate(const SyntheticSpec& spec);

}  // namespace ranksentinel
