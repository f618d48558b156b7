#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ranksentinel {

enum class Group : std::uint8_t { control = 0, tumor = 1 };

std::string_view group_name(Group g);

/// Features x samples expression values with identifiers and a binary group label per sample.
///
/// Values are stored row-major: one contiguous row per feature. The leave-one-out
/// machinery indexes cases by sample (column) position.
struct ExpressionMatrix {
  std::vector<std::string> feature_ids;
  std::vector<std::string> sample_ids;
  std::vector<Group> labels;
  std::vector<double> values;

  std::size_t features() const noexcept { return feature_ids.size(); }
  std::size_t samples() const noexcept { return sample_ids.size(); }

  double at(std::size_t feature, std::size_t sample) const noexcept {
    return values[feature * samples() + sample];
  }
  double& at(std::size_t feature, std::size_t sample) noexcept {
    return values[feature * samples() + sample];
  }

  std::span<const double> row(std::size_t feature) const noexcept {
    return {values.data() + feature * samples(), samples()};
  }

  std::size_t group_size(Group g) const noexcept;

  /// Throws InputError on duplicate ids, shape mismatch, non-finite or negative
  /// values, or an empty group.
  void validate() const;

  /// Keep the listed features (row indices, in the given order).
  ExpressionMatrix select_features(std::span<const std::size_t> rows) const;
  /// Keep the listed samples (column indices, in the given order).
  ExpressionMatrix select_samples(std::span<const std::size_t> columns) const;
};

}  // namespace ranksentinel
