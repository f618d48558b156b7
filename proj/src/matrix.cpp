#include "ranksentinel/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ranksentinel/errors.hpp"

namespace ranksentinel {

std::string_view group_name(Group g) { return g == Group::tumor ? "case" : "control"; }

std::size_t ExpressionMatrix::group_size(Group g) const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), g));
}

namespace {

void require_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(ids.size());
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw InputError(std::string("duplicate ") + what + " id '" + id + "'");
    }
  }
}

}  // namespace

void ExpressionMatrix::validate() const {
  require_unique(feature_ids, "feature");
  require_unique(sample_ids, "sample");
  if (labels.size() != samples()) {
    throw InputError("label count does not match sample count");
  }
  if (values.size() != features() * samples()) {
    throw InputError("value matrix shape does not match identifiers");
  }
  for (std::size_t j = 0; j < features(); ++j) {
    for (std::size_t s = 0; s < samples(); ++s) {
      const double v = at(j, s);
      if (!std::isfinite(v) || v < 0.0) {
        throw InputError("invalid value for feature '" + feature_ids[j] + "', sample '" +
                         sample_ids[s] + "': expression must be finite and non-negative");
      }
    }
  }
  if (group_size(Group::tumor) == 0) throw InputError("the case group has no samples");
  if (group_size(Group::control) == 0) throw InputError("the control group has no samples");
}

ExpressionMatrix ExpressionMatrix::select_features(std::span<const std::size_t> rows) const {
  ExpressionMatrix out;
  out.sample_ids = sample_ids;
  out.labels = labels;
  out.feature_ids.reserve(rows.size());
  out.values.reserve(rows.size() * samples());
  for (auto j : rows) {
    out.feature_ids.push_back(feature_ids[j]);
    auto r = row(j);
    out.values.insert(out.values.end(), r.begin(), r.end());
  }
  return out;
}

ExpressionMatrix ExpressionMatrix::select_samples(std::span<const std::size_t> columns) const {
  ExpressionMatrix out;
  out.feature_ids = feature_ids;
  for (auto s : columns) {
    out.sample_ids.push_back(sample_ids[s]);
    out.labels.push_back(labels[s]);
  }
  out.values.reserve(features() * columns.size());
  for (std::size_t j = 0; j < features(); ++j) {
    for (auto s : columns) out.values.push_back(at(j, s));
  }
  return out;
}

}  // namespace ranksentinel
