#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ranksentinel/matrix.hpp"

namespace ranksentinel {

struct LoadOptions {
  /// Field separator; detected from the first line (tab or comma) when unset.
  std::optional<char> delimiter;
};

/// Reads a delimited matrix (header of sample ids, first column of feature ids)
/// and a two-column `sample_id,label` file with labels in {case, control}.
ExpressionMatrix load_matrix(const std::filesystem::path& matrix_path,
                             const std::filesystem::path& label_path,
                             const LoadOptions& options = {});

ExpressionMatrix parse_matrix(std::istream& matrix, std::istream& labels,
                              const LoadOptions& options = {});

/// One feature id per line; blank lines and `#` comments ignored.
std::vector<std::string> load_exclusion_list(const std::filesystem::path& path);

/// Removes every feature that is exactly zero in strictly more than half of the samples.
ExpressionMatrix filter_low_expressed(const ExpressionMatrix& x);

/// Rescales each sample to counts per million.
ExpressionMatrix cpm_normalize(const ExpressionMatrix& x);

/// Keeps all controls and a seeded uniform subsample of `ratio * controls` tumor cases.
/// Retained samples keep their original column order.
ExpressionMatrix balance_groups(const ExpressionMatrix& x, unsigned ratio, std::uint64_t seed);

/// Drops the listed features; ids not present in the matrix are ignored.
ExpressionMatrix drop_features(const ExpressionMatrix& x, const std::vector<std::string>& excluded);

void write_matrix(const ExpressionMatrix& x, const std::filesystem::path& matrix_path,
                  const std::filesystem::path& label_path, char delimiter = '\t');

char detect_delimiter(const std::string& first_line);

}  // namespace ranksentinel
