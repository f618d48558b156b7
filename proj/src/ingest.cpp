#include "ranksentinel/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ranksentinel/errors.hpp"

namespace ranksentinel {

namespace {

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    auto end = line.find(delimiter, start);
    fields.push_back(line.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return fields;
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

double parse_number(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw InputError("non-numeric cell '" + field + "' on line " + std::to_string(line_no));
  }
  return v;
}

std::optional<Group> parse_label(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "case") return Group::tumor;
  if (s == "control") return Group::control;
  return std::nullopt;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

char detect_delimiter(const std::string& first_line) {
  const auto tabs = std::count(first_line.begin(), first_line.end(), '\t');
  const auto commas = std::count(first_line.begin(), first_line.end(), ',');
  return commas > tabs ? ',' : '\t';
}

ExpressionMatrix parse_matrix(std::istream& matrix, std::istream& labels,
                              const LoadOptions& options) {
  ExpressionMatrix x;

  std::string line;
  if (!next_line(matrix, line)) throw InputError("matrix file is empty");
  const char delim = options.delimiter.value_or(detect_delimiter(line));

  auto header = split(line, delim);
  if (header.size() < 2) throw InputError("matrix header has no sample columns");
  for (std::size_t c = 1; c < header.size(); ++c) x.sample_ids.push_back(trim(header[c]));
  const std::size_t n = x.sample_ids.size();

  std::size_t line_no = 1;
  while (next_line(matrix, line)) {
    ++line_no;
    auto fields = split(line, delim);
    if (fields.size() != n + 1) {
      throw InputError("line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(n + 1));
    }
    x.feature_ids.push_back(trim(fields[0]));
    for (std::size_t c = 1; c <= n; ++c) x.values.push_back(parse_number(fields[c], line_no));
  }
  if (x.feature_ids.empty()) throw InputError("matrix file has no feature rows");

  // Labels: header row is optional, recognized by a second field that is not a label.
  std::unordered_map<std::string, Group> by_sample;
  bool first = true;
  std::size_t label_line = 0;
  while (next_line(labels, line)) {
    ++label_line;
    const char ldelim = options.delimiter.value_or(detect_delimiter(line));
    auto fields = split(line, ldelim);
    if (fields.size() < 2) {
      throw InputError("label line " + std::to_string(label_line) + " needs two fields");
    }
    auto label = parse_label(trim(fields[1]));
    if (!label) {
      if (first) {
        first = false;
        continue;
      }
      throw InputError("unknown label '" + fields[1] + "' on label line " +
                       std::to_string(label_line) + " (expected case or control)");
    }
    first = false;
    auto id = trim(fields[0]);
    if (!by_sample.emplace(id, *label).second) {
      throw InputError("duplicate sample id '" + id + "' in label file");
    }
  }

  std::unordered_set<std::string> in_matrix;
  for (const auto& id : x.sample_ids) {
    if (!in_matrix.insert(id).second) throw InputError("duplicate sample id '" + id + "'");
    auto it = by_sample.find(id);
    if (it == by_sample.end()) throw InputError("sample '" + id + "' has no label");
    x.labels.push_back(it->second);
  }
  for (const auto& [id, g] : by_sample) {
    if (!in_matrix.count(id)) {
      throw InputError("labelled sample '" + id + "' is missing from the matrix");
    }
  }

  x.validate();
  return x;
}

ExpressionMatrix load_matrix(const std::filesystem::path& matrix_path,
                             const std::filesystem::path& label_path,
                             const LoadOptions& options) {
  auto m = open(matrix_path);
  auto l = open(label_path);
  return parse_matrix(m, l, options);
}

std::vector<std::string> load_exclusion_list(const std::filesystem::path& path) {
  auto in = open(path);
  std::vector<std::string> ids;
  std::string line;
  while (next_line(in, line)) {
    auto id = trim(line);
    if (id.empty() || id.front() == '#') continue;
    ids.push_back(std::move(id));
  }
  return ids;
}

ExpressionMatrix filter_low_expressed(const ExpressionMatrix& x) {
  const double half = static_cast<double>(x.samples()) / 2.0;
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < x.features(); ++j) {
    auto r = x.row(j);
    const auto zeros = std::count(r.begin(), r.end(), 0.0);
    if (static_cast<double>(zeros) <= half) keep.push_back(j);
  }
  if (keep.empty()) throw InputError("low-expression filter removed every feature");
  return x.select_features(keep);
}

ExpressionMatrix cpm_normalize(const ExpressionMatrix& x) {
  std::vector<long double> column_sum(x.samples(), 0.0L);
  for (std::size_t j = 0; j < x.features(); ++j) {
    for (std::size_t s = 0; s < x.samples(); ++s) column_sum[s] += x.at(j, s);
  }
  for (std::size_t s = 0; s < x.samples(); ++s) {
    if (!(column_sum[s] > 0.0L)) {
      throw InputError("sample '" + x.sample_ids[s] + "' has a zero column sum");
    }
  }
  ExpressionMatrix out = x;
  for (std::size_t j = 0; j < x.features(); ++j) {
    for (std::size_t s = 0; s < x.samples(); ++s) {
      out.at(j, s) = static_cast<double>(x.at(j, s) / column_sum[s] * 1e6L);
    }
  }
  return out;
}

ExpressionMatrix balance_groups(const ExpressionMatrix& x, unsigned ratio, std::uint64_t seed) {
  if (ratio == 0) throw InputError("balance ratio must be a positive integer");
  std::vector<std::size_t> tumor, control;
  for (std::size_t s = 0; s < x.samples(); ++s) {
    (x.labels[s] == Group::tumor ? tumor : control).push_back(s);
  }
  const std::size_t want = static_cast<std::size_t>(ratio) * control.size();
  if (tumor.size() < want) {
    throw InputError("insufficient cases: " + std::to_string(tumor.size()) + " available, " +
                     std::to_string(want) + " required for ratio " + std::to_string(ratio));
  }
  std::vector<std::size_t> drawn;
  drawn.reserve(want);
  std::mt19937_64 rng(seed);
  std::sample(tumor.begin(), tumor.end(), std::back_inserter(drawn), want, rng);

  std::vector<std::size_t> keep = control;
  keep.insert(keep.end(), drawn.begin(), drawn.end());
  std::sort(keep.begin(), keep.end());
  return x.select_samples(keep);
}

ExpressionMatrix drop_features(const ExpressionMatrix& x,
                               const std::vector<std::string>& excluded) {
  std::unordered_set<std::string> drop(excluded.begin(), excluded.end());
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < x.features(); ++j) {
    if (!drop.count(x.feature_ids[j])) keep.push_back(j);
  }
  if (keep.empty()) throw InputError("exclusion list removed every feature");
  return x.select_features(keep);
}

void write_matrix(const ExpressionMatrix& x, const std::filesystem::path& matrix_path,
                  const std::filesystem::path& label_path, char delimiter) {
  std::ofstream m(matrix_path, std::ios::binary);
  if (!m) throw InputError("cannot write '" + matrix_path.string() + "'");
  m << "feature_id";
  for (const auto& s : x.sample_ids) m << delimiter << s;
  m << '\n';
  char buf[32];
  for (std::size_t j = 0; j < x.features(); ++j) {
    m << x.feature_ids[j];
    for (std::size_t s = 0; s < x.samples(); ++s) {
      std::snprintf(buf, sizeof buf, "%.17g", x.at(j, s));
      m << delimiter << buf;
    }
    m << '\n';
  }

  std::ofstream l(label_path, std::ios::binary);
  if (!l) throw InputError("cannot write '" + label_path.string() + "'");
  l << "sample_id" << delimiter << "label\n";
  for (std::size_t s = 0; s < x.samples(); ++s) {
    l << x.sample_ids[s] << delimiter << group_name(x.labels[s]) << '\n';
  }
}

}  // namespace ranksentinel
