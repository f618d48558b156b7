#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ranksentinel/errors.hpp"
#include "ranksentinel/ingest.hpp"

using namespace ranksentinel;

namespace {

ExpressionMatrix parse(const std::string& matrix, const std::string& labels) {
  std::istringstream m(matrix), l(labels);
  return parse_matrix(m, l);
}

const char* kMatrix =
    "gene\ts1\ts2\ts3\ts4\n"
    "A\t1\t2\t3\t4\n"
    "B\t0\t0\t0\t5\n"
    "C\t0\t7\t0\t1\n";
const char* kLabels = "sample,label\ns1,case\ns2,case\ns3,control\ns4,control\n";

ExpressionMatrix groups(std::size_t tumor, std::size_t control) {
  ExpressionMatrix x;
  x.feature_ids = {"g"};
  for (std::size_t s = 0; s < tumor + control; ++s) {
    x.sample_ids.push_back("s" + std::to_string(s));
    x.labels.push_back(s < tumor ? Group::tumor : Group::control);
    x.values.push_back(static_cast<double>(s + 1));
  }
  return x;
}

}  // namespace

TEST_CASE("load_matrix reads a well-formed file") {
  auto x = parse(kMatrix, kLabels);
  CHECK(x.features() == 3);
  CHECK(x.samples() == 4);
  CHECK(x.feature_ids[2] == "C");
  CHECK(x.at(1, 3) == 5.0);
  CHECK(x.labels[0] == Group::tumor);
  CHECK(x.labels[3] == Group::control);
}

TEST_CASE("comma-delimited input and headerless labels") {
  auto x = parse("id,a,b,c,d\nA,1,2,3,4\n", "a,case\nb,control\nc,case\nd,control\n");
  CHECK(x.samples() == 4);
  CHECK(x.labels[1] == Group::control);
  CHECK(detect_delimiter("a\tb,c\td") == '\t');
  CHECK(detect_delimiter("a,b,c") == ',');
}

TEST_CASE("load_matrix validation errors") {
  CHECK_THROWS_AS(parse("g\ts1\ts1\ts3\ts4\nA\t1\t2\t3\t4\n", kLabels), InputError);
  CHECK_THROWS_AS(parse(kMatrix, "s1,case\ns2,case\ns3,control\n"), InputError);
  CHECK_THROWS_AS(parse(kMatrix, std::string(kLabels) + "s5,case\n"), InputError);
  CHECK_THROWS_AS(parse("g\ts1\ts2\ts3\ts4\nA\t1\tx\t3\t4\n", kLabels), InputError);
  CHECK_THROWS_AS(parse(kMatrix, "s1,case\ns2,case\ns3,case\ns4,case\n"), InputError);
  CHECK_THROWS_AS(parse("g\ts1\ts2\ts3\ts4\nA\t1\t2\t3\t4\nA\t1\t2\t3\t4\n", kLabels), InputError);
  CHECK_THROWS_AS(parse("g\ts1\ts2\ts3\ts4\nA\t1\t2\t3\n", kLabels), InputError);
  CHECK_THROWS_AS(parse("g\ts1\ts2\ts3\ts4\nA\t1\t-2\t3\t4\n", kLabels), InputError);
}

TEST_CASE("filter_low_expressed uses a strict more-than-half rule") {
  auto x = parse(kMatrix, kLabels);
  auto f = filter_low_expressed(x);
  // B has 3 of 4 zeros (removed); C has exactly 2 (kept).
  REQUIRE(f.features() == 2);
  CHECK(f.feature_ids[0] == "A");
  CHECK(f.feature_ids[1] == "C");

  SUBCASE("no-op on positive data and idempotent") {
    auto once = filter_low_expressed(f);
    CHECK(once.feature_ids == f.feature_ids);
    CHECK(once.values == f.values);
  }
  SUBCASE("everything removed") {
    auto z = parse("g\ts1\ts2\ts3\ts4\nA\t0\t0\t0\t1\n", kLabels);
    CHECK_THROWS_AS(filter_low_expressed(z), InputError);
  }
}

TEST_CASE("cpm_normalize") {
  ExpressionMatrix x;
  x.feature_ids = {"a", "b"};
  x.sample_ids = {"s"};
  x.labels = {Group::tumor};
  x.values = {1, 3};
  auto c = cpm_normalize(x);
  CHECK(c.values[0] == doctest::Approx(250000.0));
  CHECK(c.values[1] == doctest::Approx(750000.0));

  auto again = cpm_normalize(c);
  CHECK(again.values[0] == doctest::Approx(250000.0).epsilon(1e-12));
  CHECK(again.values[1] == doctest::Approx(750000.0).epsilon(1e-12));

  x.values = {0, 0};
  CHECK_THROWS_AS(cpm_normalize(x), InputError);
}

TEST_CASE("cpm_normalize column sums and proportions (property)") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> count(0, 5000);
  for (int trial = 0; trial < 20; ++trial) {
    ExpressionMatrix x;
    const std::size_t m = 3 + trial, n = 4;
    for (std::size_t j = 0; j < m; ++j) x.feature_ids.push_back("f" + std::to_string(j));
    for (std::size_t s = 0; s < n; ++s) {
      x.sample_ids.push_back("s" + std::to_string(s));
      x.labels.push_back(s % 2 ? Group::tumor : Group::control);
    }
    for (std::size_t k = 0; k < m * n; ++k) x.values.push_back(count(rng) + 1);
    auto c = cpm_normalize(x);
    for (std::size_t s = 0; s < n; ++s) {
      double sum = 0;
      for (std::size_t j = 0; j < m; ++j) sum += c.at(j, s);
      CHECK(std::abs(sum - 1e6) <= 1e-6 * 1e6);
      CHECK(c.at(0, s) / c.at(1, s) == doctest::Approx(x.at(0, s) / x.at(1, s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("balance_groups") {
  SUBCASE("exact ratio keeps everything") {
    auto x = groups(100, 50);
    auto b = balance_groups(x, 2, 1);
    CHECK(b.group_size(Group::tumor) == 100);
    CHECK(b.group_size(Group::control) == 50);
  }
  SUBCASE("226 retained cases for 113 controls") {
    auto x = groups(500, 113);
    auto b = balance_groups(x, 2, 42);
    CHECK(b.group_size(Group::tumor) == 226);
    CHECK(b.group_size(Group::control) == 113);
    CHECK(std::is_sorted(b.values.begin(), b.values.end()));  // column order preserved
  }
  SUBCASE("deterministic for a seed") {
    auto x = groups(300, 40);
    CHECK(balance_groups(x, 2, 9).sample_ids == balance_groups(x, 2, 9).sample_ids);
    CHECK(balance_groups(x, 2, 9).sample_ids != balance_groups(x, 2, 10).sample_ids);
  }
  SUBCASE("insufficient cases") {
    CHECK_THROWS_AS(balance_groups(groups(10, 50), 2, 1), InputError);
  }
}

TEST_CASE("drop_features and exclusion files") {
  auto x = parse(kMatrix, kLabels);
  auto path = std::filesystem::temp_directory_path() / "rs_exclude.txt";
  {
    std::ofstream out(path);
    out << "# unmapped ids\nB\n\nZ\n";
  }
  auto ids = load_exclusion_list(path);
  CHECK(ids == std::vector<std::string>{"B", "Z"});
  auto d = drop_features(x, ids);
  CHECK(d.feature_ids == std::vector<std::string>{"A", "C"});
  CHECK_THROWS_AS(drop_features(x, {"A", "B", "C"}), InputError);
}

TEST_CASE("write_matrix round-trips through load_matrix") {
  auto x = parse(kMatrix, kLabels);
  auto dir = std::filesystem::temp_directory_path();
  write_matrix(x, dir / "rs_m.tsv", dir / "rs_l.tsv");
  auto y = load_matrix(dir / "rs_m.tsv", dir / "rs_l.tsv");
  CHECK(y.feature_ids == x.feature_ids);
  CHECK(y.sample_ids == x.sample_ids);
  CHECK(y.labels == x.labels);
  CHECK(y.values == x.values);
  CHECK_THROWS_AS(load_matrix(dir / "does_not_exist.tsv", dir / "rs_l.tsv"), InputError);
}
