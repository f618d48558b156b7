#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ranksentinel/errors.hpp"
#include "ranksentinel/influence.hpp"
#include "support/scenarios.hpp"

using namespace ranksentinel;

namespace {

std::vector<std::uint32_t> iota_ranks(std::size_t m) {
  std::vector<std::uint32_t> r(m);
  for (std::size_t k = 0; k < m; ++k) r[k] = static_cast<std::uint32_t>(k + 1);
  return r;
}

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("obs" + std::to_string(i + 1));
  return out;
}

}  // namespace

TEST_CASE("total rank change") {
  WeightModel model(0.010, 200);
  auto original = iota_ranks(200);

  SUBCASE("unchanged ranks score zero") {
    CHECK(total_rank_change(model, original, original) == 0.0);
  }
  SUBCASE("swapping the top two features") {
    auto loo = original;
    std::swap(loo[0], loo[1]);
    const double w1 = model(1), w2 = model(2);
    CHECK(total_rank_change(model, original, loo) ==
          doctest::Approx(2 * (w1 - w2) * (w1 - w2)).epsilon(1e-12));
    // first three positions of a list of length 3, weighted with the m = 200 curve
    std::vector<std::uint32_t> three{1, 2, 3}, swapped{2, 1, 3};
    CHECK(total_rank_change(model, three, swapped) ==
          doctest::Approx(2 * (w1 - w2) * (w1 - w2)).epsilon(1e-12));
    CHECK(std::abs(w1 - 0.0115) < 1e-4);
    CHECK(std::abs(w2 - 0.0113) < 1e-4);
  }
  SUBCASE("the same displacement costs more near the top") {
    std::vector<std::uint32_t> a{1}, a_moved{201}, b{199}, b_moved{399};
    CHECK(total_rank_change(model, a, a_moved) > total_rank_change(model, b, b_moved));
  }
  SUBCASE("mismatched lengths") {
    std::vector<std::uint32_t> shorter{1, 2};
    CHECK_THROWS_AS(total_rank_change(model, original, shorter), InputError);
  }
  SUBCASE("zero exactly when nothing moved") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
      auto loo = original;
      const auto k = rng() % 200;
      loo[k] += 1 + static_cast<std::uint32_t>(rng() % 50);
      CHECK(total_rank_change(model, original, loo) > 0.0);
    }
  }
}

TEST_CASE("total rank change is symmetric under feature relabeling") {
  WeightModel model(0.02, 100);
  std::mt19937_64 rng(4);
  auto original = iota_ranks(100);
  auto loo = original;
  std::shuffle(loo.begin(), loo.end(), rng);
  std::vector<std::size_t> perm(100);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::uint32_t> po(100), pl(100);
  for (std::size_t j = 0; j < 100; ++j) {
    po[j] = original[perm[j]];
    pl[j] = loo[perm[j]];
  }
  CHECK(total_rank_change(model, po, pl) ==
        doctest::Approx(total_rank_change(model, original, loo)).epsilon(1e-12));
}

TEST_CASE("one more changed pair strictly increases the score") {
  WeightModel model(0.01, 200);
  auto original = iota_ranks(200);
  auto loo = original;
  double previous = 0;
  for (std::size_t k = 0; k < 200; k += 7) {
    loo[k] = static_cast<std::uint32_t>(250 + k);
    const double score = total_rank_change(model, original, loo);
    CHECK(score > previous);
    previous = score;
  }
}

TEST_CASE("collect_changes and parallel scoring") {
  auto s = scenario::head_vs_tail(3);
  auto changes = collect_changes(s.loo);
  CHECK(changes.m == 200);
  REQUIRE_FALSE(changes.empty());
  for (const auto& c : changes.pairs) {
    CHECK(c.original >= 1);
    CHECK(c.original <= 200);
    CHECK(c.loo != c.original);
    CHECK(s.loo.ranks(c.deleted_case)[c.original - 1] == c.loo);
  }
  WeightModel model(0.015, 200);
  auto serial = total_rank_changes_serial(model, s.loo);
  for (unsigned threads : {1U, 2U, 7U}) {
    CHECK(total_rank_changes(model, s.loo, threads) == serial);
  }
}

TEST_CASE("standardize") {
  const std::vector<double> xs{2, 4, 6};
  const double s = 2.0;  // sample sd of {2, 4, 6}
  auto out = standardize(xs);
  CHECK(out[0] == doctest::Approx(2 / s));
  CHECK(out[1] == doctest::Approx(4 / s));
  CHECK(out[2] == doctest::Approx(6 / s));
  auto z = standardize(xs, Standardization::zscore);
  CHECK(z[0] == doctest::Approx(-1));
  CHECK(z[2] == doctest::Approx(1));

  std::mt19937_64 rng(8);
  std::exponential_distribution<double> e(3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(5 + trial);
    for (auto& x : v) x = e(rng);
    auto st = standardize(v);
    CHECK(std::abs(sample_sd(st) - 1.0) < 1e-12);
    CHECK(std::max_element(st.begin(), st.end()) - st.begin() ==
          std::max_element(v.begin(), v.end()) - v.begin());
  }

  CHECK_THROWS_AS(standardize(std::vector<double>{3, 3, 3}), DegenerateError);
  CHECK_THROWS_AS(standardize(std::vector<double>{3}), DegenerateError);
}

TEST_CASE("detect_ip") {
  SUBCASE("one outstanding score") {
    std::vector<double> scores(40, 1.0);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> noise(0, 0.1);
    for (auto& x : scores) x += noise(rng);
    scores[12] = 50;
    auto r = detect_ip(scores, ids(40));
    CHECK(r.flagged == 12);
    CHECK(r.case_ids[r.flagged] == "obs13");
    CHECK(r.candidate);
    CHECK(r.gap > 5);
    CHECK(r.raw_scores == scores);
  }
  SUBCASE("two near-tied maxima") {
    std::vector<double> scores{1, 1.2, 0.9, 9.0, 1.1, 8.95, 1.0};
    auto r = detect_ip(scores, ids(7));
    CHECK(r.flagged == 3);
    CHECK_FALSE(r.candidate);
    CHECK(r.gap < 0.1);
    CHECK(r.note.find("several cases") != std::string::npos);
  }
  SUBCASE("no outstanding case") {
    std::vector<double> scores(30);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(1.0, 1.001);
    for (auto& x : scores) x = u(rng);
    auto r = detect_ip(scores, ids(30));
    CHECK(r.flagged < 30);
    CHECK_FALSE(r.candidate);
  }
  SUBCASE("exact ties resolve to the first case") {
    auto r = detect_ip({1, 5, 2, 5}, ids(4));
    CHECK(r.flagged == 1);
    CHECK(r.gap == 0.0);
  }
  SUBCASE("threshold") {
    std::vector<double> scores{1, 2, 3, 6};
    DetectOptions strict;
    strict.gap_threshold = 10;
    CHECK_FALSE(detect_ip(scores, ids(4), strict).candidate);
    CHECK(detect_ip(scores, ids(4)).candidate);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(detect_ip({1, 2}, ids(2)), DegenerateError);
    CHECK_THROWS_AS(detect_ip({1, 2, 3}, ids(2)), InputError);
    CHECK_THROWS_AS(detect_ip({0, 0, 0}, ids(3)), DegenerateError);
  }
}
