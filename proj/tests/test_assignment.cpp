#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mftrack/assignment.hpp"

using namespace mft;

namespace {

// Exhaustive reference: maximum-cardinality matching of minimum total cost
// over the finite entries. Feasible for the tiny matrices used here.
struct BruteResult {
  int cardinality = 0;
  double cost = 0.0;
};

void brute_recurse(const CostMatrix& m, int row, std::vector<char>& used, int card, double cost,
                   BruteResult& best) {
  if (row == m.rows) {
    if (card > best.cardinality || (card == best.cardinality && cost < best.cost)) {
      best = {card, cost};
    }
    return;
  }
  brute_recurse(m, row + 1, used, card, cost, best);
  for (int c = 0; c < m.cols; ++c) {
    if (used[static_cast<size_t>(c)] || std::isinf(m.at(row, c))) continue;
    used[static_cast<size_t>(c)] = 1;
    brute_recurse(m, row + 1, used, card + 1, cost + m.at(row, c), best);
    used[static_cast<size_t>(c)] = 0;
  }
}

BruteResult brute_force(const CostMatrix& m) {
  BruteResult best{-1, 0.0};
  std::vector<char> used(static_cast<size_t>(m.cols), 0);
  brute_recurse(m, 0, used, 0, 0.0, best);
  return best;
}

CostMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
  CostMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  return m;
}

void check_partition(const CostMatrix& m, const Assignment& a) {
  std::vector<int> row_seen(static_cast<size_t>(m.rows), 0);
  std::vector<int> col_seen(static_cast<size_t>(m.cols), 0);
  for (const auto& p : a.matched) {
    ++row_seen[static_cast<size_t>(p.track)];
    ++col_seen[static_cast<size_t>(p.detection)];
    CHECK(p.cost == m.at(p.track, p.detection));
    CHECK(!std::isinf(p.cost));
  }
  for (int r : a.unmatched_tracks) ++row_seen[static_cast<size_t>(r)];
  for (int c : a.unmatched_detections) ++col_seen[static_cast<size_t>(c)];
  for (int v : row_seen) CHECK(v == 1);
  for (int v : col_seen) CHECK(v == 1);
}

}  // namespace

TEST_CASE("solve_assignment documented example") {
  const auto a = solve_assignment(from_rows({{1, 2}, {2, 4}}));
  REQUIRE(a.matched.size() == 2);
  CHECK(a.matched[0].track == 0);
  CHECK(a.matched[0].detection == 1);
  CHECK(a.matched[1].track == 1);
  CHECK(a.matched[1].detection == 0);
  CHECK(a.total_cost() == 4.0);
}

TEST_CASE("solve_assignment prefers cardinality over cost") {
  // Greedy cost-first would leave row 1 stranded on its cheap entry.
  const double inf = CostMatrix::forbidden();
  const auto a = solve_assignment(from_rows({{0.5, inf}, {0.0, inf}}));
  REQUIRE(a.matched.size() == 1);
  CHECK(a.matched[0].track == 1);
  CHECK(a.matched[0].detection == 0);
  CHECK(a.total_cost() == 0.0);
  CHECK(a.unmatched_tracks == std::vector<int>{0});
  CHECK(a.unmatched_detections == std::vector<int>{1});
}

TEST_CASE("solve_assignment rectangular shapes") {
  SUBCASE("wide") {
    const auto a = solve_assignment(from_rows({{5, 1, 3}}));
    REQUIRE(a.matched.size() == 1);
    CHECK(a.matched[0].detection == 1);
    CHECK(a.unmatched_detections == std::vector<int>{0, 2});
  }
  SUBCASE("tall") {
    const auto a = solve_assignment(from_rows({{5}, {1}, {3}}));
    REQUIRE(a.matched.size() == 1);
    CHECK(a.matched[0].track == 1);
    CHECK(a.unmatched_tracks == std::vector<int>{0, 2});
  }
  SUBCASE("empty") {
    const auto a = solve_assignment(CostMatrix(0, 3));
    CHECK(a.matched.empty());
    CHECK(a.unmatched_detections == std::vector<int>{0, 1, 2});
    const auto b = solve_assignment(CostMatrix(0, 0));
    CHECK(b.matched.empty());
    CHECK(b.unmatched_tracks.empty());
  }
}

TEST_CASE("solve_assignment all-forbidden matrix") {
  const double inf = CostMatrix::forbidden();
  const auto a = solve_assignment(from_rows({{inf, inf}, {inf, inf}}));
  CHECK(a.matched.empty());
  CHECK(a.unmatched_tracks == std::vector<int>{0, 1});
  CHECK(a.unmatched_detections == std::vector<int>{0, 1});
}

TEST_CASE("solve_assignment handles negative entries") {
  const auto a = solve_assignment(from_rows({{-3, 4}, {-1, -2}}));
  CHECK(a.total_cost() == -5.0);
  check_partition(from_rows({{-3, 4}, {-1, -2}}), a);
}

TEST_CASE("solve_assignment rejects NaN") {
  CostMatrix m(1, 1);
  m.at(0, 0) = std::nan("");
  CHECK_THROWS_AS(solve_assignment(m), std::invalid_argument);
}

TEST_CASE("solve_assignment rejects a malformed matrix") {
  CostMatrix m(2, 2);
  m.values.pop_back();
  CHECK_THROWS_AS(solve_assignment(m), std::invalid_argument);
}

TEST_CASE("equal-cost optima normalize to the lexicographically smallest pairs") {
  SUBCASE("uniform matrix") {
    const auto a = solve_assignment(from_rows({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}));
    REQUIRE(a.matched.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(a.matched[static_cast<size_t>(i)].track == i);
      CHECK(a.matched[static_cast<size_t>(i)].detection == i);
    }
  }
  SUBCASE("two tied diagonals") {
    // Both diagonals cost 4; the main diagonal wins.
    const auto a = solve_assignment(from_rows({{1, 2}, {2, 3}}));
    REQUIRE(a.matched.size() == 2);
    CHECK(a.matched[0].detection == 0);
    CHECK(a.matched[1].detection == 1);
  }
}

TEST_CASE("solve_assignment is invariant to row and column shifts") {
  const std::vector<std::vector<double>> base{{0, 5, 5}, {5, 0, 5}, {5, 5, 0}};
  const auto expect = solve_assignment(from_rows(base));

  auto shifted = base;
  for (auto& v : shifted[1]) v += 10.0;                      // row shift
  for (auto& row : shifted) row[2] += 3.0;                   // column shift
  const auto got = solve_assignment(from_rows(shifted));

  REQUIRE(got.matched.size() == expect.matched.size());
  for (size_t i = 0; i < got.matched.size(); ++i) {
    CHECK(got.matched[i].track == expect.matched[i].track);
    CHECK(got.matched[i].detection == expect.matched[i].detection);
  }
}

TEST_CASE("solve_assignment matches brute force on random matrices") {
  std::mt19937_64 rng(20240815);
  for (int iter = 0; iter < 200; ++iter) {
    const int rows = 1 + static_cast<int>(rng() % 6);
    const int cols = 1 + static_cast<int>(rng() % 6);
    CostMatrix m(rows, cols);
    for (auto& v : m.values) {
      if (rng() % 5 == 0) {
        v = CostMatrix::forbidden();
      } else {
        // Dyadic costs keep every partial sum exact.
        v = static_cast<double>(rng() % 81) / 8.0 - 5.0;
      }
    }
    const auto got = solve_assignment(m);
    const auto want = brute_force(m);
    CAPTURE(iter);
    CHECK(static_cast<int>(got.matched.size()) == want.cardinality);
    CHECK(got.total_cost() == doctest::Approx(want.cost).epsilon(1e-12));
    check_partition(m, got);

    // Same input twice gives the identical normalized assignment.
    const auto again = solve_assignment(m);
    REQUIRE(again.matched.size() == got.matched.size());
    for (size_t i = 0; i < got.matched.size(); ++i) {
      CHECK(again.matched[i].track == got.matched[i].track);
      CHECK(again.matched[i].detection == got.matched[i].detection);
    }
  }
}

TEST_CASE("gate_assignment demotes expensive pairs") {
  Assignment a;
  a.matched = {{0, 1, 0.5}, {1, 0, 0.9}, {2, 2, 0.8}};
  a.unmatched_tracks = {3};
  a.unmatched_detections = {3};

  const Assignment g = gate_assignment(a, 0.8);
  REQUIRE(g.matched.size() == 2);
  CHECK(g.matched[0].track == 0);
  CHECK(g.matched[1].track == 2);  // cost exactly tau stays matched
  CHECK(g.unmatched_tracks == std::vector<int>{1, 3});
  CHECK(g.unmatched_detections == std::vector<int>{0, 3});
}

TEST_CASE("gate_assignment validates tau") {
  const Assignment a;
  CHECK_THROWS_AS(gate_assignment(a, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gate_assignment(a, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(gate_assignment(a, 1.5), std::invalid_argument);
  CHECK_NOTHROW(gate_assignment(a, 1.0));
}
