#include <doctest.h>

#include <algorithm>
#include <random>

#include "sb/decomposition.hpp"
#include "sb/oracle.hpp"
#include "test_util.hpp"

using namespace sb;

TEST_CASE("enumerate_stable lists one maximal set per row subset") {
  NonnegMatrix id = NonnegMatrix::from_dense({{1, 0}, {0, 1}});
  std::vector<StableSet> sets = oracle::enumerate_stable(id);
  REQUIRE(sets.size() == 4);
  // X = {1} pairs with Y = {2} and symmetrically
  bool found = false;
  for (const StableSet& s : sets)
    found |= s.rows == std::vector<int>{0} && s.cols == std::vector<int>{1};
  CHECK(found);

  std::vector<StableSet> hall = oracle::enumerate_stable(sbt::hall3());
  CHECK(hall.size() == 8);
  found = false;
  for (const StableSet& s : hall)
    found |= s.rows == std::vector<int>{0, 1} && s.cols == std::vector<int>{1, 2};
  CHECK(found);

  for (const StableSet& s : oracle::enumerate_stable(sbt::ones2()))
    if (!s.rows.empty()) CHECK(s.cols.empty());
}

TEST_CASE("hull_extremes finds the upper-right vertices") {
  MarginalPair mp2 = MarginalPair::uniform(2, 2);
  std::vector<oracle::HullPoint> flat =
      oracle::hull_extremes(oracle::stable_points(sbt::ones2(), mp2));
  REQUIRE(flat.size() == 2);
  CHECK(flat[0].x == Rational(2));
  CHECK(flat[0].y == Rational(0));
  CHECK(flat[1].x == Rational(0));
  CHECK(flat[1].y == Rational(2));

  MarginalPair mp3 = MarginalPair::uniform(3, 3);
  std::vector<oracle::HullPoint> hall =
      oracle::hull_extremes(oracle::stable_points(sbt::hall3(), mp3));
  REQUIRE(hall.size() == 3);
  CHECK(hall[1].x == Rational(2));
  CHECK(hall[1].y == Rational(2));
  CHECK(hall[1].set.rows == std::vector<int>{0, 1});

  // E2: the point (1,1) lies on the hull edge and is not extreme
  std::vector<oracle::HullPoint> tri =
      oracle::hull_extremes(oracle::stable_points(sbt::e2(), mp2));
  REQUIRE(tri.size() == 2);
  for (const auto& hp : tri) CHECK(hp.x != hp.y);
}

TEST_CASE("hull extremes are nested") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 80; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4);
    int m = 2 + static_cast<int>(rng() % 4);
    NonnegMatrix a = sbt::random_matrix(rng, n, m);
    MarginalPair mp = sbt::random_marginals(rng, n, m);
    auto chain = oracle::hull_extremes(oracle::stable_points(a, mp));
    for (std::size_t k = 1; k < chain.size(); ++k) {
      CHECK(std::includes(chain[k - 1].set.rows.begin(), chain[k - 1].set.rows.end(),
                          chain[k].set.rows.begin(), chain[k].set.rows.end()));
      CHECK(std::includes(chain[k].set.cols.begin(), chain[k].set.cols.end(),
                          chain[k - 1].set.cols.begin(), chain[k - 1].set.cols.end()));
      CHECK(chain[k - 1].set.rows.size() > chain[k].set.rows.size());
    }
  }
}

TEST_CASE("max_deficiency_exhaustive on the fixtures") {
  BipartiteGraph diag(3, 3, {{0, 0}, {1, 1}, {2, 2}});
  auto d = oracle::max_deficiency_exhaustive(diag);
  CHECK(d.value == 0);
  CHECK(d.set.empty());

  auto hall = oracle::max_deficiency_exhaustive(sbt::hall3_graph());
  CHECK(hall.value == 1);
  CHECK(hall.set == std::vector<int>{0, 1});

  // all three left vertices funnel into a single right vertex
  BipartiteGraph star(3, 1, {{0, 0}, {1, 0}, {2, 0}});
  auto s = oracle::max_deficiency_exhaustive(star);
  CHECK(s.value == 2);
  CHECK(s.set == std::vector<int>{0, 1, 2});
}

TEST_CASE("Konig-Egervary: deficiency and matching number agree") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 100; ++trial) {
    int n1 = 2 + static_cast<int>(rng() % 5);
    int n2 = 2 + static_cast<int>(rng() % 5);
    BipartiteGraph g = sbt::pattern_graph(sbt::random_pattern(rng, n1, n2, 0.4), n1, n2);
    auto best = oracle::max_deficiency_exhaustive(g);
    CHECK(oracle::maximum_matching(g) == n1 - best.value);
  }
}

TEST_CASE("maximum_matching on the fixtures") {
  CHECK(oracle::maximum_matching(BipartiteGraph(3, 3, {{0, 0}, {1, 1}, {2, 2}})) == 3);
  CHECK(oracle::maximum_matching(sbt::hall3_graph()) == 2);
  CHECK(oracle::maximum_matching(BipartiteGraph(3, 1, {{0, 0}, {1, 0}, {2, 0}})) == 1);
}

TEST_CASE("dense_sinkhorn converges immediately on the flat matrix") {
  auto res = oracle::dense_sinkhorn(sbt::ones2(), MarginalPair::uniform(2, 2), 1);
  CHECK(res.matrix[0][0] == doctest::Approx(0.5));
  CHECK(!res.underflow);
  CHECK_THROWS_AS(
      oracle::dense_sinkhorn(sbt::ones2(), MarginalPair::uniform(2, 2), 20'000'000),
      std::invalid_argument);
}

TEST_CASE("verify_kkt accepts computed partitions and the scalable case") {
  MarginalPair mp2 = MarginalPair::uniform(2, 2);
  PrincipalPartition flat = principal_partition(sbt::ones2(), mp2);
  CHECK(flat.theta == 1);
  CHECK(oracle::verify_kkt(sbt::ones2(), mp2, flat));

  MarginalPair mp3 = MarginalPair::uniform(3, 3);
  PrincipalPartition hall = principal_partition(sbt::hall3(), mp3);
  CHECK(oracle::verify_kkt(sbt::hall3(), mp3, hall));
  // expansion coefficients: R_1/C_1 = 1/2 and the gap 2 − 1/2 = 3/2
  CHECK(hall.blocks[0].row_sum / hall.blocks[0].col_sum == Rational(1, 2));
  CHECK(hall.blocks[1].row_sum / hall.blocks[1].col_sum -
            hall.blocks[0].row_sum / hall.blocks[0].col_sum ==
        Rational(3, 2));

  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 40; ++trial) {
    NonnegMatrix a = sbt::random_matrix(rng, 4, 4);
    MarginalPair mp = sbt::random_marginals(rng, 4, 4);
    CHECK(oracle::verify_kkt(a, mp, principal_partition(a, mp)));
  }
}

TEST_CASE("an extreme set optimal at lambda = 1/2 maximizes the deficiency") {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4);
    std::uint32_t bits = sbt::random_pattern(rng, n, n, 0.4);
    NonnegMatrix a = sbt::pattern_matrix(bits, n, n);
    BipartiteGraph g = sbt::pattern_graph(bits, n, n);
    MarginalPair mp = MarginalPair::uniform(n, n);
    ParametricOptimum opt = parametric_objective(a, mp, Rational(1, 2));
    auto best = oracle::max_deficiency_exhaustive(g);
    CHECK(deficiency(g, opt.maximizer.rows) == best.value);
  }
}
