#include <doctest.h>

#include <cmath>
#include <random>

#include "sb/divergence.hpp"
#include "sb/marginals.hpp"
#include "sb/matrix.hpp"
#include "test_util.hpp"

using namespace sb;

namespace {
const double kLn2 = std::log(2.0);
}

TEST_CASE("matrix construction validates invariants") {
  CHECK_THROWS_AS(NonnegMatrix(2, 2, {{0, 0, 1.0}}), std::invalid_argument);      // zero row
  CHECK_THROWS_AS(NonnegMatrix(2, 2, {{0, 0, 1.0}, {1, 0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NonnegMatrix(1, 1, {{0, 0, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NonnegMatrix(1, 1, {{0, 0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NonnegMatrix(1, 1, {{0, 0, 1.0}, {0, 0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NonnegMatrix(1, 1, {{0, 1, 1.0}}), std::invalid_argument);

  NonnegMatrix a = sbt::hall3();
  CHECK(a.nnz() == 5);
  CHECK(a.at(2, 1) == 1.0);
  CHECK(a.at(0, 1) == 0.0);
  CHECK(a.total() == doctest::Approx(5.0));
}

TEST_CASE("row_normalize matches the direct formula") {
  std::vector<double> ones{1.0, 1.0};

  NonnegMatrix u = row_normalize(sbt::ones2(), ones);
  CHECK(u.at(0, 0) == doctest::Approx(0.5));
  CHECK(u.at(1, 1) == doctest::Approx(0.5));

  NonnegMatrix d = row_normalize(NonnegMatrix::from_dense({{2, 0}, {0, 3}}), ones);
  CHECK(d.at(0, 0) == doctest::Approx(1.0));
  CHECK(d.at(1, 1) == doctest::Approx(1.0));
  CHECK(d.at(0, 1) == 0.0);

  NonnegMatrix t = row_normalize(sbt::e2(), ones);
  CHECK(t.at(0, 0) == doctest::Approx(0.5));
  CHECK(t.at(0, 1) == doctest::Approx(0.5));
  CHECK(t.at(1, 1) == doctest::Approx(1.0));

  CHECK_THROWS_AS(row_normalize(sbt::ones2(), std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("col_normalize matches the direct formula") {
  std::vector<double> ones{1.0, 1.0};

  NonnegMatrix u = col_normalize(sbt::ones2(), ones);
  CHECK(u.at(1, 0) == doctest::Approx(0.5));

  NonnegMatrix t = col_normalize(sbt::e2(), ones);
  CHECK(t.at(0, 0) == doctest::Approx(1.0));
  CHECK(t.at(0, 1) == doctest::Approx(0.5));
  CHECK(t.at(1, 1) == doctest::Approx(0.5));

  NonnegMatrix chained = col_normalize(
      row_normalize(NonnegMatrix::from_dense({{2, 0}, {0, 3}}), ones), ones);
  CHECK(chained.at(0, 0) == doctest::Approx(1.0));
  CHECK(chained.at(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("normalization preserves support and hits marginals within rounding") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    NonnegMatrix a = sbt::random_matrix(rng, 4, 5);
    MarginalPair mp = sbt::random_marginals(rng, 4, 5);
    NonnegMatrix r = row_normalize(a, mp.r_d());
    CHECK(r.same_support(a));
    std::vector<double> sums = r.row_sums();
    for (int i = 0; i < 4; ++i)
      CHECK(std::abs(sums[i] - mp.r_d()[i]) <= 4e-16 * mp.r_d()[i] * 4);
    NonnegMatrix c = col_normalize(a, mp.c_d());
    CHECK(c.same_support(a));
    std::vector<double> csums = c.col_sums();
    for (int j = 0; j < 5; ++j)
      CHECK(std::abs(csums[j] - mp.c_d()[j]) <= 4e-16 * mp.c_d()[j] * 4);
  }
}

TEST_CASE("kl_vec closed forms and conventions") {
  std::vector<double> half{0.5, 0.5};
  CHECK(kl_vec(half, half) == 0.0);
  CHECK(kl_vec(std::vector<double>{1.0, 0.0}, half) == doctest::Approx(kLn2));
  CHECK(std::isinf(kl_vec(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 0.0})));
  CHECK_THROWS_AS(kl_vec(half, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("kl_matrix closed forms and conventions") {
  NonnegMatrix id = NonnegMatrix::from_dense({{1, 0}, {0, 1}});
  NonnegMatrix flat = NonnegMatrix::from_dense({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(kl_matrix(id, id) == 0.0);
  CHECK(kl_matrix(flat, flat) == 0.0);
  CHECK(kl_matrix(id, flat) == doctest::Approx(2 * kLn2));
  CHECK(std::isinf(kl_matrix(flat, id)));
}

TEST_CASE("pinsker_gap closed form and nonnegativity") {
  std::vector<double> p{1.0, 0.0}, q{0.5, 0.5};
  CHECK(pinsker_gap(p, p) == 0.0);
  CHECK(pinsker_gap(p, q) == doctest::Approx(kLn2 - 0.5));
  CHECK_THROWS_AS(pinsker_gap(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 0.5}),
                  std::invalid_argument);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(0.05, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    int n = 2 + static_cast<int>(rng() % 6);
    std::vector<double> a(n), b(n);
    double sa = 0, sb = 0;
    for (double& x : a) sa += (x = val(rng));
    for (double& x : b) sb += (x = val(rng));
    for (double& x : b) x *= sa / sb;  // match totals
    CHECK(pinsker_gap(a, b) >= -1e-12);
  }
}

TEST_CASE("kl_vec vanishes exactly iff the inputs agree, on matched totals") {
  std::vector<double> p{0.25, 0.5, 0.125, 0.125};
  CHECK(kl_vec(p, p) == 0.0);

  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> eighths(1, 16);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4);
    std::vector<double> a(n);
    for (double& x : a) x = eighths(rng) / 8.0;
    // a permutation keeps the total matched exactly
    std::vector<double> b = a;
    std::shuffle(b.begin(), b.end(), rng);
    if (a == b)
      CHECK(kl_vec(a, b) == 0.0);
    else
      CHECK(kl_vec(a, b) > 0.0);
  }
}

TEST_CASE("marginal pair recomputes totals and rejects nonpositive input") {
  MarginalPair mp({Rational(1, 2), Rational(3, 2)}, {Rational(1), Rational(1)});
  CHECK(mp.total_r() == Rational(2));
  CHECK(mp.total_c() == Rational(2));
  CHECK(mp.r_d()[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(MarginalPair({Rational(0)}, {Rational(1)}), std::invalid_argument);
}

TEST_CASE("stable set predicate") {
  NonnegMatrix a = sbt::hall3();
  CHECK(is_stable(a, {{0, 1}, {1, 2}}));
  CHECK(!is_stable(a, {{2}, {1}}));
  CHECK(is_stable(a, {{}, {0, 1, 2}}));
}

TEST_CASE("submatrix reindexes") {
  NonnegMatrix a = sbt::hall3();
  std::vector<int> rows{2}, cols{1, 2};
  NonnegMatrix sub = a.submatrix(rows, cols);
  CHECK(sub.n_rows() == 1);
  CHECK(sub.n_cols() == 2);
  CHECK(sub.at(0, 0) == 1.0);
  CHECK(sub.at(0, 1) == 1.0);
}
