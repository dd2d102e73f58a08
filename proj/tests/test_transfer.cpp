#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "isingtri/catalog.hpp"
#include "isingtri/oracle.hpp"
#include "isingtri/transfer.hpp"

using namespace isingtri;

TEST(Matrices, ElementaryPatterns) {
  const auto z = transfer_matrix(Op::Z);
  EXPECT_EQ(z.to_string(), "[0,1,0,0][1,1,0,0][0,0,1,1][0,0,1,0]");
  const auto w = transfer_matrix(Op::W);
  EXPECT_EQ(w.to_string(), "[0,0,1,0][0,1,0,1][1,0,1,0][0,1,0,0]");
}

TEST(Matrices, MatchSatisfyingPredicate) {
  EXPECT_EQ(transfer_matrix_from_predicate(Op::W), transfer_matrix(Op::W));
  EXPECT_EQ(transfer_matrix_from_predicate(Op::Z), transfer_matrix(Op::Z));
}

TEST(Matrices, WIsConjugateOfZ) {
  const auto pi = permutation_matrix();
  EXPECT_EQ(pi * transfer_matrix(Op::Z) * pi, transfer_matrix(Op::W));
  EXPECT_EQ(pi * pi, TransferMatrix::identity());
}

// Z^k = [[F_{k-1}, F_k, 0, 0], [F_k, F_{k+1}, 0, 0], [0, 0, F_{k+1}, F_k], [0, 0, F_k, F_{k-1}]].
TEST(Matrices, ZPowersAreFibonacciBlocks) {
  const auto pi = permutation_matrix();
  const auto z = transfer_matrix(Op::Z);
  const auto w = transfer_matrix(Op::W);
  for (std::uint64_t k = 1; k <= 64; ++k) {
    const BigCount a = fibonacci(k - 1), b = fibonacci(k), c = fibonacci(k + 1);
    const auto zk = power(z, k);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        const BigCount want = (i == 0 && j == 0)   ? a
                              : (i <= 1 && j <= 1) ? ((i == 1 && j == 1) ? c : b)
                              : (i >= 2 && j >= 2) ? ((i == 3 && j == 3) ? a : (i == 2 && j == 2) ? c : b)
                                                   : BigCount(0);
        ASSERT_EQ(zk(i, j), want) << "k=" << k << " (" << i << "," << j << ")";
      }
    EXPECT_EQ(power(w, k), pi * zk * pi);
  }
}

TEST(Matrices, ProductOnOnesIsFibonacciVector) {
  std::mt19937_64 rng(5);
  for (int n = 3; n <= 64; ++n) {
    const SatisfyingVector want{fibonacci(n - 1), fibonacci(n), fibonacci(n), fibonacci(n - 1)};
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Op> ops;
      for (int i = 0; i < n - 2; ++i) ops.push_back((rng() & 1U) ? Op::W : Op::Z);
      ASSERT_EQ(satisfying_matrix(ops) * SatisfyingVector::ones(), want);
    }
  }
  EXPECT_THROW(satisfying_matrix(std::vector<Op>{}), std::invalid_argument);
}

TEST(Matrices, NormalFormMatchesWord) {
  const std::vector<Op> ops = parse_ops("WWZWZZZ");
  const StripWord sw = strip_word(ops);
  EXPECT_EQ(normal_form_matrix(sw.w, sw.z), satisfying_matrix(ops));
}

TEST(Bullet, DisplayedFormula) {
  const SatisfyingVector x{1, 2, 3, 4};
  const SatisfyingVector y{5, 6, 7, 8};
  // (x2 y3, x1 y2 + x3 y4, x4 y3 + x3 y1, x3 y2)
  EXPECT_EQ(bullet(x, y), (SatisfyingVector{2 * 7, 1 * 6 + 3 * 8, 4 * 7 + 3 * 5, 3 * 6}));
}

TEST(Bullet, SymmetricInputsGiveSymmetricOutput) {
  const SatisfyingVector x{2, 3, 3, 2};
  const SatisfyingVector y{3, 5, 5, 3};
  EXPECT_TRUE(bullet(x, y).is_symmetric());
}

TEST(Vectors, AgreeWithBruteForceForEveryBottom) {
  for (int n = 3; n <= 9; ++n)
    for (const auto& t : enumerate_triangulations(n))
      for (const auto& e : boundary_edges(t)) {
        const auto v = satisfying_vector(t, e);
        ASSERT_EQ(v, oracle::brute_satisfying_vector(t, e)) << serialize_tri(t);
        EXPECT_TRUE(v.is_symmetric());
      }
}

TEST(Degeneracy, SmallValues) {
  EXPECT_EQ(degeneracy(Triangulation::degenerate()), 4);
  EXPECT_EQ(degeneracy(Triangulation(3, {})), 6);
  EXPECT_EQ(degeneracy(Triangulation(4, {{0, 2}})), 10);
  EXPECT_EQ(degeneracy(Triangulation(6, {{0, 2}, {2, 4}, {0, 4}})), 24);
  EXPECT_EQ(satisfying_vector(Triangulation(4, {{0, 2}}), {0, 1}), (SatisfyingVector{2, 3, 3, 2}));
}

TEST(Degeneracy, StripOfTen) {
  std::string word(8, 'W');
  for (std::size_t i = 0; i < word.size(); i += 2) word[i] = 'Z';
  const auto t = evaluate_plan(ConstructionPlan::chain(parse_ops(word))).tri;
  EXPECT_EQ(t.size(), 10);
  EXPECT_EQ(degeneracy(t), 178);
  EXPECT_EQ(strip_count(10), 178);
}

TEST(Degeneracy, IndependentOfBottom) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_triangulation(40 + trial, rng());
    const BigCount g = degeneracy(t);
    for (const auto& e : boundary_edges(t)) ASSERT_EQ(satisfying_vector(t, e).total(), g);
  }
}

TEST(ClosedForms, OneInterior) {
  // arms (2,2,2) is the hexagon star; (2,2,3) has seven vertices.
  EXPECT_EQ(one_interior_count(2, 2, 2), 24);
  EXPECT_EQ(one_interior_count(2, 2, 3), 40);
  EXPECT_EQ(degeneracy(Triangulation(7, {{0, 2}, {2, 4}, {0, 4}, {4, 6}})), 40);
  EXPECT_THROW(one_interior_count(1, 2, 2), std::invalid_argument);
  EXPECT_THROW(strip_count(2), std::invalid_argument);
}

TEST(Fibonacci, Values) {
  EXPECT_EQ(fibonacci(0), 0);
  EXPECT_EQ(fibonacci(1), 1);
  EXPECT_EQ(fibonacci(10), 55);
  EXPECT_EQ(lucas(0), 2);
  EXPECT_EQ(lucas(10), 123);
  EXPECT_EQ(fibonacci(100), BigCount("354224848179261915075"));
  for (std::size_t k = 1; k < 200; ++k) EXPECT_EQ(lucas(k), fibonacci(k - 1) + fibonacci(k + 1));
}

TEST(PhiPowers, ExactThresholds) {
  // phi^3.5 = 5.39..., so 6 passes and 5 fails.
  EXPECT_TRUE(phi_power_leq(6, 7));
  EXPECT_FALSE(phi_power_leq(5, 7));
  EXPECT_FALSE(phi_power_leq(2, 3));  // phi^1.5 = 2.05...
  EXPECT_TRUE(phi_power_leq(3, 3));
  EXPECT_TRUE(phi_power_leq(1, 0));
  EXPECT_FALSE(phi_power_leq(0, 1));
  // phi^4 = 6.854...
  EXPECT_TRUE(phi_power_leq(7, 8));
  EXPECT_FALSE(phi_power_leq(6, 8));
}

TEST(PhiPowers, CeilingIsSmallestPassingInteger) {
  for (unsigned h = 0; h <= 120; ++h) {
    const BigCount c = ceil_phi_half_power(h);
    EXPECT_TRUE(phi_power_leq(c, h)) << h;
    EXPECT_FALSE(phi_power_leq(c - 1, h)) << h;
    if (h <= 60) {
      const long double approx = std::pow(static_cast<long double>(std::numbers::phi), h / 2.0L);
      EXPECT_EQ(c.get_d(), std::ceil(static_cast<double>(approx))) << h;
    }
  }
}
