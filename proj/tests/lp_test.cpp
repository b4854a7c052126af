#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace pbox;
using namespace pbox::literals;

TEST(SolveSquare, SolvesAndDetectsSingular)
{
    Matrix a = {{2, 1}, {1, 3}};
    auto x = solve_square(a, {3, 5});
    ASSERT_TRUE(x);
    EXPECT_EQ((*x)[0], 4_q / 5);
    EXPECT_EQ((*x)[1], 7_q / 5);
    EXPECT_FALSE(solve_square({{1, 2}, {2, 4}}, {1, 2}));
}

TEST(MatrixRank, CountsIndependentRows)
{
    EXPECT_EQ(matrix_rank({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}}), 2u);
    EXPECT_EQ(matrix_rank({}), 0u);
}

TEST(NonnegativeSolution, FeasibleSystem)
{
    Matrix a = {{1, 1, 1}, {1, -1, 0}};
    std::vector<Rational> b = {1, 0};
    auto out = find_nonnegative_solution(a, b);
    ASSERT_TRUE(std::holds_alternative<PrimalSolution>(out));
    EXPECT_TRUE(check_primal(a, b, std::get<PrimalSolution>(out).x));
}

TEST(NonnegativeSolution, InfeasibleGivesFarkas)
{
    // x1 + x2 = 1 and x1 + x2 = 2 cannot both hold.
    Matrix a = {{1, 1}, {1, 1}};
    std::vector<Rational> b = {1, 2};
    auto out = find_nonnegative_solution(a, b);
    ASSERT_TRUE(std::holds_alternative<FarkasCertificate>(out));
    EXPECT_TRUE(check_farkas(a, b, std::get<FarkasCertificate>(out).y));
    // negative right-hand side with nonnegative columns
    auto neg = find_nonnegative_solution({{1, 2}}, {-1});
    ASSERT_TRUE(std::holds_alternative<FarkasCertificate>(neg));
    EXPECT_TRUE(check_farkas({{1, 2}}, {-1}, std::get<FarkasCertificate>(neg).y));
}

TEST(NonnegativeSolution, RedundantRowsAreHandled)
{
    Matrix a = {{1, 1, 0}, {1, 1, 0}, {0, 1, 1}, {1, 2, 1}};
    std::vector<Rational> b = {1_q / 2, 1_q / 2, 1_q / 3, 5_q / 6};
    auto out = find_nonnegative_solution(a, b);
    ASSERT_TRUE(std::holds_alternative<PrimalSolution>(out));
    EXPECT_TRUE(check_primal(a, b, std::get<PrimalSolution>(out).x));
}

TEST(Checkers, RejectWrongWitnesses)
{
    Matrix a = {{1, 1}};
    EXPECT_FALSE(check_primal(a, {1}, {1_q / 2, 1_q / 4}));
    EXPECT_FALSE(check_primal(a, {1}, {2, -1}));
    EXPECT_FALSE(check_farkas(a, {1}, {-1}));
    EXPECT_FALSE(check_farkas(a, {1}, {1}));
}

// Every generated system either has a checked solution or a checked
// Farkas vector; systems built from a known nonnegative point must be
// feasible.
TEST(NonnegativeSolution, RandomSystemsAlwaysCertified)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> nonneg(0, 4);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t rows = 1 + trial % 4;
        const std::size_t cols = 1 + (trial / 4) % 5;
        Matrix a(rows, std::vector<Rational>(cols));
        for (auto& r : a) {
            for (auto& v : r) {
                v = coef(rng);
            }
        }
        std::vector<Rational> b(rows);
        const bool planted = trial % 2 == 0;
        std::vector<Rational> x(cols);
        for (auto& v : x) {
            v = Rational(nonneg(rng), 3);
        }
        for (std::size_t r = 0; r < rows; ++r) {
            if (planted) {
                for (std::size_t c = 0; c < cols; ++c) {
                    b[r] += a[r][c] * x[c];
                }
            } else {
                b[r] = coef(rng);
            }
        }
        auto out = find_nonnegative_solution(a, b);
        if (const auto* sol = std::get_if<PrimalSolution>(&out)) {
            EXPECT_TRUE(check_primal(a, b, sol->x));
        } else {
            EXPECT_FALSE(planted) << "planted system reported infeasible";
            EXPECT_TRUE(check_farkas(a, b, std::get<FarkasCertificate>(out).y));
        }
    }
}
