#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pbox/pbox.hpp"

namespace pbox::testkit {

// Boxes of the three-input scenario written as twelve entries in the row
// order x1x2, x2x3, x1x3, each block listing outcomes 00, 01, 10, 11.
using Column = std::array<Rational, 12>;

inline ProbabilityBox box_from_column(const Column& col)
{
    auto sc = triangle_scenario();
    // canonical contexts are x1x2, x1x3, x2x3
    const std::size_t block_of_context[] = {0, 2, 1};
    std::vector<std::vector<Rational>> tables(3);
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t o = 0; o < 4; ++o) {
            tables[k].push_back(col[4 * block_of_context[k] + o]);
        }
    }
    return ProbabilityBox(sc, tables);
}

inline Column column(std::initializer_list<int> twice)
{
    Column c;
    std::size_t k = 0;
    for (int v : twice) {
        c[k++] = Rational(v, 2);
    }
    return c;
}

// Deterministic vertices, entries doubled.
inline const std::array<Column, 8>& deterministic_columns()
{
    static const std::array<Column, 8> cols = {
        column({2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0}), column({2, 0, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0}),
        column({0, 2, 0, 0, 0, 0, 2, 0, 2, 0, 0, 0}), column({0, 0, 2, 0, 2, 0, 0, 0, 0, 0, 2, 0}),
        column({0, 2, 0, 0, 0, 0, 0, 2, 0, 2, 0, 0}), column({0, 0, 2, 0, 0, 2, 0, 0, 0, 0, 0, 2}),
        column({0, 0, 0, 2, 0, 0, 2, 0, 0, 0, 2, 0}), column({0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2}),
    };
    return cols;
}

inline const std::array<Column, 4>& indeterministic_columns()
{
    static const std::array<Column, 4> cols = {
        column({1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0}),
        column({1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1}),
        column({0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1}),
        column({0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0}),
    };
    return cols;
}

// Nonnegative rationals with denominator `den` summing to 1.
inline std::vector<Rational> random_distribution(std::mt19937_64& rng, std::size_t n, std::int64_t den = 60)
{
    std::vector<std::int64_t> cuts{0, den};
    std::uniform_int_distribution<std::int64_t> pick(0, den);
    for (std::size_t k = 1; k < n; ++k) {
        cuts.push_back(pick(rng));
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Rational> out;
    for (std::size_t k = 1; k < cuts.size(); ++k) {
        out.emplace_back(cuts[k] - cuts[k - 1], den);
    }
    return out;
}

// Marginals of a joint distribution over (x1, x2, x3); atoms indexed o1 o2 o3.
inline ProbabilityBox triangle_marginals(const std::vector<Rational>& joint)
{
    auto sc = triangle_scenario();
    std::vector<std::vector<Rational>> tables(3, std::vector<Rational>(4));
    for (std::size_t a = 0; a < 8; ++a) {
        int o[3] = {int(a >> 2) & 1, int(a >> 1) & 1, int(a) & 1};
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& ctx = sc.contexts()[k];
            tables[k][static_cast<std::size_t>(2 * o[ctx[0]] + o[ctx[1]])] += joint[a];
        }
    }
    return ProbabilityBox(sc, tables);
}

// Random ND box of the three-input scenario as a convex mix of all vertices.
inline ProbabilityBox random_nd_box(std::mt19937_64& rng)
{
    std::vector<ProbabilityBox> boxes;
    for (const auto& nb : extremal_catalog()) {
        boxes.push_back(nb.box);
    }
    auto w = random_distribution(rng, boxes.size(), 24);
    return mixture(boxes, w);
}

inline Rational random_rational(std::mt19937_64& rng, const Rational& lo, const Rational& hi, std::int64_t den)
{
    std::uniform_int_distribution<std::int64_t> pick(0, den);
    return lo + (hi - lo) * Rational(pick(rng), den);
}

// Level-1 exclusivity constraints of the three-input scenario.
using Coeffs = std::array<Rational, 7>; // constant, m1, m2, m3, c12, c23, c13

// Table entries over the ND coordinates, written out independently of the
// library's own form builder.
inline Coeffs entry(const std::string& pair, const std::string& out)
{
    std::size_t mi = 0;
    std::size_t mj = 0;
    std::size_t c = 0;
    if (pair == "x1,x2") {
        mi = 1, mj = 2, c = 4;
    } else if (pair == "x2,x3") {
        mi = 2, mj = 3, c = 5;
    } else {
        mi = 1, mj = 3, c = 6;
    }
    Coeffs f{};
    if (out == "00") {
        f[c] = 1;
    } else if (out == "01") {
        f[mi] = 1, f[c] = -1;
    } else if (out == "10") {
        f[mj] = 1, f[c] = -1;
    } else {
        f[0] = 1, f[mi] = -1, f[mj] = -1, f[c] = 1;
    }
    return f;
}

struct Term {
    const char* pair;
    const char* out;
};

// The eight nontrivial single-copy constraints, each a sum <= 1.
inline const std::array<std::array<Term, 3>, 8> level1_table = {{
    {{{"x1,x2", "00"}, {"x2,x3", "10"}, {"x1,x3", "11"}}},
    {{{"x1,x2", "00"}, {"x2,x3", "11"}, {"x1,x3", "10"}}},
    {{{"x1,x2", "01"}, {"x2,x3", "00"}, {"x1,x3", "11"}}},
    {{{"x1,x2", "01"}, {"x2,x3", "01"}, {"x1,x3", "10"}}},
    {{{"x1,x2", "10"}, {"x2,x3", "10"}, {"x1,x3", "01"}}},
    {{{"x1,x2", "10"}, {"x2,x3", "11"}, {"x1,x3", "00"}}},
    {{{"x1,x2", "11"}, {"x2,x3", "00"}, {"x1,x3", "01"}}},
    {{{"x1,x2", "11"}, {"x2,x3", "01"}, {"x1,x3", "00"}}},
}};

inline Coeffs table_form(const std::array<Term, 3>& terms)
{
    Coeffs sum{};
    for (const auto& t : terms) {
        auto e = entry(t.pair, t.out);
        for (std::size_t k = 0; k < 7; ++k) {
            sum[k] += e[k];
        }
    }
    return sum;
}

inline std::set<std::string> table_events(const std::array<Term, 3>& terms)
{
    std::set<std::string> out;
    for (const auto& t : terms) {
        out.insert("(" + std::string(t.out) + "|" + t.pair + ")");
    }
    return out;
}

} // namespace pbox::testkit
