#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"

using namespace pbox;
using namespace pbox::literals;

namespace {

// Raw twelve-entry column of a three-input box, in x1x2, x2x3, x1x3 order.
testkit::Column column_of(const ProbabilityBox& box)
{
    const auto& sc = box.scenario();
    testkit::Column col;
    const char* keys[] = {"x1,x2", "x2,x3", "x1,x3"};
    for (std::size_t b = 0; b < 3; ++b) {
        for (std::size_t k = 0; k < sc.contexts().size(); ++k) {
            if (sc.context_key(sc.contexts()[k]) == keys[b]) {
                for (std::size_t o = 0; o < 4; ++o) {
                    col[4 * b + o] = box.entry(k, o);
                }
            }
        }
    }
    return col;
}

} // namespace

TEST(NoDisturbance, CatalogAndGmPass)
{
    for (const auto& nb : extremal_catalog()) {
        EXPECT_TRUE(check_no_disturbance(nb.box).pass()) << nb.label;
    }
    EXPECT_TRUE(check_no_disturbance(gm::gm_box(1_q / 6).box).pass());
}

TEST(NoDisturbance, ReportsMismatchedMarginal)
{
    auto sc = triangle_scenario();
    // x1 reads 0 with probability 1 in x1x2 but 1/2 in x1x3
    ProbabilityBox box(sc, {{1, 0, 0, 0}, {1_q / 2, 0, 1_q / 2, 0}, {1, 0, 0, 0}});
    auto r = check_no_disturbance(box);
    ASSERT_FALSE(r.pass());
    const auto& v = r.violations.front();
    EXPECT_EQ(v.event.str(sc), "(0|x1)");
    EXPECT_EQ(v.value_a, 1);
    EXPECT_EQ(v.value_b, 1_q / 2);
    EXPECT_THROW(to_parameterization(box), DomainError);
}

TEST(Parameterization, KnownBoxes)
{
    auto i1 = to_parameterization(catalog_box("I1"));
    EXPECT_EQ(i1, (NDParameterization{1_q / 2, 1_q / 2, 1_q / 2, 1_q / 2, 1_q / 2, 0}));
    EXPECT_EQ(to_parameterization(catalog_box("D1")), (NDParameterization{1, 1, 1, 1, 1, 1}));
    EXPECT_EQ(to_parameterization(catalog_box("D8")), (NDParameterization{0, 0, 0, 0, 0, 0}));
}

TEST(Parameterization, RoundTripsRandomBoxes)
{
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        auto box = testkit::random_nd_box(rng);
        EXPECT_EQ(from_parameterization(to_parameterization(box)), box);
    }
}

TEST(Parameterization, RejectsPointsOutsidePolytope)
{
    NDParameterization p{1_q / 2, 1_q / 2, 1_q / 2, 3_q / 5, 1_q / 2, 1_q / 2};
    try {
        from_parameterization(p);
        FAIL() << "expected a facet violation";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("m1 - c12 >= 0"), std::string::npos) << e.what();
    }
}

TEST(Facets, TableAlgebra)
{
    const auto& facets = nd_facets();
    ASSERT_EQ(facets.size(), 12u);
    EXPECT_EQ(facets[0].form.str(), "c12");
    EXPECT_EQ(facets[1].form.str(), "m1 - c12");
    EXPECT_EQ(facets[3].form.str(), "1 - m1 - m2 + c12");
    // every facet evaluates to the matching table entry
    std::mt19937_64 rng(9);
    for (int k = 0; k < 30; ++k) {
        auto box = testkit::random_nd_box(rng);
        auto p = to_parameterization(box);
        auto col = column_of(box);
        for (std::size_t f = 0; f < 12; ++f) {
            EXPECT_EQ(facets[f].form.evaluate(p), col[f]);
        }
    }
}

// Tables of the deterministic and indeterministic vertices, transcribed
// entry by entry, against exhaustive basis enumeration.
TEST(Vertices, MatchTranscribedTables)
{
    auto vs = enumerate_vertices();
    ASSERT_EQ(vs.size(), 12u);
    std::multiset<std::vector<std::string>> det;
    std::multiset<std::vector<std::string>> indet;
    for (const auto& v : vs) {
        auto col = column_of(from_parameterization(v.params));
        std::vector<std::string> key;
        for (const auto& x : col) {
            key.push_back(x.str());
        }
        (v.deterministic ? det : indet).insert(key);
    }
    auto as_keys = [](const auto& cols) {
        std::multiset<std::vector<std::string>> out;
        for (const auto& col : cols) {
            std::vector<std::string> key;
            for (const auto& x : col) {
                key.push_back(x.str());
            }
            out.insert(key);
        }
        return out;
    };
    EXPECT_EQ(det, as_keys(testkit::deterministic_columns()));
    EXPECT_EQ(indet, as_keys(testkit::indeterministic_columns()));
}

TEST(Vertices, CatalogLabelsMatchTables)
{
    for (std::size_t d = 0; d < 8; ++d) {
        auto box = testkit::box_from_column(testkit::deterministic_columns()[d]);
        EXPECT_EQ(catalog_box("D" + std::to_string(d + 1)), box);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        auto box = testkit::box_from_column(testkit::indeterministic_columns()[i]);
        EXPECT_EQ(catalog_box("I" + std::to_string(i + 1)), box);
    }
}

TEST(Vertices, EachSaturatesFullRank)
{
    for (const auto& v : enumerate_vertices()) {
        EXPECT_EQ(saturation_rank(v), 6u);
        EXPECT_GE(v.saturated_facets.size(), 6u);
    }
}

TEST(Vertices, AffineDimensionSix)
{
    std::vector<NDParameterization> pts;
    for (const auto& v : enumerate_vertices()) {
        pts.push_back(v.params);
    }
    EXPECT_EQ(affine_dimension(pts), 6u);
}

TEST(Membership, HalfD1HalfD8)
{
    auto box = blend(1_q / 2, catalog_box("D1"), catalog_box("D8"));
    auto m = decompose_membership(box);
    ASSERT_TRUE(std::holds_alternative<Decomposition>(m));
    const auto& d = std::get<Decomposition>(m);
    EXPECT_EQ(d.reconstruct(), to_parameterization(box));
    Rational sum;
    for (const auto& w : d.weights) {
        EXPECT_GE(w, 0);
        sum += w;
    }
    EXPECT_EQ(sum, 1);
}

TEST(Membership, VertexDecomposesToItself)
{
    auto m = decompose_membership(catalog_box("I2"));
    ASSERT_TRUE(std::holds_alternative<Decomposition>(m));
    const auto& d = std::get<Decomposition>(m);
    for (std::size_t v = 0; v < d.vertices.size(); ++v) {
        EXPECT_EQ(d.weights[v], catalog_label(d.vertices[v].params) == "I2" ? 1 : 0);
    }
}

TEST(Membership, ReportsViolatedFacet)
{
    NDParameterization p{1_q / 2, 1_q / 2, 1_q / 2, 1_q / 2 + 1_q / 10, 1_q / 2, 1_q / 2};
    auto m = decompose_membership(p);
    ASSERT_TRUE(std::holds_alternative<FacetViolation>(m));
    EXPECT_EQ(std::get<FacetViolation>(m).label, "m1 - c12 >= 0");
    EXPECT_EQ(std::get<FacetViolation>(m).value, -1_q / 10);
}

TEST(Membership, RandomBoxesDecompose)
{
    std::mt19937_64 rng(21);
    for (int k = 0; k < 40; ++k) {
        auto p = to_parameterization(testkit::random_nd_box(rng));
        auto m = decompose_membership(p);
        ASSERT_TRUE(std::holds_alternative<Decomposition>(m));
        EXPECT_EQ(std::get<Decomposition>(m).reconstruct(), p);
    }
}
