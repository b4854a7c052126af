#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace pbox;
using namespace pbox::literals;

TEST(Extension, DeterministicVertexHasJoint)
{
    auto prob = build_extension_problem(catalog_box("D3"));
    EXPECT_EQ(prob.atoms.size(), 8u);
    EXPECT_EQ(prob.matrix.size(), 12u);
    auto r = joint_extension_feasibility(prob);
    ASSERT_TRUE(is_feasible(r));
    EXPECT_TRUE(verify_certificate(r, prob));
}

TEST(Extension, IndeterministicVertexIsRefuted)
{
    for (const char* label : {"I1", "I2", "I3", "I4"}) {
        auto prob = build_extension_problem(catalog_box(label));
        auto r = joint_extension_feasibility(prob);
        ASSERT_FALSE(is_feasible(r)) << label;
        EXPECT_TRUE(verify_certificate(r, prob)) << label;
    }
}

TEST(Extension, RandomTriJointsAreFeasible)
{
    std::mt19937_64 rng(8);
    for (int k = 0; k < 40; ++k) {
        auto box = testkit::triangle_marginals(testkit::random_distribution(rng, 8));
        auto prob = build_extension_problem(box);
        auto r = joint_extension_feasibility(prob);
        ASSERT_TRUE(is_feasible(r));
        EXPECT_TRUE(verify_certificate(r, prob));
    }
}

TEST(Extension, VariableSubsetProjectsContexts)
{
    auto box = gm::gm_box(1_q / 6).box;
    const auto& sc = box.scenario();
    auto prob = build_extension_problem(box, sc.party_inputs("A"));
    EXPECT_EQ(prob.atoms.size(), 8u);
    // each of the nine cross contexts contributes its two A-marginal rows
    EXPECT_EQ(prob.matrix.size(), 18u);
    auto r = joint_extension_feasibility(prob);
    ASSERT_TRUE(is_feasible(r));
    EXPECT_TRUE(verify_certificate(r, prob));
}

TEST(Extension, GmHasNoLocalModel)
{
    for (auto c : {1_q / 6, 1_q / 3, 1_q / 100}) {
        auto prob = build_extension_problem(gm::gm_box(c).box);
        EXPECT_EQ(prob.atoms.size(), 64u);
        auto r = joint_extension_feasibility(prob);
        ASSERT_FALSE(is_feasible(r)) << c;
        EXPECT_TRUE(verify_certificate(r, prob)) << c;
    }
}

TEST(Extension, RejectsBadVariables)
{
    const auto& box = catalog_box("I1");
    EXPECT_THROW(build_extension_problem(box, std::vector<InputId>{}), DomainError);
    EXPECT_THROW(build_extension_problem(box, std::vector<InputId>{7}), DomainError);
}

TEST(VerifyCertificate, RejectsTamperedWitnesses)
{
    auto prob = build_extension_problem(catalog_box("D1"));
    auto r = joint_extension_feasibility(prob);
    auto joint = std::get<JointWitness>(r);
    std::swap(joint.atom_probabilities[0], joint.atom_probabilities[7]);
    EXPECT_FALSE(verify_certificate(joint, prob));
    joint.atom_probabilities.pop_back();
    EXPECT_THROW(verify_certificate(joint, prob), DomainError);

    auto bad = build_extension_problem(catalog_box("I1"));
    auto farkas = std::get<FarkasCertificate>(joint_extension_feasibility(bad));
    // the same multipliers do not refute a box that has a joint
    auto good = build_extension_problem(uniform_box(triangle_scenario()));
    EXPECT_FALSE(verify_certificate(farkas, good));
    auto negated = farkas;
    for (auto& y : negated.y) {
        y = -y;
    }
    EXPECT_FALSE(verify_certificate(negated, bad));
    negated.y.push_back(0);
    EXPECT_THROW(verify_certificate(negated, bad), DomainError);
}

TEST(FineConditions, ForcedPointBoundary)
{
    auto c = 1_q / 3;
    auto f = fine_tri_joint_conditions(0, 0, 0, c);
    EXPECT_TRUE(f.all());
    EXPECT_EQ(f.slack[0], 0);
}

TEST(FineConditions, SumConditionTight)
{
    auto c = 1_q / 6;
    auto f = fine_tri_joint_conditions((1 - 3 * c) / 2, 0, 0, c);
    EXPECT_TRUE(f.all());
    EXPECT_EQ(f.slack[0], 0);
}

TEST(FineConditions, DetectsFailures)
{
    auto c = 1_q / 6;
    EXPECT_FALSE(fine_tri_joint_conditions(0, 0, 0, c).satisfied[0]);
    auto m = (1 - c) / 2;
    auto f = fine_tri_joint_conditions(0, m, m, c);
    EXPECT_FALSE(f.satisfied[1]);
    EXPECT_TRUE(f.satisfied[2]);
    EXPECT_TRUE(f.satisfied[3]);
}

TEST(FineConditions, RejectsOutOfRange)
{
    EXPECT_THROW(fine_tri_joint_conditions(0, 0, 0, 0), DomainError);
    EXPECT_THROW(fine_tri_joint_conditions(0, 0, 0, 1_q / 2), DomainError);
    EXPECT_THROW(fine_tri_joint_conditions(-1_q / 10, 0, 0, 1_q / 6), DomainError);
    EXPECT_THROW(fine_tri_joint_conditions(1_q / 2, 0, 0, 1_q / 6), DomainError);
}

TEST(FineConditions, AgreeWithLp)
{
    std::mt19937_64 rng(2);
    for (int k = 0; k < 150; ++k) {
        auto c = testkit::random_rational(rng, 0, 1_q / 3, 48);
        if (c.is_zero()) {
            continue;
        }
        auto m = (1 - c) / 2;
        auto a = testkit::random_rational(rng, 0, m, 24);
        auto b = testkit::random_rational(rng, 0, m, 24);
        auto g = testkit::random_rational(rng, 0, m, 24);
        bool closed = fine_tri_joint_conditions(a, b, g, c).all();
        auto box = gm::side_box(gm::GMSideExtension(gm::Side::A, a, b, g, c));
        bool lp = is_feasible(joint_extension_feasibility(box));
        EXPECT_EQ(closed, lp) << a << " " << b << " " << g << " " << c;
    }
}

TEST(Ch, CanonicalGmValue)
{
    for (auto c : {1_q / 6, 1_q / 3, 1_q / 7}) {
        auto box = gm::gm_box(c).box;
        auto values = ch_values(box, {1, 2, 1, 2});
        ASSERT_EQ(values.size(), 8u);
        EXPECT_EQ(values.front().value, -2_q / 3) << c;
        EXPECT_EQ(values.front().expression,
                  "P(00|A1,B1) + P(00|A1,B2) + P(00|A2,B1) - P(00|A2,B2) - P(0|A1) - P(0|B1)");
        for (const auto& s : all_ch_settings(box)) {
            for (const auto& v : ch_values(box, s)) {
                EXPECT_TRUE(v.within_bounds()) << v.expression << " = " << v.value;
            }
        }
    }
}

TEST(Ch, PrBoxExceedsBound)
{
    auto sc = Scenario({{"A1", "A"}, {"A2", "A"}, {"B1", "B"}, {"B2", "B"}},
                       {{"A1", "B1"}, {"A1", "B2"}, {"A2", "B1"}, {"A2", "B2"}});
    ProbabilityBox pr(sc, {{1_q / 2, 0, 0, 1_q / 2}, {1_q / 2, 0, 0, 1_q / 2}, {1_q / 2, 0, 0, 1_q / 2},
                           {0, 1_q / 2, 1_q / 2, 0}});
    EXPECT_EQ(all_ch_settings(pr).size(), 1u);
    EXPECT_EQ(ch_values(pr, {1, 2, 1, 2}).front().value, 1_q / 2);
    EXPECT_THROW(ch_values(catalog_box("I1"), {1, 2, 1, 2}), DomainError);
    EXPECT_THROW(ch_values(pr, {1, 3, 1, 2}), DomainError);
}
