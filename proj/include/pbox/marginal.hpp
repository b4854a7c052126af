#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <iterator>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pbox/exact_lp.hpp"
#include "pbox/scenario.hpp"

namespace pbox {

/// The marginal problem for a box restricted to a variable set: one
/// nonnegative unknown per global assignment (atom) of the variables, one
/// equality row per outcome of every context's projection onto the set.
struct ExtensionProblem {
    Scenario scenario;
    std::vector<InputId> variables;           // sorted
    std::vector<std::vector<int>> atoms;      // outputs per variable, lexicographic
    std::vector<std::size_t> row_contexts;    // source context of each row
    std::vector<Event> row_events;            // event each row constrains
    Matrix matrix;                            // rows x atoms, entries 0/1
    std::vector<Rational> rhs;
};

inline constexpr std::size_t max_extension_atoms = std::size_t{1} << 16;

/// Builds the extension problem over `variables`. A context contributes
/// the marginal on its intersection with the set; contexts disjoint from
/// the set contribute nothing.
inline ExtensionProblem build_extension_problem(const ProbabilityBox& box, std::vector<InputId> variables)
{
    const auto& sc = box.scenario();
    std::sort(variables.begin(), variables.end());
    variables.erase(std::unique(variables.begin(), variables.end()), variables.end());
    if (variables.empty()) {
        throw DomainError("extension problem needs at least one variable");
    }
    for (auto v : variables) {
        if (v >= sc.input_count()) {
            throw DomainError("extension variable outside the scenario");
        }
    }
    std::size_t atom_count = sc.outcome_count(variables);
    if (atom_count > max_extension_atoms) {
        throw DomainError("extension problem has " + std::to_string(atom_count) + " atoms; limit is " +
                          std::to_string(max_extension_atoms));
    }

    ExtensionProblem prob;
    prob.scenario = sc;
    prob.variables = variables;
    for (std::size_t a = 0; a < atom_count; ++a) {
        prob.atoms.push_back(sc.decode_outcome(variables, a));
    }
    for (std::size_t k = 0; k < sc.contexts().size(); ++k) {
        const auto& ctx = sc.contexts()[k];
        Context shared;
        std::set_intersection(ctx.begin(), ctx.end(), variables.begin(), variables.end(), std::back_inserter(shared));
        if (shared.empty()) {
            continue;
        }
        std::vector<std::size_t> pos;
        for (auto in : shared) {
            pos.push_back(static_cast<std::size_t>(std::lower_bound(variables.begin(), variables.end(), in) -
                                                   variables.begin()));
        }
        for (std::size_t o = 0; o < sc.outcome_count(shared); ++o) {
            auto outs = sc.decode_outcome(shared, o);
            std::vector<Rational> row(atom_count);
            for (std::size_t a = 0; a < atom_count; ++a) {
                bool match = true;
                for (std::size_t t = 0; t < pos.size() && match; ++t) {
                    match = prob.atoms[a][pos[t]] == outs[t];
                }
                if (match) {
                    row[a] = 1;
                }
            }
            Event::Assignment asg;
            for (std::size_t t = 0; t < shared.size(); ++t) {
                asg.emplace_back(shared[t], outs[t]);
            }
            prob.row_contexts.push_back(k);
            prob.row_events.emplace_back(sc, std::move(asg));
            prob.matrix.push_back(std::move(row));
            prob.rhs.push_back(box.marginal(k, shared, outs));
        }
    }
    return prob;
}

/// Extension problem over every input of the scenario.
inline ExtensionProblem build_extension_problem(const ProbabilityBox& box)
{
    std::vector<InputId> all(box.scenario().input_count());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    return build_extension_problem(box, std::move(all));
}

/// A global joint distribution over the problem's atoms.
struct JointWitness {
    std::vector<Rational> atom_probabilities;
};

using FeasibilityResult = std::variant<JointWitness, FarkasCertificate>;

inline bool is_feasible(const FeasibilityResult& r) { return std::holds_alternative<JointWitness>(r); }

/// Decides whether the box extends to a joint distribution on the
/// problem's variables, returning a witness either way.
inline FeasibilityResult joint_extension_feasibility(const ExtensionProblem& prob)
{
    auto outcome = find_nonnegative_solution(prob.matrix, prob.rhs);
    if (auto* sol = std::get_if<PrimalSolution>(&outcome)) {
        return JointWitness{std::move(sol->x)};
    }
    return std::get<FarkasCertificate>(std::move(outcome));
}

inline FeasibilityResult joint_extension_feasibility(const ProbabilityBox& box)
{
    return joint_extension_feasibility(build_extension_problem(box));
}

/// Re-checks a witness by direct arithmetic. A joint must be nonnegative,
/// sum to 1 and reproduce every row; a Farkas vector y must satisfy
/// y^T A <= 0 and y^T b > 0. Throws DomainError on dimension mismatch.
inline bool verify_certificate(const FeasibilityResult& result, const ExtensionProblem& prob)
{
    if (const auto* joint = std::get_if<JointWitness>(&result)) {
        if (joint->atom_probabilities.size() != prob.atoms.size()) {
            throw DomainError("joint witness has the wrong number of atoms");
        }
        Rational sum;
        for (const auto& p : joint->atom_probabilities) {
            sum += p;
        }
        return sum == 1 && check_primal(prob.matrix, prob.rhs, joint->atom_probabilities);
    }
    const auto& farkas = std::get<FarkasCertificate>(result);
    if (farkas.y.size() != prob.rhs.size()) {
        throw DomainError("Farkas vector has the wrong number of rows");
    }
    return check_farkas(prob.matrix, prob.rhs, farkas.y);
}

// ---------------------------------------------------------------------------
// Closed-form tri-joint conditions for the equal-marginal family
// ---------------------------------------------------------------------------

/// Tri-joint existence test for three bi-joints with all single
/// marginals P(0) = (1-c)/2 and P(00) = alpha, beta, gamma on pairs 12, 23, 13.
///
/// Eliminating t = P(000) from the eight-atom system leaves exactly
///   alpha + beta + gamma        >= (1-3c)/2
///   beta + gamma - alpha        <= (1-c)/2
///   alpha + beta - gamma        <= (1-c)/2
///   alpha + gamma - beta        <= (1-c)/2
/// given the positivity box 0 <= alpha, beta, gamma <= (1-c)/2.
struct FineConditions {
    static constexpr std::array<const char*, 4> labels = {
        "alpha + beta + gamma >= (1 - 3c)/2",
        "beta + gamma - alpha <= (1 - c)/2",
        "alpha + beta - gamma <= (1 - c)/2",
        "alpha + gamma - beta <= (1 - c)/2",
    };

    std::array<bool, 4> satisfied{};
    std::array<Rational, 4> slack{}; // >= 0 exactly when satisfied

    bool all() const { return std::all_of(satisfied.begin(), satisfied.end(), [](bool b) { return b; }); }
};

inline FineConditions fine_tri_joint_conditions(const Rational& alpha, const Rational& beta, const Rational& gamma,
                                                const Rational& c)
{
    if (c.sign() <= 0 || c > Rational(1, 3)) {
        throw DomainError("c = " + c.str() + " outside (0, 1/3]");
    }
    const Rational m = (1 - c) / 2;
    for (const auto* v : {&alpha, &beta, &gamma}) {
        if (v->sign() < 0 || *v > m) {
            throw DomainError("parameter " + v->str() + " outside [0, (1 - c)/2]");
        }
    }
    const Rational k = (1 - 3 * c) / 2;
    FineConditions f;
    f.slack = {alpha + beta + gamma - k, m - (beta + gamma - alpha), m - (alpha + beta - gamma),
               m - (alpha + gamma - beta)};
    for (std::size_t i = 0; i < 4; ++i) {
        f.satisfied[i] = f.slack[i].sign() >= 0;
    }
    return f;
}

// ---------------------------------------------------------------------------
// Clauser-Horne expressions
// ---------------------------------------------------------------------------

/// Setting quadruple (i, i' | j, j'), 1-based positions in the first and
/// second party's canonical input lists.
struct ChSettings {
    std::size_t i = 1, i2 = 2, j = 1, j2 = 2;
};

struct ChValue {
    std::string expression;
    Rational value;

    bool within_bounds() const { return value >= -1 && value.sign() <= 0; }
};

/// The eight CH expressions of a setting quadruple:
///   P(a0|s t) + P(a0|s t') + P(a0|s' t) - P(a0|s' t') - P(a|s) - P(0|t)
/// over (s, s') in {(i, i'), (i', i)}, (t, t') in {(j, j'), (j', j)} and
/// Alice's target output a in {0, 1}. The first is the canonical variant.
/// A local box keeps every value in [-1, 0].
inline std::vector<ChValue> ch_values(const ProbabilityBox& box, const ChSettings& s)
{
    const auto& sc = box.scenario();
    if (sc.parties().size() != 2) {
        throw DomainError("CH expressions need a bipartite box");
    }
    auto alice = sc.party_inputs(sc.parties()[0]);
    auto bob = sc.party_inputs(sc.parties()[1]);
    auto in_range = [](std::size_t v, std::size_t n) { return v >= 1 && v <= n; };
    if (!in_range(s.i, alice.size()) || !in_range(s.i2, alice.size()) || !in_range(s.j, bob.size()) ||
        !in_range(s.j2, bob.size()) || s.i == s.i2 || s.j == s.j2) {
        throw DomainError("CH settings out of range");
    }
    for (auto in : alice) {
        if (sc.cardinality(in) != 2) throw DomainError("CH expressions need binary outputs");
    }
    for (auto in : bob) {
        if (sc.cardinality(in) != 2) throw DomainError("CH expressions need binary outputs");
    }

    auto joint = [&](InputId x, InputId y, int a) {
        return Event(sc, {{x, a}, {y, 0}});
    };
    auto single = [&](InputId x, int o) { return Event(sc, {{x, o}}); };

    std::vector<ChValue> out;
    const std::array<std::size_t, 2> alice_order[] = {{s.i, s.i2}, {s.i2, s.i}};
    const std::array<std::size_t, 2> bob_order[] = {{s.j, s.j2}, {s.j2, s.j}};
    for (int a = 0; a < 2; ++a) {
        for (const auto& ao : alice_order) {
            for (const auto& bo : bob_order) {
                auto x = alice[ao[0] - 1];
                auto x2 = alice[ao[1] - 1];
                auto y = bob[bo[0] - 1];
                auto y2 = bob[bo[1] - 1];
                const std::pair<Event, int> terms[] = {
                    {joint(x, y, a), 1},   {joint(x, y2, a), 1}, {joint(x2, y, a), 1},
                    {joint(x2, y2, a), -1}, {single(x, a), -1},  {single(y, 0), -1},
                };
                ChValue v;
                for (const auto& [e, sign] : terms) {
                    auto p = event_probability(box, e);
                    v.value += sign > 0 ? p : -p;
                    if (!v.expression.empty() || sign < 0) {
                        v.expression += sign > 0 ? " + " : " - ";
                    }
                    v.expression += "P" + e.str(sc);
                }
                out.push_back(std::move(v));
            }
        }
    }
    return out;
}

/// Every setting quadruple with i < i' and j < j', in lexicographic order.
inline std::vector<ChSettings> all_ch_settings(const ProbabilityBox& box)
{
    const auto& sc = box.scenario();
    if (sc.parties().size() != 2) {
        throw DomainError("CH expressions need a bipartite box");
    }
    auto na = sc.party_inputs(sc.parties()[0]).size();
    auto nb = sc.party_inputs(sc.parties()[1]).size();
    std::vector<ChSettings> out;
    for (std::size_t i = 1; i <= na; ++i) {
        for (std::size_t i2 = i + 1; i2 <= na; ++i2) {
            for (std::size_t j = 1; j <= nb; ++j) {
                for (std::size_t j2 = j + 1; j2 <= nb; ++j2) {
                    out.push_back({i, i2, j, j2});
                }
            }
        }
    }
    return out;
}

} // namespace pbox
