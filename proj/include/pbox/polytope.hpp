#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pbox/exact_lp.hpp"
#include "pbox/scenario.hpp"

namespace pbox {

// ---------------------------------------------------------------------------
// No-disturbance
// ---------------------------------------------------------------------------

/// Two contexts that assign different probabilities to the same event on
/// their shared inputs.
struct NdViolation {
    Event event;
    std::size_t context_a = 0;
    std::size_t context_b = 0;
    Rational value_a;
    Rational value_b;
};

struct NdReport {
    std::vector<NdViolation> violations;
    bool pass() const { return violations.empty(); }
};

/// Compares, for every pair of overlapping contexts, the marginals both
/// induce on the shared inputs. For contexts meeting in one input this is
/// the single-input consistency P(o|x) computed from either context.
inline NdReport check_no_disturbance(const ProbabilityBox& box)
{
    const auto& sc = box.scenario();
    const auto& ctxs = sc.contexts();
    NdReport report;
    for (std::size_t a = 0; a < ctxs.size(); ++a) {
        for (std::size_t b = a + 1; b < ctxs.size(); ++b) {
            Context shared;
            std::set_intersection(ctxs[a].begin(), ctxs[a].end(), ctxs[b].begin(), ctxs[b].end(),
                                  std::back_inserter(shared));
            if (shared.empty()) {
                continue;
            }
            for (std::size_t o = 0; o < sc.outcome_count(shared); ++o) {
                auto outs = sc.decode_outcome(shared, o);
                auto va = box.marginal(a, shared, outs);
                auto vb = box.marginal(b, shared, outs);
                if (va != vb) {
                    Event::Assignment asg;
                    for (std::size_t k = 0; k < shared.size(); ++k) {
                        asg.emplace_back(shared[k], outs[k]);
                    }
                    report.violations.push_back({Event(sc, std::move(asg)), a, b, std::move(va), std::move(vb)});
                }
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Three-input two-output scenario
// ---------------------------------------------------------------------------

/// One party "P" with binary inputs x1, x2, x3 and the three pairwise
/// contexts; canonical context order is x1x2, x1x3, x2x3.
inline Scenario triangle_scenario(const std::string& party = "P", const std::array<std::string, 3>& labels = {"x1", "x2", "x3"})
{
    std::vector<InputSpec> inputs;
    for (const auto& l : labels) {
        inputs.push_back({l, party, 2});
    }
    return Scenario(std::move(inputs), {{labels[0], labels[1]}, {labels[1], labels[2]}, {labels[0], labels[2]}});
}

inline bool is_triangle_scenario(const Scenario& sc)
{
    if (sc.input_count() != 3 || sc.contexts().size() != 3) {
        return false;
    }
    for (const auto& in : sc.inputs()) {
        if (in.cardinality != 2) {
            return false;
        }
    }
    return sc.contexts() == std::vector<Context>{{0, 1}, {0, 2}, {1, 2}};
}

/// Coordinates of a three-input two-output ND box: m_i = P(o_i=0|x_i),
/// c_ij = P(o_i=o_j=0|x_i x_j).
struct NDParameterization {
    Rational m1, m2, m3, c12, c23, c13;

    static constexpr std::array<const char*, 6> names = {"m1", "m2", "m3", "c12", "c23", "c13"};

    std::array<Rational, 6> values() const { return {m1, m2, m3, c12, c23, c13}; }

    static NDParameterization from_values(std::span<const Rational, 6> v)
    {
        return {v[0], v[1], v[2], v[3], v[4], v[5]};
    }

    friend bool operator==(const NDParameterization&, const NDParameterization&) = default;
};

/// constant + sum_k coefficients[k] * parameter_k over (m1, m2, m3, c12, c23, c13).
struct AffineForm {
    Rational constant;
    std::array<Rational, 6> coefficients{};

    Rational evaluate(const NDParameterization& p) const
    {
        auto v = p.values();
        Rational s = constant;
        for (std::size_t k = 0; k < 6; ++k) {
            s += coefficients[k] * v[k];
        }
        return s;
    }

    bool is_constant() const
    {
        return std::all_of(coefficients.begin(), coefficients.end(), [](const Rational& r) { return r.is_zero(); });
    }

    std::string str() const
    {
        std::string s = constant.is_zero() ? "" : constant.str();
        for (std::size_t k = 0; k < 6; ++k) {
            const auto& a = coefficients[k];
            if (a.is_zero()) {
                continue;
            }
            std::string mag = abs(a) == 1 ? "" : abs(a).str() + "*";
            if (s.empty()) {
                s = (a.sign() < 0 ? "-" : "") + mag + NDParameterization::names[k];
            } else {
                s += (a.sign() < 0 ? " - " : " + ") + mag + NDParameterization::names[k];
            }
        }
        return s.empty() ? "0" : s;
    }

    friend AffineForm operator+(AffineForm a, const AffineForm& b)
    {
        a.constant += b.constant;
        for (std::size_t k = 0; k < 6; ++k) {
            a.coefficients[k] += b.coefficients[k];
        }
        return a;
    }

    friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

namespace detail {

// Parameter slots of m_i and c_ij for a context given as (i, j), 0-based.
inline std::size_t m_slot(std::size_t i) { return i; }

inline std::size_t c_slot(std::size_t i, std::size_t j)
{
    if (i == 0 && j == 1) return 3;
    if (i == 1 && j == 2) return 4;
    return 5;
}

} // namespace detail

/// Entry (o_i o_j | x_i x_j) as an affine form, 0-based inputs i < j:
/// 00 -> c_ij, 01 -> m_i - c_ij, 10 -> m_j - c_ij, 11 -> 1 - m_i - m_j + c_ij.
inline AffineForm entry_form(std::size_t i, std::size_t j, int oi, int oj)
{
    AffineForm f;
    const auto c = detail::c_slot(i, j);
    if (oi == 0 && oj == 0) {
        f.coefficients[c] = 1;
    } else if (oi == 0) {
        f.coefficients[detail::m_slot(i)] = 1;
        f.coefficients[c] = -1;
    } else if (oj == 0) {
        f.coefficients[detail::m_slot(j)] = 1;
        f.coefficients[c] = -1;
    } else {
        f.constant = 1;
        f.coefficients[detail::m_slot(i)] = -1;
        f.coefficients[detail::m_slot(j)] = -1;
        f.coefficients[c] = 1;
    }
    return f;
}

/// Affine form of the probability of a full-context event of the
/// triangle scenario.
inline AffineForm event_form(const Event& e)
{
    const auto& a = e.assignment();
    if (a.size() != 2) {
        throw DomainError("event_form expects a two-input event");
    }
    return entry_form(a[0].first, a[1].first, a[0].second, a[1].second);
}

struct Facet {
    std::string label;
    AffineForm form; // facet is form >= 0
};

/// The twelve positivity facets: every table entry >= 0, listed by
/// context x1x2, x2x3, x1x3 and outcome 00, 01, 10, 11.
inline const std::vector<Facet>& nd_facets()
{
    static const std::vector<Facet> facets = [] {
        std::vector<Facet> out;
        constexpr std::array<std::array<std::size_t, 2>, 3> pairs = {{{0, 1}, {1, 2}, {0, 2}}};
        for (auto [i, j] : pairs) {
            for (int o = 0; o < 4; ++o) {
                auto f = entry_form(i, j, o >> 1, o & 1);
                out.push_back({f.str() + " >= 0", f});
            }
        }
        return out;
    }();
    return facets;
}

/// Reads the six coordinates off a triangle-scenario box.
/// Throws DomainError when the scenario is wrong or the box fails ND.
inline NDParameterization to_parameterization(const ProbabilityBox& box)
{
    const auto& sc = box.scenario();
    if (!is_triangle_scenario(sc)) {
        throw DomainError("parameterization needs a three-input two-output box with the three pairwise contexts");
    }
    if (!check_no_disturbance(box).pass()) {
        throw DomainError("box violates no-disturbance; parameterization undefined");
    }
    // Context order is x1x2, x1x3, x2x3; outcome 0 is "00".
    const InputId x1[] = {0};
    const InputId x2[] = {1};
    const InputId x3[] = {2};
    const int zero[] = {0};
    return {box.marginal(0, x1, zero), box.marginal(0, x2, zero), box.marginal(1, x3, zero),
            box.entry(0, 0), box.entry(2, 0), box.entry(1, 0)};
}

/// Builds the box a parameter point describes. Throws DomainError naming
/// the first violated facet when the point lies outside the polytope.
inline ProbabilityBox from_parameterization(const NDParameterization& p, const Scenario& sc = triangle_scenario())
{
    if (!is_triangle_scenario(sc)) {
        throw DomainError("from_parameterization needs a triangle scenario");
    }
    for (const auto& f : nd_facets()) {
        if (f.form.evaluate(p).sign() < 0) {
            throw DomainError("parameters violate facet " + f.label);
        }
    }
    std::vector<std::vector<Rational>> tables;
    for (const auto& ctx : sc.contexts()) {
        auto& t = tables.emplace_back();
        for (int o = 0; o < 4; ++o) {
            t.push_back(entry_form(ctx[0], ctx[1], o >> 1, o & 1).evaluate(p));
        }
    }
    return ProbabilityBox(sc, std::move(tables));
}

// ---------------------------------------------------------------------------
// Vertices
// ---------------------------------------------------------------------------

struct Vertex {
    NDParameterization params;
    bool deterministic = false;
    std::vector<std::size_t> saturated_facets;
};

namespace detail {

inline bool is_deterministic(const NDParameterization& p)
{
    for (const auto& f : nd_facets()) {
        auto v = f.form.evaluate(p);
        if (v != 0 && v != 1) {
            return false;
        }
    }
    return true;
}

inline void for_each_combination(std::size_t n, std::size_t k, auto&& visit)
{
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = i;
    }
    for (;;) {
        visit(std::span<const std::size_t>(idx));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) {
            --i;
        }
        if (i == 0) {
            return;
        }
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

} // namespace detail

/// All vertices of the ND polytope, by exhaustive enumeration of the
/// C(12,6) = 924 candidate bases of the facet system. Singular bases are
/// skipped and duplicate points collapsed.
///
/// Canonical order: deterministic vertices first, then decreasing
/// lexicographic order of (m1, m2, m3, c12, c23, c13).
inline std::vector<Vertex> enumerate_vertices()
{
    const auto& facets = nd_facets();
    std::vector<NDParameterization> points;
    detail::for_each_combination(facets.size(), 6, [&](std::span<const std::size_t> basis) {
        Matrix a;
        std::vector<Rational> b;
        for (auto f : basis) {
            a.emplace_back(facets[f].form.coefficients.begin(), facets[f].form.coefficients.end());
            b.push_back(-facets[f].form.constant);
        }
        auto x = solve_square(std::move(a), std::move(b));
        if (!x) {
            return;
        }
        auto p = NDParameterization::from_values(std::span<const Rational, 6>(x->data(), 6));
        for (const auto& f : facets) {
            if (f.form.evaluate(p).sign() < 0) {
                return;
            }
        }
        if (std::find(points.begin(), points.end(), p) == points.end()) {
            points.push_back(std::move(p));
        }
    });

    std::vector<Vertex> vertices;
    for (auto& p : points) {
        Vertex v{p, detail::is_deterministic(p), {}};
        for (std::size_t f = 0; f < facets.size(); ++f) {
            if (facets[f].form.evaluate(p).is_zero()) {
                v.saturated_facets.push_back(f);
            }
        }
        vertices.push_back(std::move(v));
    }
    std::sort(vertices.begin(), vertices.end(), [](const Vertex& a, const Vertex& b) {
        if (a.deterministic != b.deterministic) {
            return a.deterministic;
        }
        return a.params.values() > b.params.values();
    });
    return vertices;
}

/// Rank of the saturated facet normals of a vertex (6 for a true vertex).
inline std::size_t saturation_rank(const Vertex& v)
{
    Matrix a;
    for (auto f : v.saturated_facets) {
        const auto& c = nd_facets()[f].form.coefficients;
        a.emplace_back(c.begin(), c.end());
    }
    return matrix_rank(std::move(a));
}

/// Dimension of the affine hull of a point set.
inline std::size_t affine_dimension(std::span<const NDParameterization> points)
{
    if (points.empty()) {
        return 0;
    }
    Matrix a;
    auto base = points[0].values();
    for (std::size_t i = 1; i < points.size(); ++i) {
        auto v = points[i].values();
        auto& row = a.emplace_back();
        for (std::size_t k = 0; k < 6; ++k) {
            row.push_back(v[k] - base[k]);
        }
    }
    return matrix_rank(std::move(a));
}

// ---------------------------------------------------------------------------
// Extremal catalog (the named deterministic and indeterministic boxes)
// ---------------------------------------------------------------------------

struct NamedBox {
    std::string label;
    ProbabilityBox box;
};

namespace detail {

// Each string lists a box's entries for contexts x1x2, x2x3, x1x3 (outcomes
// 00, 01, 10, 11); 'h' stands for 1/2.
inline ProbabilityBox box_from_rows(std::string_view rows)
{
    auto sc = triangle_scenario();
    auto value = [](char ch) { return ch == 'h' ? Rational(1, 2) : Rational(ch - '0'); };
    std::array<std::vector<Rational>, 3> by_pair;
    std::size_t k = 0;
    for (char ch : rows) {
        if (ch == ' ') {
            continue;
        }
        by_pair[k / 4].push_back(value(ch));
        ++k;
    }
    // Reorder x1x2, x2x3, x1x3 into canonical x1x2, x1x3, x2x3.
    return ProbabilityBox(sc, {by_pair[0], by_pair[2], by_pair[1]});
}

} // namespace detail

/// D1..D8 and I1..I4 in the conventional labeling.
inline const std::vector<NamedBox>& extremal_catalog()
{
    static const std::vector<NamedBox> catalog = [] {
        const std::pair<const char*, const char*> rows[] = {
            {"D1", "1000 1000 1000"}, {"D2", "1000 0100 0100"}, {"D3", "0100 0010 1000"},
            {"D4", "0010 1000 0010"}, {"D5", "0100 0001 0100"}, {"D6", "0010 0100 0001"},
            {"D7", "0001 0010 0010"}, {"D8", "0001 0001 0001"}, {"I1", "h00h h00h 0hh0"},
            {"I2", "h00h 0hh0 h00h"}, {"I3", "0hh0 h00h h00h"}, {"I4", "0hh0 0hh0 0hh0"},
        };
        std::vector<NamedBox> out;
        for (auto [label, r] : rows) {
            out.push_back({label, detail::box_from_rows(r)});
        }
        return out;
    }();
    return catalog;
}

inline const ProbabilityBox& catalog_box(std::string_view label)
{
    for (const auto& nb : extremal_catalog()) {
        if (nb.label == label) {
            return nb.box;
        }
    }
    throw DomainError("no extremal box named \"" + std::string(label) + "\"");
}

/// Catalog label of a parameter point, or "" when it is not a catalog vertex.
inline std::string catalog_label(const NDParameterization& p)
{
    for (const auto& nb : extremal_catalog()) {
        if (to_parameterization(nb.box) == p) {
            return nb.label;
        }
    }
    return "";
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

/// Convex weights over `vertices` reproducing the decomposed point.
struct Decomposition {
    std::vector<Vertex> vertices;
    std::vector<Rational> weights;

    NDParameterization reconstruct() const
    {
        std::array<Rational, 6> sum{};
        for (std::size_t v = 0; v < vertices.size(); ++v) {
            auto x = vertices[v].params.values();
            for (std::size_t k = 0; k < 6; ++k) {
                sum[k] += weights[v] * x[k];
            }
        }
        return NDParameterization::from_values(sum);
    }
};

struct FacetViolation {
    std::size_t facet = 0;
    std::string label;
    Rational value;
};

using Membership = std::variant<Decomposition, FacetViolation>;

/// Writes a point as a convex combination of the polytope vertices
/// (solved as an exact feasibility LP), or reports the first violated facet.
inline Membership decompose_membership(const NDParameterization& p)
{
    const auto& facets = nd_facets();
    for (std::size_t f = 0; f < facets.size(); ++f) {
        auto v = facets[f].form.evaluate(p);
        if (v.sign() < 0) {
            return FacetViolation{f, facets[f].label, v};
        }
    }
    auto vertices = enumerate_vertices();
    Matrix a(7, std::vector<Rational>(vertices.size()));
    std::vector<Rational> b(7);
    auto target = p.values();
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        auto x = vertices[v].params.values();
        for (std::size_t k = 0; k < 6; ++k) {
            a[k][v] = x[k];
        }
        a[6][v] = 1;
    }
    for (std::size_t k = 0; k < 6; ++k) {
        b[k] = target[k];
    }
    b[6] = 1;
    auto outcome = find_nonnegative_solution(a, b);
    if (auto* sol = std::get_if<PrimalSolution>(&outcome)) {
        return Decomposition{std::move(vertices), std::move(sol->x)};
    }
    throw Error("point satisfies every facet but has no vertex decomposition");
}

inline Membership decompose_membership(const ProbabilityBox& box)
{
    return decompose_membership(to_parameterization(box));
}

} // namespace pbox
