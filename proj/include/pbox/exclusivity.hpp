#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pbox/clique.hpp"
#include "pbox/polytope.hpp"
#include "pbox/scenario.hpp"

namespace pbox {

/// Two events are exclusive when some input assigned by both receives
/// different outputs. Irreflexive and symmetric.
inline bool exclusive(const Event& a, const Event& b)
{
    const auto& x = a.assignment();
    const auto& y = b.assignment();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i].first < y[j].first) {
            ++i;
        } else if (y[j].first < x[i].first) {
            ++j;
        } else {
            if (x[i].second != y[j].second) {
                return true;
            }
            ++i;
            ++j;
        }
    }
    return false;
}

struct ExclusivityGraph {
    std::vector<Event> nodes;
    Graph graph;
};

/// Materializes the exclusivity relation over `universe`, keeping the
/// given node order. Every event is revalidated against `sc`.
inline ExclusivityGraph build_exclusivity_graph(const Scenario& sc, std::vector<Event> universe)
{
    for (const auto& e : universe) {
        Event checked(sc, e.assignment()); // throws on an invalid event
        (void)checked;
    }
    ExclusivityGraph eg{std::move(universe), Graph{}};
    eg.graph = Graph(eg.nodes.size());
    for (std::size_t a = 0; a < eg.nodes.size(); ++a) {
        for (std::size_t b = a + 1; b < eg.nodes.size(); ++b) {
            if (exclusive(eg.nodes[a], eg.nodes[b])) {
                eg.graph.add_edge(a, b);
            }
        }
    }
    return eg;
}

/// Default universe: every full-context event.
inline ExclusivityGraph build_exclusivity_graph(const Scenario& sc)
{
    return build_exclusivity_graph(sc, full_context_events(sc));
}

/// A pairwise-exclusive event set whose probabilities sum past 1.
struct E1ViolationCertificate {
    std::vector<Event> events;
    std::vector<Rational> probabilities;
    Rational total;
};

/// Checks a certificate against `box` using only exclusive() and
/// event_probability(): pairwise exclusivity, each stated probability,
/// the stated total, and total > 1.
inline bool verify_violation(const ProbabilityBox& box, const E1ViolationCertificate& cert)
{
    if (cert.events.size() != cert.probabilities.size()) {
        return false;
    }
    Rational sum;
    for (std::size_t a = 0; a < cert.events.size(); ++a) {
        for (std::size_t b = a + 1; b < cert.events.size(); ++b) {
            if (!exclusive(cert.events[a], cert.events[b])) {
                return false;
            }
        }
        try {
            if (event_probability(box, cert.events[a]) != cert.probabilities[a]) {
                return false;
            }
        } catch (const Error&) {
            return false;
        }
        sum += cert.probabilities[a];
    }
    return sum == cert.total && cert.total > 1;
}

struct ExclusivityReport {
    int copies = 1;
    ProbabilityBox box; // the box the certificates refer to
    std::vector<E1ViolationCertificate> violations;

    bool pass() const { return violations.empty(); }
};

namespace detail {

inline E1ViolationCertificate make_certificate(const ProbabilityBox& box, const std::vector<Event>& nodes,
                                               const std::vector<std::size_t>& clique)
{
    E1ViolationCertificate cert;
    for (auto v : clique) {
        cert.events.push_back(nodes[v]);
        cert.probabilities.push_back(event_probability(box, nodes[v]));
        cert.total += cert.probabilities.back();
    }
    return cert;
}

inline void require_nd(const ProbabilityBox& box)
{
    auto nd = check_no_disturbance(box);
    if (!nd.pass()) {
        const auto& v = nd.violations.front();
        throw DomainError("box violates no-disturbance at " + v.event.str(box.scenario()) + ": " + v.value_a.str() +
                          " != " + v.value_b.str());
    }
}

} // namespace detail

/// Single-copy exclusivity check: every maximal clique of the full-context
/// exclusivity graph whose probability sum exceeds 1, in canonical clique
/// order. Requires an ND box.
inline ExclusivityReport e1_check(const ProbabilityBox& box)
{
    detail::require_nd(box);
    auto eg = build_exclusivity_graph(box.scenario());
    std::vector<Rational> p;
    for (const auto& e : eg.nodes) {
        p.push_back(event_probability(box, e));
    }
    ExclusivityReport report{1, box, {}};
    for (const auto& clique : maximal_cliques(eg.graph)) {
        Rational total;
        for (auto v : clique) {
            total += p[v];
        }
        if (total > 1) {
            report.violations.push_back(detail::make_certificate(box, eg.nodes, clique));
        }
    }
    return report;
}

/// k independent copies of `box` as one box. Copy n of input "x" is
/// labelled "x@n" and belongs to party "P@n"; contexts are k-tuples of the
/// original contexts and entries are products. Supports k in {1, 2}.
inline ProbabilityBox product_box(const ProbabilityBox& box, int k)
{
    if (k == 1) {
        return box;
    }
    if (k != 2) {
        throw DomainError("product_box supports k = 1 or 2, got " + std::to_string(k));
    }
    const auto& sc = box.scenario();
    auto tag = [](const std::string& s, int copy) { return s + "@" + std::to_string(copy); };
    std::vector<InputSpec> inputs;
    for (int copy = 1; copy <= 2; ++copy) {
        for (const auto& in : sc.inputs()) {
            inputs.push_back({tag(in.label, copy), tag(in.party, copy), in.cardinality});
        }
    }
    std::vector<std::vector<std::string>> contexts;
    for (const auto& c1 : sc.contexts()) {
        for (const auto& c2 : sc.contexts()) {
            auto& labels = contexts.emplace_back();
            for (auto i : c1) {
                labels.push_back(tag(sc.label(i), 1));
            }
            for (auto i : c2) {
                labels.push_back(tag(sc.label(i), 2));
            }
        }
    }
    Scenario product(std::move(inputs), contexts);

    std::vector<std::vector<Rational>> tables(product.contexts().size());
    for (std::size_t k1 = 0; k1 < sc.contexts().size(); ++k1) {
        for (std::size_t k2 = 0; k2 < sc.contexts().size(); ++k2) {
            const auto& c1 = sc.contexts()[k1];
            const auto& c2 = sc.contexts()[k2];
            Context pc;
            for (auto i : c1) {
                pc.push_back(product.input_id(tag(sc.label(i), 1)));
            }
            for (auto i : c2) {
                pc.push_back(product.input_id(tag(sc.label(i), 2)));
            }
            std::sort(pc.begin(), pc.end());
            auto idx = *product.find_context(pc);
            auto& table = tables[idx];
            for (std::size_t o = 0; o < product.outcome_count(pc); ++o) {
                auto outs = product.decode_outcome(pc, o);
                std::vector<int> o1(c1.size());
                std::vector<int> o2(c2.size());
                for (std::size_t t = 0; t < pc.size(); ++t) {
                    const auto& label = product.label(pc[t]);
                    auto at = label.rfind('@');
                    auto original = sc.input_id(label.substr(0, at));
                    if (label.substr(at + 1) == "1") {
                        o1[static_cast<std::size_t>(std::find(c1.begin(), c1.end(), original) - c1.begin())] = outs[t];
                    } else {
                        o2[static_cast<std::size_t>(std::find(c2.begin(), c2.end(), original) - c2.begin())] = outs[t];
                    }
                }
                table.push_back(box.entry(k1, sc.encode_outcome(c1, o1)) * box.entry(k2, sc.encode_outcome(c2, o2)));
            }
        }
    }
    return ProbabilityBox(std::move(product), std::move(tables));
}

namespace detail {

// Exact integer weights over a common denominator, when they fit in 62 bits.
inline std::optional<std::vector<std::int64_t>> scaled_weights(const std::vector<Rational>& w)
{
    BigInt lcm = 1;
    for (const auto& r : w) {
        lcm = boost::multiprecision::lcm(lcm, r.denominator());
    }
    std::vector<std::int64_t> out;
    BigInt total = lcm; // the floor 1 scales to lcm
    const BigInt limit = BigInt(1) << 62;
    for (const auto& r : w) {
        BigInt s = r.numerator() * (lcm / r.denominator());
        total += s;
        if (total >= limit) {
            return std::nullopt;
        }
        out.push_back(static_cast<std::int64_t>(s));
    }
    return out;
}

// True when nonnegative multiples of the maximal independent sets of `g`,
// of total mass at most one, cover every weight. Products of independent
// sets are independent in the two-copy graph, so such a cover squares into
// one there and no clique of either graph can weigh more than one.
inline bool independent_cover_at_most_one(const Graph& g, const std::vector<Rational>& w)
{
    Graph complement(g.size());
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = a + 1; b < g.size(); ++b) {
            if (!g.adjacent(a, b)) {
                complement.add_edge(a, b);
            }
        }
    }
    const auto sets = maximal_cliques(complement);
    const std::size_t n = g.size();
    const std::size_t cols = sets.size() + n + 1;
    Matrix a(n + 1, std::vector<Rational>(cols));
    std::vector<Rational> b(w);
    for (std::size_t s = 0; s < sets.size(); ++s) {
        for (auto v : sets[s]) {
            a[v][s] = 1;
        }
        a[n][s] = 1;
    }
    for (std::size_t v = 0; v < n; ++v) {
        a[v][sets.size() + v] = -1; // surplus
    }
    a[n][cols - 1] = 1; // unused mass
    b.push_back(1);
    return std::holds_alternative<PrimalSolution>(find_nonnegative_solution(a, b));
}

} // namespace detail

/// Exclusivity at k copies. k = 1 is e1_check. For k = 2 a fractional
/// cover of the single-copy graph settles most passing boxes, and a
/// single-copy violation is squared into one. Otherwise the product box is
/// searched for a maximum-weight clique of its full-context exclusivity
/// graph; a clique of total > 1 is returned as the single certificate.
inline ExclusivityReport lo_k_check(const ProbabilityBox& box, int k)
{
    if (k == 1) {
        return e1_check(box);
    }
    if (k != 2) {
        throw DomainError("lo_k_check supports k = 1 or 2, got " + std::to_string(k));
    }
    detail::require_nd(box);
    auto pb = product_box(box, 2);
    {
        auto single = build_exclusivity_graph(box.scenario());
        std::vector<Rational> p;
        for (const auto& e : single.nodes) {
            p.push_back(event_probability(box, e));
        }
        if (detail::independent_cover_at_most_one(single.graph, p)) {
            return ExclusivityReport{2, pb, {}};
        }
        // A single-copy violation C squares into the maximal clique C x C.
        std::optional<std::vector<std::size_t>> heaviest;
        Rational heaviest_total = 1;
        for (const auto& clique : maximal_cliques(single.graph)) {
            Rational total;
            for (auto v : clique) {
                total += p[v];
            }
            if (total > heaviest_total) {
                heaviest_total = total;
                heaviest = clique;
            }
        }
        if (heaviest) {
            std::vector<Event> nodes;
            for (auto u : *heaviest) {
                for (auto v : *heaviest) {
                    std::vector<std::pair<InputId, int>> assignment;
                    for (const auto& [in, out] : single.nodes[u].assignment()) {
                        assignment.emplace_back(pb.scenario().input_id(box.scenario().label(in) + "@1"), out);
                    }
                    for (const auto& [in, out] : single.nodes[v].assignment()) {
                        assignment.emplace_back(pb.scenario().input_id(box.scenario().label(in) + "@2"), out);
                    }
                    nodes.emplace_back(pb.scenario(), std::move(assignment));
                }
            }
            std::vector<std::size_t> all(nodes.size());
            std::iota(all.begin(), all.end(), std::size_t{0});
            ExclusivityReport report{2, pb, {}};
            report.violations.push_back(detail::make_certificate(pb, nodes, all));
            return report;
        }
    }
    auto eg = build_exclusivity_graph(pb.scenario());
    std::vector<Rational> w;
    for (const auto& e : eg.nodes) {
        w.push_back(event_probability(pb, e));
    }
    std::optional<std::vector<std::size_t>> clique;
    if (auto scaled = detail::scaled_weights(w)) {
        BigInt lcm = 1;
        for (const auto& r : w) {
            lcm = boost::multiprecision::lcm(lcm, r.denominator());
        }
        auto found = max_weight_clique_above<std::int64_t>(eg.graph, *scaled, static_cast<std::int64_t>(lcm));
        if (found) {
            clique = found->vertices;
        }
    } else {
        auto found = max_weight_clique_above<Rational>(eg.graph, w, Rational(1));
        if (found) {
            clique = found->vertices;
        }
    }
    ExclusivityReport report{2, pb, {}};
    if (clique) {
        report.violations.push_back(detail::make_certificate(pb, eg.nodes, extend_to_maximal(eg.graph, *clique)));
    }
    return report;
}

/// Smallest p such that p * box + (1 - p) * noise violates single-copy
/// exclusivity for every larger p: the minimum over maximal cliques C with
/// P_box(C) > 1 of (1 - P_noise(C)) / (P_box(C) - P_noise(C)).
/// Throws when box already satisfies every clique.
inline Rational critical_mixing_weight(const ProbabilityBox& box, const ProbabilityBox& noise)
{
    if (!(box.scenario() == noise.scenario())) {
        throw DomainError("box and noise live on different scenarios");
    }
    detail::require_nd(box);
    detail::require_nd(noise);
    auto eg = build_exclusivity_graph(box.scenario());
    std::optional<Rational> best;
    for (const auto& clique : maximal_cliques(eg.graph)) {
        Rational tb;
        Rational tn;
        for (auto v : clique) {
            tb += event_probability(box, eg.nodes[v]);
            tn += event_probability(noise, eg.nodes[v]);
        }
        if (!(tb > 1)) {
            continue;
        }
        Rational p = tn >= 1 ? Rational(0) : (1 - tn) / (tb - tn);
        if (!best || p < *best) {
            best = p;
        }
    }
    if (!best) {
        throw DomainError("box satisfies every single-copy exclusivity constraint");
    }
    return *best;
}

/// Critical weight of an indeterministic vertex I1..I4 against white noise.
inline Rational noise_threshold(const ProbabilityBox& vertex)
{
    bool known = false;
    for (const auto& nb : extremal_catalog()) {
        known = known || (nb.label[0] == 'I' && nb.box == vertex);
    }
    if (!known) {
        throw DomainError("noise_threshold expects one of the indeterministic vertices I1..I4");
    }
    return critical_mixing_weight(vertex, uniform_box(vertex.scenario()));
}

/// A level-1 exclusivity inequality of the triangle scenario, written
/// form <= 1 over the ND coordinates.
struct Level1Inequality {
    std::vector<Event> events;
    AffineForm form;
};

/// The nontrivial single-copy constraints: maximal cliques of the
/// full-context exclusivity graph whose total, rewritten through the
/// parameterization, is not identically a constant.
inline std::vector<Level1Inequality> level1_inequalities()
{
    auto sc = triangle_scenario();
    auto eg = build_exclusivity_graph(sc);
    std::vector<Level1Inequality> out;
    for (const auto& clique : maximal_cliques(eg.graph)) {
        Level1Inequality ineq;
        for (auto v : clique) {
            ineq.events.push_back(eg.nodes[v]);
            ineq.form = ineq.form + event_form(eg.nodes[v]);
        }
        if (ineq.form.is_constant()) {
            if (ineq.form.constant > 1) {
                throw Error("exclusive events with constant total above 1");
            }
            continue;
        }
        out.push_back(std::move(ineq));
    }
    return out;
}

} // namespace pbox
