#pragma once

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pbox/error.hpp"

namespace pbox {

/// Undirected simple graph stored as adjacency bit rows.
class Graph {
public:
    using Bits = boost::dynamic_bitset<>;

    Graph() = default;
    explicit Graph(std::size_t n) : rows_(n, Bits(n)) {}

    std::size_t size() const { return rows_.size(); }

    void add_edge(std::size_t a, std::size_t b)
    {
        if (a == b) {
            throw DomainError("self-loop in simple graph");
        }
        rows_.at(a).set(b);
        rows_.at(b).set(a);
    }

    bool adjacent(std::size_t a, std::size_t b) const { return rows_.at(a).test(b); }
    const Bits& neighbors(std::size_t v) const { return rows_.at(v); }

    std::size_t edge_count() const
    {
        std::size_t twice = 0;
        for (const auto& r : rows_) {
            twice += r.count();
        }
        return twice / 2;
    }

    std::vector<std::pair<std::size_t, std::size_t>> edges() const
    {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t a = 0; a < size(); ++a) {
            for (auto b = rows_[a].find_next(a); b != Bits::npos; b = rows_[a].find_next(b)) {
                out.emplace_back(a, b);
            }
        }
        return out;
    }

private:
    std::vector<Bits> rows_;
};

namespace detail {

template <typename Visit>
void bron_kerbosch(const Graph& g, std::vector<std::size_t>& r, Graph::Bits p, Graph::Bits x, Visit& visit)
{
    if (p.none()) {
        if (x.none()) {
            visit(std::as_const(r));
        }
        return;
    }
    // Tomita pivot: the vertex of P u X with the most neighbours in P.
    std::size_t pivot = Graph::Bits::npos;
    std::size_t best = 0;
    for (const auto* set : {&p, &x}) {
        for (auto u = set->find_first(); u != Graph::Bits::npos; u = set->find_next(u)) {
            auto n = (p & g.neighbors(u)).count();
            if (pivot == Graph::Bits::npos || n > best) {
                pivot = u;
                best = n;
            }
        }
    }
    Graph::Bits candidates = p - g.neighbors(pivot);
    for (auto v = candidates.find_first(); v != Graph::Bits::npos; v = candidates.find_next(v)) {
        r.push_back(v);
        bron_kerbosch(g, r, p & g.neighbors(v), x & g.neighbors(v), visit);
        r.pop_back();
        p.reset(v);
        x.set(v);
    }
}

} // namespace detail

/// Calls visit(clique) for every maximal clique, pivoting Bron-Kerbosch.
/// Vertices inside a reported clique are in discovery order.
template <typename Visit>
void for_each_maximal_clique(const Graph& g, Visit&& visit)
{
    std::vector<std::size_t> r;
    Graph::Bits p(g.size());
    p.set();
    detail::bron_kerbosch(g, r, p, Graph::Bits(g.size()), visit);
}

/// Every maximal clique, each sorted ascending, the list sorted lexicographically.
inline std::vector<std::vector<std::size_t>> maximal_cliques(const Graph& g)
{
    std::vector<std::vector<std::size_t>> out;
    for_each_maximal_clique(g, [&](const std::vector<std::size_t>& c) {
        auto& s = out.emplace_back(c);
        std::sort(s.begin(), s.end());
    });
    std::sort(out.begin(), out.end());
    return out;
}

template <typename W>
struct WeightedClique {
    std::vector<std::size_t> vertices;
    W weight{};
};

namespace detail {

// Branch and bound over candidate lists. A clique meets an independent set
// at most once, so any family of independent sets whose multiplicities
// cover every candidate's weight bounds what a branch can still add.
template <typename W>
class MaxWeightCliqueSearch {
public:
    MaxWeightCliqueSearch(const Graph& g, std::span<const W> w, W floor)
        : g_(g), w_(w), best_(std::move(floor)), residual_(g.size())
    {
    }

    std::optional<WeightedClique<W>> run()
    {
        std::vector<std::size_t> start;
        for (std::size_t v = 0; v < g_.size(); ++v) {
            if (w_[v] > W{}) {
                start.push_back(v);
            }
        }
        std::stable_sort(start.begin(), start.end(), [&](auto a, auto b) { return w_[a] > w_[b]; });
        std::vector<std::size_t> current;
        expand(current, W{}, start);
        if (!found_) {
            return std::nullopt;
        }
        std::sort(best_clique_.begin(), best_clique_.end());
        return WeightedClique<W>{best_clique_, best_};
    }

private:
    // Orders `cand` so that every prefix up to position i is covered by
    // independent sets of total multiplicity bound[i]. Each greedy
    // independent set takes the smallest residual weight among its members
    // and pays it once; a vertex leaves when its residual reaches zero.
    void cover(const std::vector<std::size_t>& cand, std::vector<std::size_t>& order, std::vector<W>& bound)
    {
        for (auto v : cand) {
            residual_[v] = w_[v];
        }
        Graph::Bits remaining(g_.size());
        for (auto v : cand) {
            remaining.set(v);
        }
        std::vector<std::size_t> live = cand;
        std::vector<std::size_t> set;
        W paid{};
        while (!live.empty()) {
            std::stable_sort(live.begin(), live.end(), [&](auto a, auto b) { return residual_[a] < residual_[b]; });
            Graph::Bits avail = remaining;
            set.clear();
            for (auto v : live) {
                if (avail.test(v)) {
                    set.push_back(v);
                    avail -= g_.neighbors(v);
                    avail.reset(v);
                }
            }
            const W delta = residual_[set.front()];
            paid += delta;
            for (auto v : set) {
                residual_[v] -= delta;
                if (!(residual_[v] > W{})) {
                    order.push_back(v);
                    bound.push_back(paid);
                    remaining.reset(v);
                }
            }
            std::erase_if(live, [&](auto v) { return !remaining.test(v); });
        }
    }

    void expand(std::vector<std::size_t>& current, const W& weight, const std::vector<std::size_t>& cand)
    {
        std::vector<std::size_t> order;
        std::vector<W> bound;
        cover(cand, order, bound);

        for (std::size_t i = order.size(); i-- > 0;) {
            if (!(weight + bound[i] > best_)) {
                return;
            }
            const auto v = order[i];
            std::vector<std::size_t> next;
            for (std::size_t k = 0; k < i; ++k) {
                if (g_.adjacent(v, order[k])) {
                    next.push_back(order[k]);
                }
            }
            current.push_back(v);
            W grown = weight + w_[v];
            if (next.empty()) {
                if (grown > best_) {
                    best_ = grown;
                    best_clique_ = current;
                    found_ = true;
                }
            } else {
                expand(current, grown, next);
            }
            current.pop_back();
        }
    }

    const Graph& g_;
    std::span<const W> w_;
    W best_;
    std::vector<std::size_t> best_clique_;
    bool found_ = false;
    std::vector<W> residual_;
};

} // namespace detail

/// Maximum-weight clique among vertices of positive weight, provided its
/// weight strictly exceeds `floor`; nullopt otherwise. Exact for any
/// ordered weight type (integers, rationals).
template <typename W>
std::optional<WeightedClique<W>> max_weight_clique_above(const Graph& g, std::span<const W> weights, W floor)
{
    if (weights.size() != g.size()) {
        throw DomainError("max_weight_clique_above: one weight per vertex required");
    }
    return detail::MaxWeightCliqueSearch<W>(g, weights, std::move(floor)).run();
}

/// Greedily extends a clique to a maximal one, scanning vertices in index order.
inline std::vector<std::size_t> extend_to_maximal(const Graph& g, std::vector<std::size_t> clique)
{
    Graph::Bits common(g.size());
    common.set();
    for (auto v : clique) {
        common &= g.neighbors(v);
    }
    for (auto v = common.find_first(); v != Graph::Bits::npos; v = common.find_next(v)) {
        if (common.test(v)) {
            clique.push_back(v);
            common &= g.neighbors(v);
        }
    }
    std::sort(clique.begin(), clique.end());
    return clique;
}

} // namespace pbox
