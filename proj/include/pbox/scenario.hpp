#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "pbox/error.hpp"
#include "pbox/rational.hpp"

namespace pbox {

/// Position of an input in the scenario's canonical input order.
using InputId = std::size_t;

/// A jointly measurable set of inputs, sorted ascending.
using Context = std::vector<InputId>;

struct InputSpec {
    std::string label;
    std::string party;
    int cardinality = 2;
};

/// Parties, inputs, output cardinalities and the declared measurement
/// contexts of a black-box experiment.
///
/// Inputs are ordered canonically by (party, label); contexts are sorted
/// lexicographically by their input ids. Declared contexts must be
/// maximal: subsets are reachable through marginalization only.
class Scenario {
public:
    Scenario() = default;

    Scenario(std::vector<InputSpec> inputs, const std::vector<std::vector<std::string>>& contexts)
        : inputs_(std::move(inputs))
    {
        if (inputs_.empty()) {
            throw ModelError("scenario has no inputs");
        }
        std::sort(inputs_.begin(), inputs_.end(), [](const InputSpec& a, const InputSpec& b) {
            return std::tie(a.party, a.label) < std::tie(b.party, b.label);
        });
        for (std::size_t i = 0; i < inputs_.size(); ++i) {
            const auto& in = inputs_[i];
            if (in.label.empty() || in.party.empty()) {
                throw ModelError("input and party labels must be nonempty");
            }
            if (in.label.find_first_of(",|() ") != std::string::npos) {
                throw ModelError("input label \"" + in.label + "\" contains a reserved character");
            }
            if (in.cardinality < 1 || in.cardinality > 10) {
                throw ModelError("input " + in.label + ": output cardinality must be in [1, 10]");
            }
            if (!index_.emplace(in.label, i).second) {
                throw ModelError("duplicate input label " + in.label);
            }
            if (parties_.empty() || parties_.back() != in.party) {
                parties_.push_back(in.party);
            }
        }

        for (const auto& labels : contexts) {
            if (labels.empty()) {
                throw ModelError("empty context");
            }
            Context ctx;
            for (const auto& l : labels) {
                ctx.push_back(input_id(l));
            }
            std::sort(ctx.begin(), ctx.end());
            if (std::adjacent_find(ctx.begin(), ctx.end()) != ctx.end()) {
                throw ModelError("context " + join_labels(ctx) + " repeats an input");
            }
            contexts_.push_back(std::move(ctx));
        }
        std::sort(contexts_.begin(), contexts_.end());
        if (std::adjacent_find(contexts_.begin(), contexts_.end()) != contexts_.end()) {
            throw ModelError("duplicate context");
        }
        for (const auto& a : contexts_) {
            for (const auto& b : contexts_) {
                if (a != b && std::includes(b.begin(), b.end(), a.begin(), a.end())) {
                    throw ModelError("context " + context_key(a) + " is contained in " + context_key(b));
                }
            }
        }
        for (InputId i = 0; i < inputs_.size(); ++i) {
            bool covered = std::any_of(contexts_.begin(), contexts_.end(), [i](const Context& c) {
                return std::binary_search(c.begin(), c.end(), i);
            });
            if (!covered) {
                throw ModelError("input " + inputs_[i].label + " appears in no context");
            }
        }
    }

    const std::vector<std::string>& parties() const { return parties_; }
    const std::vector<InputSpec>& inputs() const { return inputs_; }
    const std::vector<Context>& contexts() const { return contexts_; }
    std::size_t input_count() const { return inputs_.size(); }

    InputId input_id(std::string_view label) const
    {
        auto it = index_.find(std::string(label));
        if (it == index_.end()) {
            throw ModelError("unknown input label \"" + std::string(label) + "\"");
        }
        return it->second;
    }

    const std::string& label(InputId id) const { return inputs_.at(id).label; }
    int cardinality(InputId id) const { return inputs_.at(id).cardinality; }

    /// Inputs belonging to `party`, in canonical order.
    std::vector<InputId> party_inputs(std::string_view party) const
    {
        std::vector<InputId> out;
        for (InputId i = 0; i < inputs_.size(); ++i) {
            if (inputs_[i].party == party) {
                out.push_back(i);
            }
        }
        return out;
    }

    /// "x1,x2" style key used in box files.
    std::string context_key(const Context& ctx) const { return join_labels(ctx); }

    std::optional<std::size_t> find_context(const Context& ctx) const
    {
        auto it = std::lower_bound(contexts_.begin(), contexts_.end(), ctx);
        if (it == contexts_.end() || *it != ctx) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - contexts_.begin());
    }

    /// Index of the smallest declared context containing `inputs` (sorted);
    /// ties resolve to the first context in canonical order.
    std::optional<std::size_t> containing_context(std::span<const InputId> inputs) const
    {
        std::optional<std::size_t> best;
        for (std::size_t k = 0; k < contexts_.size(); ++k) {
            const auto& c = contexts_[k];
            if (std::includes(c.begin(), c.end(), inputs.begin(), inputs.end())) {
                if (!best || c.size() < contexts_[*best].size()) {
                    best = k;
                }
            }
        }
        return best;
    }

    std::size_t outcome_count(const Context& ctx) const
    {
        std::size_t n = 1;
        for (auto i : ctx) {
            n *= static_cast<std::size_t>(cardinality(i));
        }
        return n;
    }

    /// Outputs for outcome number `index`; the first input is the most
    /// significant digit, so outcome order is lexicographic.
    std::vector<int> decode_outcome(const Context& ctx, std::size_t index) const
    {
        std::vector<int> out(ctx.size());
        for (std::size_t k = ctx.size(); k-- > 0;) {
            auto d = static_cast<std::size_t>(cardinality(ctx[k]));
            out[k] = static_cast<int>(index % d);
            index /= d;
        }
        return out;
    }

    std::size_t encode_outcome(const Context& ctx, std::span<const int> outputs) const
    {
        std::size_t index = 0;
        for (std::size_t k = 0; k < ctx.size(); ++k) {
            index = index * static_cast<std::size_t>(cardinality(ctx[k])) + static_cast<std::size_t>(outputs[k]);
        }
        return index;
    }

    std::string outcome_string(const Context& ctx, std::size_t index) const
    {
        std::string s;
        for (int o : decode_outcome(ctx, index)) {
            s.push_back(static_cast<char>('0' + o));
        }
        return s;
    }

    friend bool operator==(const Scenario& a, const Scenario& b)
    {
        if (a.contexts_ != b.contexts_ || a.inputs_.size() != b.inputs_.size()) {
            return false;
        }
        for (std::size_t i = 0; i < a.inputs_.size(); ++i) {
            const auto& x = a.inputs_[i];
            const auto& y = b.inputs_[i];
            if (x.label != y.label || x.party != y.party || x.cardinality != y.cardinality) {
                return false;
            }
        }
        return true;
    }

private:
    std::string join_labels(const Context& ctx) const
    {
        std::string s;
        for (auto i : ctx) {
            if (!s.empty()) {
                s += ',';
            }
            s += inputs_[i].label;
        }
        return s;
    }

    std::vector<InputSpec> inputs_;
    std::vector<std::string> parties_;
    std::vector<Context> contexts_;
    std::map<std::string, InputId> index_;
};

/// Assignment of outputs to a nonempty set of compatible inputs, written
/// (o1o2|x1,x2).
class Event {
public:
    using Assignment = std::vector<std::pair<InputId, int>>;

    Event() = default;

    /// Validates `assignment` against `scenario`: inputs must be distinct,
    /// outputs in range, and the input set inside some declared context.
    Event(const Scenario& scenario, Assignment assignment) : assignment_(std::move(assignment))
    {
        if (assignment_.empty()) {
            throw ModelError("event assigns no inputs");
        }
        std::sort(assignment_.begin(), assignment_.end());
        for (std::size_t k = 0; k < assignment_.size(); ++k) {
            auto [in, out] = assignment_[k];
            if (in >= scenario.input_count()) {
                throw ModelError("event references an undeclared input");
            }
            if (k > 0 && assignment_[k - 1].first == in) {
                throw ModelError("event assigns input " + scenario.label(in) + " twice");
            }
            if (out < 0 || out >= scenario.cardinality(in)) {
                throw ModelError("output " + std::to_string(out) + " out of range for input " + scenario.label(in));
            }
        }
        if (!scenario.containing_context(inputs())) {
            throw ModelError("event input set " + scenario.context_key(inputs()) + " lies in no declared context");
        }
    }

    /// The event of outcome `outcome_index` on declared context `context_index`.
    static Event full_context(const Scenario& scenario, std::size_t context_index, std::size_t outcome_index)
    {
        const auto& ctx = scenario.contexts().at(context_index);
        auto outs = scenario.decode_outcome(ctx, outcome_index);
        Assignment a;
        for (std::size_t k = 0; k < ctx.size(); ++k) {
            a.emplace_back(ctx[k], outs[k]);
        }
        Event e;
        e.assignment_ = std::move(a);
        return e;
    }

    /// Parses "(01|x1,x2)": one output digit per listed input, in the
    /// order the inputs are listed.
    static Event parse(const Scenario& scenario, std::string_view text)
    {
        auto bar = text.find('|');
        if (text.size() < 4 || text.front() != '(' || text.back() != ')' || bar == std::string_view::npos) {
            throw ParseError("malformed event \"" + std::string(text) + "\"");
        }
        auto outs = text.substr(1, bar - 1);
        auto labels = text.substr(bar + 1, text.size() - bar - 2);
        Assignment a;
        std::size_t pos = 0;
        for (char ch : outs) {
            if (ch < '0' || ch > '9') {
                throw ParseError("malformed event \"" + std::string(text) + "\"");
            }
            auto comma = labels.find(',', pos);
            auto label = labels.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            if (label.empty()) {
                throw ParseError("event \"" + std::string(text) + "\" lists fewer inputs than outputs");
            }
            a.emplace_back(scenario.input_id(label), ch - '0');
            pos = comma == std::string_view::npos ? labels.size() + 1 : comma + 1;
        }
        if (pos <= labels.size()) {
            throw ParseError("event \"" + std::string(text) + "\" lists more inputs than outputs");
        }
        return Event(scenario, std::move(a));
    }

    const Assignment& assignment() const { return assignment_; }

    std::vector<InputId> inputs() const
    {
        std::vector<InputId> ids;
        for (const auto& [in, out] : assignment_) {
            ids.push_back(in);
        }
        return ids;
    }

    std::optional<int> output_of(InputId input) const
    {
        auto it = std::lower_bound(assignment_.begin(), assignment_.end(), std::pair{input, -1});
        if (it == assignment_.end() || it->first != input) {
            return std::nullopt;
        }
        return it->second;
    }

    std::string str(const Scenario& scenario) const
    {
        std::string outs;
        std::string labels;
        for (const auto& [in, out] : assignment_) {
            outs.push_back(static_cast<char>('0' + out));
            if (!labels.empty()) {
                labels += ',';
            }
            labels += scenario.label(in);
        }
        return "(" + outs + "|" + labels + ")";
    }

    friend auto operator<=>(const Event&, const Event&) = default;

private:
    Assignment assignment_;
};

/// Per-context outcome distributions with exact entries.
///
/// Tables are indexed by context (canonical order) and then by outcome
/// index. Construction validates that each table is a distribution.
class ProbabilityBox {
public:
    ProbabilityBox() = default;

    ProbabilityBox(Scenario scenario, std::vector<std::vector<Rational>> tables)
        : scenario_(std::move(scenario)), tables_(std::move(tables))
    {
        const auto& ctxs = scenario_.contexts();
        if (tables_.size() != ctxs.size()) {
            throw ModelError("box has " + std::to_string(tables_.size()) + " tables for " +
                             std::to_string(ctxs.size()) + " contexts");
        }
        for (std::size_t k = 0; k < ctxs.size(); ++k) {
            const auto key = scenario_.context_key(ctxs[k]);
            if (tables_[k].size() != scenario_.outcome_count(ctxs[k])) {
                throw ModelError("context " + key + ": wrong number of outcomes");
            }
            Rational total;
            for (std::size_t o = 0; o < tables_[k].size(); ++o) {
                if (tables_[k][o].sign() < 0) {
                    throw ModelError("context " + key + ": negative entry " + tables_[k][o].str() + " at outcome " +
                                     scenario_.outcome_string(ctxs[k], o));
                }
                total += tables_[k][o];
            }
            if (total != 1) {
                throw ModelError("context " + key + ": entries sum to " + total.str() + ", not 1");
            }
        }
    }

    const Scenario& scenario() const { return scenario_; }
    const std::vector<std::vector<Rational>>& tables() const { return tables_; }
    const std::vector<Rational>& table(std::size_t context_index) const { return tables_.at(context_index); }

    const Rational& entry(std::size_t context_index, std::size_t outcome_index) const
    {
        return tables_.at(context_index).at(outcome_index);
    }

    /// Marginal of context `context_index` on the (sorted) subset `inputs`,
    /// evaluated at `outputs`.
    Rational marginal(std::size_t context_index, std::span<const InputId> inputs, std::span<const int> outputs) const
    {
        const auto& ctx = scenario_.contexts().at(context_index);
        std::vector<std::size_t> pos;
        for (auto in : inputs) {
            auto it = std::lower_bound(ctx.begin(), ctx.end(), in);
            if (it == ctx.end() || *it != in) {
                throw ModelError("input " + scenario_.label(in) + " is not in context " + scenario_.context_key(ctx));
            }
            pos.push_back(static_cast<std::size_t>(it - ctx.begin()));
        }
        Rational sum;
        const auto& table = tables_[context_index];
        for (std::size_t o = 0; o < table.size(); ++o) {
            auto outs = scenario_.decode_outcome(ctx, o);
            bool match = true;
            for (std::size_t k = 0; k < pos.size() && match; ++k) {
                match = outs[pos[k]] == outputs[k];
            }
            if (match) {
                sum += table[o];
            }
        }
        return sum;
    }

    friend bool operator==(const ProbabilityBox&, const ProbabilityBox&) = default;

private:
    Scenario scenario_;
    std::vector<std::vector<Rational>> tables_;
};

/// Probability of `e`, marginalized from the smallest declared context
/// that contains its input set.
inline Rational event_probability(const ProbabilityBox& box, const Event& e)
{
    const auto& sc = box.scenario();
    std::vector<InputId> ins;
    std::vector<int> outs;
    for (const auto& [in, out] : e.assignment()) {
        if (in >= sc.input_count()) {
            throw ModelError("event references an undeclared input");
        }
        ins.push_back(in);
        outs.push_back(out);
    }
    auto k = sc.containing_context(ins);
    if (!k) {
        throw ModelError("event " + e.str(sc) + " lies in no declared context");
    }
    return box.marginal(*k, ins, outs);
}

/// Every full-context event, in canonical (context, outcome) order.
inline std::vector<Event> full_context_events(const Scenario& sc)
{
    std::vector<Event> events;
    for (std::size_t k = 0; k < sc.contexts().size(); ++k) {
        auto n = sc.outcome_count(sc.contexts()[k]);
        for (std::size_t o = 0; o < n; ++o) {
            events.push_back(Event::full_context(sc, k, o));
        }
    }
    return events;
}

/// The box with every context uniformly distributed.
inline ProbabilityBox uniform_box(const Scenario& sc)
{
    std::vector<std::vector<Rational>> tables;
    for (const auto& ctx : sc.contexts()) {
        auto n = sc.outcome_count(ctx);
        tables.emplace_back(n, Rational(1, static_cast<std::int64_t>(n)));
    }
    return ProbabilityBox(sc, std::move(tables));
}

/// Convex combination sum_i weights[i] * boxes[i]; weights must be
/// nonnegative and sum to 1, and all boxes must share a scenario.
inline ProbabilityBox mixture(std::span<const ProbabilityBox> boxes, std::span<const Rational> weights)
{
    if (boxes.empty() || boxes.size() != weights.size()) {
        throw DomainError("mixture needs one weight per box");
    }
    auto tables = boxes[0].tables();
    for (auto& t : tables) {
        std::fill(t.begin(), t.end(), Rational{});
    }
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        if (!(boxes[b].scenario() == boxes[0].scenario())) {
            throw DomainError("mixture of boxes over different scenarios");
        }
        if (weights[b].sign() < 0) {
            throw DomainError("negative mixture weight");
        }
        for (std::size_t k = 0; k < tables.size(); ++k) {
            for (std::size_t o = 0; o < tables[k].size(); ++o) {
                tables[k][o] += weights[b] * boxes[b].entry(k, o);
            }
        }
    }
    return ProbabilityBox(boxes[0].scenario(), std::move(tables));
}

/// p * a + (1 - p) * b.
inline ProbabilityBox blend(const Rational& p, const ProbabilityBox& a, const ProbabilityBox& b)
{
    if (p.sign() < 0 || p > 1) {
        throw DomainError("mixing weight " + p.str() + " outside [0, 1]");
    }
    const ProbabilityBox boxes[] = {a, b};
    const Rational weights[] = {p, 1 - p};
    return mixture(boxes, weights);
}

} // namespace pbox
