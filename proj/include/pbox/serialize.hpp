#pragma once

#include <json.hpp>

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pbox/scenario.hpp"

namespace pbox {

using Json = nlohmann::json;

inline Json to_json(const ProbabilityBox& box)
{
    const auto& sc = box.scenario();
    Json j;
    j["parties"] = sc.parties();
    Json inputs = Json::object();
    Json outputs = Json::object();
    for (const auto& in : sc.inputs()) {
        inputs[in.party].push_back(in.label);
        outputs[in.label] = in.cardinality;
    }
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    Json contexts = Json::array();
    Json tables = Json::object();
    for (std::size_t k = 0; k < sc.contexts().size(); ++k) {
        const auto& ctx = sc.contexts()[k];
        Json labels = Json::array();
        for (auto i : ctx) {
            labels.push_back(sc.label(i));
        }
        contexts.push_back(labels);
        Json table = Json::object();
        for (std::size_t o = 0; o < box.table(k).size(); ++o) {
            table[sc.outcome_string(ctx, o)] = box.entry(k, o).str();
        }
        tables[sc.context_key(ctx)] = table;
    }
    j["contexts"] = contexts;
    j["tables"] = tables;
    return j;
}

/// Box file text: two-space indented JSON with sorted keys and a trailing
/// newline. Canonical input produces byte-identical output.
inline std::string serialize_box(const ProbabilityBox& box)
{
    return to_json(box).dump(2) + "\n";
}

namespace detail {

inline const Json& require(const Json& j, const char* key, Json::value_t type)
{
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(std::string("box file: missing \"") + key + "\"");
    }
    const auto& v = j.at(key);
    if (v.type() != type) {
        throw ParseError(std::string("box file: \"") + key + "\" has the wrong type");
    }
    return v;
}

inline Rational parse_entry(const Json& v, const std::string& where)
{
    if (v.is_string()) {
        try {
            return Rational::parse(v.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    if (v.is_number_integer()) {
        return Rational(v.get<std::int64_t>());
    }
    throw ParseError(where + ": probabilities must be \"p/q\" strings");
}

} // namespace detail

inline ProbabilityBox box_from_json(const Json& j)
{
    using detail::require;
    const auto& parties = require(j, "parties", Json::value_t::array);
    const auto& inputs = require(j, "inputs", Json::value_t::object);
    const auto& outputs = require(j, "outputs", Json::value_t::object);
    const auto& contexts = require(j, "contexts", Json::value_t::array);
    const auto& tables = require(j, "tables", Json::value_t::object);

    std::set<std::string> party_set;
    for (const auto& p : parties) {
        if (!p.is_string() || !party_set.insert(p.get<std::string>()).second) {
            throw ParseError("box file: party labels must be distinct strings");
        }
    }
    std::vector<InputSpec> specs;
    for (const auto& [party, labels] : inputs.items()) {
        if (!party_set.count(party)) {
            throw ParseError("box file: inputs listed for undeclared party \"" + party + "\"");
        }
        if (!labels.is_array() || labels.empty()) {
            throw ParseError("box file: party \"" + party + "\" needs a nonempty input list");
        }
        for (const auto& l : labels) {
            if (!l.is_string()) {
                throw ParseError("box file: input labels must be strings");
            }
            auto label = l.get<std::string>();
            if (!outputs.contains(label) || !outputs.at(label).is_number_integer()) {
                throw ParseError("box file: no output cardinality for input \"" + label + "\"");
            }
            specs.push_back({label, party, outputs.at(label).get<int>()});
        }
    }
    if (inputs.size() != party_set.size()) {
        throw ParseError("box file: every party needs an input list");
    }
    if (outputs.size() != specs.size()) {
        throw ParseError("box file: \"outputs\" names an unknown input label");
    }
    std::vector<std::vector<std::string>> ctx_labels;
    for (const auto& c : contexts) {
        if (!c.is_array()) {
            throw ParseError("box file: each context must be a list of input labels");
        }
        auto& labels = ctx_labels.emplace_back();
        for (const auto& l : c) {
            if (!l.is_string()) {
                throw ParseError("box file: context entries must be input labels");
            }
            labels.push_back(l.get<std::string>());
        }
    }

    Scenario sc(std::move(specs), ctx_labels);
    if (tables.size() != sc.contexts().size()) {
        throw ParseError("box file: expected one table per declared context");
    }
    std::vector<std::vector<Rational>> entries;
    for (const auto& ctx : sc.contexts()) {
        auto key = sc.context_key(ctx);
        if (!tables.contains(key) || !tables.at(key).is_object()) {
            throw ParseError("box file: missing table for context " + key);
        }
        const auto& t = tables.at(key);
        auto n = sc.outcome_count(ctx);
        if (t.size() != n) {
            throw ParseError("box file: context " + key + " needs " + std::to_string(n) + " outcomes");
        }
        auto& row = entries.emplace_back();
        for (std::size_t o = 0; o < n; ++o) {
            auto outcome = sc.outcome_string(ctx, o);
            if (!t.contains(outcome)) {
                throw ParseError("box file: context " + key + " is missing outcome " + outcome);
            }
            row.push_back(detail::parse_entry(t.at(outcome), "context " + key + " outcome " + outcome));
        }
    }
    return ProbabilityBox(std::move(sc), std::move(entries));
}

inline ProbabilityBox parse_box(std::string_view text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("box file is not valid JSON: ") + e.what());
    }
    return box_from_json(j);
}

} // namespace pbox
