#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "pbox/exclusivity.hpp"
#include "pbox/gm.hpp"
#include "pbox/marginal.hpp"
#include "pbox/polytope.hpp"
#include "pbox/serialize.hpp"

namespace pbox::report {

enum class Verdict { pass, fail, value };

inline const char* verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "value";
    }
}

/// Structured result of one command. Keys of the rendered JSON are sorted,
/// so the same inputs always give the same bytes apart from timing_ms.
struct Report {
    std::string command;
    Json inputs = Json::object();
    Verdict verdict = Verdict::pass;
    Json value; // null unless the verdict is a value
    Json certificates = Json::array();
    std::int64_t timing_ms = 0;

    Json to_json() const
    {
        Json j{{"command", command},
               {"inputs", inputs},
               {"verdict", verdict_name(verdict)},
               {"certificates", certificates},
               {"timing_ms", timing_ms}};
        if (!value.is_null()) {
            j["value"] = value;
        }
        return j;
    }

    std::string text() const
    {
        std::ostringstream s;
        s << "command: " << command << "\n";
        for (const auto& [k, v] : inputs.items()) {
            s << "input " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
        s << "verdict: " << verdict_name(verdict) << "\n";
        if (!value.is_null()) {
            s << "value: " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
        }
        s << "certificates: " << certificates.size() << "\n";
        for (const auto& c : certificates) {
            s << "  " << c.dump() << "\n";
        }
        s << "timing_ms: " << timing_ms << "\n";
        return s.str();
    }
};

inline Json rational(const Rational& r) { return r.str(); }

inline Json rationals(const std::vector<Rational>& rs)
{
    Json a = Json::array();
    for (const auto& r : rs) {
        a.push_back(r.str());
    }
    return a;
}

inline Json nd_violation(const Scenario& sc, const NdViolation& v)
{
    return {{"event", v.event.str(sc)},
            {"context_a", sc.context_key(sc.contexts()[v.context_a])},
            {"context_b", sc.context_key(sc.contexts()[v.context_b])},
            {"value_a", v.value_a.str()},
            {"value_b", v.value_b.str()}};
}

inline Json e1_certificate(const ProbabilityBox& box, const E1ViolationCertificate& c)
{
    Json events = Json::array();
    for (const auto& e : c.events) {
        events.push_back(e.str(box.scenario()));
    }
    return {{"events", events},
            {"probabilities", rationals(c.probabilities)},
            {"total", c.total.str()},
            {"verified", verify_violation(box, c)}};
}

inline Json parameterization(const NDParameterization& p)
{
    Json j = Json::object();
    auto values = p.values();
    for (std::size_t k = 0; k < values.size(); ++k) {
        j[NDParameterization::names[k]] = values[k].str();
    }
    return j;
}

inline Json vertex(const Vertex& v)
{
    return {{"label", catalog_label(v.params)},
            {"deterministic", v.deterministic},
            {"parameters", parameterization(v.params)},
            {"box", to_json(from_parameterization(v.params))}};
}

/// Atoms of positive probability as output strings over `variables`.
inline Json joint_witness(const ExtensionProblem& prob, const JointWitness& w)
{
    Json atoms = Json::array();
    for (std::size_t a = 0; a < prob.atoms.size(); ++a) {
        if (w.atom_probabilities[a].is_zero()) {
            continue;
        }
        std::string outs;
        for (int o : prob.atoms[a]) {
            outs += static_cast<char>('0' + o);
        }
        atoms.push_back({{"outputs", outs}, {"probability", w.atom_probabilities[a].str()}});
    }
    return atoms;
}

/// Nonzero Farkas multipliers, one per constrained event.
inline Json farkas(const ExtensionProblem& prob, const FarkasCertificate& f)
{
    Json rows = Json::array();
    for (std::size_t r = 0; r < f.y.size(); ++r) {
        if (f.y[r].is_zero()) {
            continue;
        }
        rows.push_back({{"event", prob.row_events[r].str(prob.scenario)},
                        {"context", prob.scenario.context_key(prob.scenario.contexts()[prob.row_contexts[r]])},
                        {"multiplier", f.y[r].str()}});
    }
    return rows;
}

inline Json variables(const ExtensionProblem& prob)
{
    Json vars = Json::array();
    for (auto v : prob.variables) {
        vars.push_back(prob.scenario.label(v));
    }
    return vars;
}

inline Json extension(const ExtensionProblem& prob, const FeasibilityResult& r)
{
    Json j{{"variables", variables(prob)}, {"verified", verify_certificate(r, prob)}};
    if (const auto* w = std::get_if<JointWitness>(&r)) {
        j["kind"] = "joint";
        j["atoms"] = joint_witness(prob, *w);
    } else {
        j["kind"] = "farkas";
        j["rows"] = farkas(prob, std::get<FarkasCertificate>(r));
    }
    return j;
}

inline Json ch_value(const ChSettings& s, const ChValue& v)
{
    return {{"settings", {s.i, s.i2, s.j, s.j2}},
            {"expression", v.expression},
            {"value", v.value.str()},
            {"within_bounds", v.within_bounds()}};
}

inline Json gm_certificate(const gm::UnphysicalityCertificate& cert, const gm::CertificateAudit& audit)
{
    static constexpr const char* params[] = {"alpha", "beta", "gamma"};
    const auto sc = gm::gm_scenario(true);
    Json sets = Json::array();
    for (const auto& s : cert.sets) {
        Json events = Json::array();
        Json probs = Json::array();
        for (std::size_t k = 0; k < s.events.size(); ++k) {
            events.push_back(s.events[k].str(sc));
            probs.push_back(s.probabilities[k].str());
        }
        sets.push_back({{"name", s.name}, {"events", events}, {"probabilities", probs}, {"total", s.total.str()}});
    }
    Json upper = Json::array();
    for (const auto& u : cert.bounds.upper) {
        upper.push_back({{"parameter", params[u.parameter]}, {"at_most", u.value.str()}, {"witness", u.witness}});
    }
    Json fine = Json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        fine.push_back({{"condition", FineConditions::labels[k]},
                        {"satisfied", cert.fine.satisfied[k]},
                        {"slack", cert.fine.slack[k].str()}});
    }
    Json tri = Json::array();
    for (std::size_t k = 0; k < 2; ++k) {
        Json t = extension(cert.tri_joint_problems[k], cert.tri_joints[k]);
        t["side"] = k == 0 ? "A" : "B";
        tri.push_back(std::move(t));
    }
    return {{"c", cert.c.str()},
            {"exclusive_sets", sets},
            {"upper_bounds", upper},
            {"lower_bound",
             {{"expression", "alpha + beta + gamma"}, {"at_least", cert.bounds.lower.value.str()},
              {"witness", cert.bounds.lower.witness}}},
            {"forced_point", {cert.forced[0].str(), cert.forced[1].str(), cert.forced[2].str()}},
            {"fine_check", fine},
            {"tri_joints", tri},
            {"lhv", extension(cert.lhv_problem, cert.lhv)},
            {"audit",
             {{"sets_exclusive", audit.sets_exclusive},
              {"totals_match", audit.totals_match},
              {"bounds_match", audit.bounds_match},
              {"forced_unique", audit.forced_unique},
              {"fine_satisfied", audit.fine_satisfied},
              {"tri_joints_valid", audit.tri_joints_valid},
              {"lhv_refuted", audit.lhv_refuted}}},
            {"verified", audit.ok()}};
}

} // namespace pbox::report
