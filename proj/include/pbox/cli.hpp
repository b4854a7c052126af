#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pbox/exclusivity.hpp"
#include "pbox/gm.hpp"
#include "pbox/marginal.hpp"
#include "pbox/polytope.hpp"
#include "pbox/report.hpp"
#include "pbox/serialize.hpp"

namespace pbox::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_violated = 2;

inline ProbabilityBox load_box(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_box(text);
}

namespace detail {

using report::Report;
using report::Verdict;

inline Report check_nd(const ProbabilityBox& box)
{
    Report r;
    auto nd = check_no_disturbance(box);
    for (const auto& v : nd.violations) {
        r.certificates.push_back(report::nd_violation(box.scenario(), v));
    }
    r.verdict = nd.pass() ? Verdict::pass : Verdict::fail;
    return r;
}

inline Report exclusivity(const ExclusivityReport& er)
{
    Report r;
    for (const auto& c : er.violations) {
        r.certificates.push_back(report::e1_certificate(er.box, c));
    }
    r.verdict = er.pass() ? Verdict::pass : Verdict::fail;
    return r;
}

inline std::vector<InputId> extension_variables(const Scenario& sc, const std::string& which)
{
    if (which == "all") {
        std::vector<InputId> all(sc.input_count());
        for (std::size_t i = 0; i < all.size(); ++i) {
            all[i] = i;
        }
        return all;
    }
    const std::size_t side = which == "sideA" ? 0 : 1;
    if (side >= sc.parties().size()) {
        throw DomainError("box has no party for " + which);
    }
    return sc.party_inputs(sc.parties()[side]);
}

inline Report extend(const ProbabilityBox& box, const std::string& which)
{
    Report r;
    auto prob = build_extension_problem(box, extension_variables(box.scenario(), which));
    auto result = joint_extension_feasibility(prob);
    r.certificates.push_back(report::extension(prob, result));
    r.verdict = is_feasible(result) ? Verdict::pass : Verdict::fail;
    return r;
}

inline Report ch(const ProbabilityBox& box)
{
    Report r;
    std::optional<Rational> best;
    std::size_t best_at = 0;
    bool all_within = true;
    for (const auto& s : all_ch_settings(box)) {
        for (const auto& v : ch_values(box, s)) {
            if (!best || v.value > *best) {
                best = v.value;
                best_at = r.certificates.size();
            }
            all_within = all_within && v.within_bounds();
            r.certificates.push_back(report::ch_value(s, v));
        }
    }
    if (best) {
        r.certificates[best_at]["maximum"] = true;
        r.value = best->str();
    }
    r.verdict = all_within ? Verdict::pass : Verdict::fail;
    return r;
}

inline Report vertices()
{
    Report r;
    for (const auto& v : enumerate_vertices()) {
        r.certificates.push_back(report::vertex(v));
    }
    r.verdict = Verdict::value;
    r.value = r.certificates.size();
    return r;
}

inline Report certify_gm(const std::vector<Rational>& cs)
{
    Report r;
    bool all_ok = true;
    for (const auto& c : cs) {
        auto cert = gm::certify_unphysicality(c);
        auto audit = gm::audit_certificate(cert);
        all_ok = all_ok && audit.ok();
        r.certificates.push_back(report::gm_certificate(cert, audit));
    }
    r.verdict = all_ok ? Verdict::pass : Verdict::fail;
    return r;
}

inline Report noise(const std::string& label)
{
    Report r;
    const auto& box = catalog_box(label);
    auto p = noise_threshold(box);
    r.verdict = Verdict::value;
    r.value = p.str();
    // The violation just above the threshold, as evidence the value is tight.
    auto above = blend(p + Rational(1, 1000), box, uniform_box(box.scenario()));
    for (const auto& c : e1_check(above).violations) {
        auto j = report::e1_certificate(above, c);
        j["mixing_weight"] = (p + Rational(1, 1000)).str();
        r.certificates.push_back(std::move(j));
    }
    return r;
}

} // namespace detail

/// Runs one subcommand. `args` excludes the program name. The report goes
/// to `out`, diagnostics and a one-line summary to `err`.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact analysis of probability boxes"};
    app.name("pbox");
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));

    std::string file;
    int copies = 1;
    std::string vars = "all";
    std::string c_text;
    int grid = 0;
    std::string vertex_label;

    auto* nd = app.add_subcommand("check-nd", "No-disturbance check");
    nd->add_option("file", file, "Box file")->required();
    auto* e1 = app.add_subcommand("check-e1", "Single-copy exclusivity check");
    e1->add_option("file", file, "Box file")->required();
    auto* lo = app.add_subcommand("check-lo", "Exclusivity on k copies");
    lo->add_option("file", file, "Box file")->required();
    lo->add_option("--copies", copies, "Number of copies (1 or 2)")->required()->check(CLI::Range(1, 2));
    auto* vt = app.add_subcommand("vertices", "Vertices of the three-input no-disturbance polytope");
    auto* ex = app.add_subcommand("extend", "Joint-extension feasibility");
    ex->add_option("file", file, "Box file")->required();
    ex->add_option("--vars", vars, "Variable set")->check(CLI::IsMember({"all", "sideA", "sideB"}));
    auto* chc = app.add_subcommand("ch", "All CH expressions of a bipartite box");
    chc->add_option("file", file, "Box file")->required();
    auto* g = app.add_subcommand("gm", "Emit the GM box file");
    g->add_option("--c", c_text, "Parameter p/q in (0, 1/3]")->required();
    auto* cg = app.add_subcommand("certify-gm", "Certify that GM(c) is unphysical");
    auto* c_opt = cg->add_option("--c", c_text, "Parameter p/q in (0, 1/3]");
    auto* grid_opt = cg->add_option("--grid", grid, "Run c = k/(3n) for k = 1..n")->check(CLI::Range(1, 1000));
    c_opt->excludes(grid_opt);
    cg->require_option(1);
    auto* nt = app.add_subcommand("noise-threshold", "White-noise threshold of an indeterministic vertex");
    nt->add_option("--vertex", vertex_label, "I1, I2, I3 or I4")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "pbox: " << e.what() << "\n";
        return exit_usage;
    }

    const auto start = std::chrono::steady_clock::now();
    report::Report r;
    try {
        if (nd->parsed()) {
            r = detail::check_nd(load_box(file));
            r.command = "check-nd";
            r.inputs = {{"file", file}};
        } else if (e1->parsed()) {
            r = detail::exclusivity(e1_check(load_box(file)));
            r.command = "check-e1";
            r.inputs = {{"file", file}};
        } else if (lo->parsed()) {
            r = detail::exclusivity(lo_k_check(load_box(file), copies));
            r.command = "check-lo";
            r.inputs = {{"file", file}, {"copies", copies}};
        } else if (vt->parsed()) {
            r = detail::vertices();
            r.command = "vertices";
        } else if (ex->parsed()) {
            r = detail::extend(load_box(file), vars);
            r.command = "extend";
            r.inputs = {{"file", file}, {"vars", vars}};
        } else if (chc->parsed()) {
            r = detail::ch(load_box(file));
            r.command = "ch";
            r.inputs = {{"file", file}};
        } else if (g->parsed()) {
            // The box file itself, so the output can be saved and re-read.
            auto box = gm::gm_box(Rational::parse(c_text)).box;
            out << serialize_box(box);
            err << "gm: c = " << Rational::parse(c_text) << "\n";
            return exit_ok;
        } else if (cg->parsed()) {
            std::vector<Rational> cs;
            if (grid > 0) {
                for (int k = 1; k <= grid; ++k) {
                    cs.emplace_back(k, 3 * grid);
                }
            } else {
                cs.push_back(Rational::parse(c_text));
            }
            r = detail::certify_gm(cs);
            r.command = "certify-gm";
            r.inputs = grid > 0 ? Json{{"grid", grid}} : Json{{"c", cs.front().str()}};
        } else if (nt->parsed()) {
            r = detail::noise(vertex_label);
            r.command = "noise-threshold";
            r.inputs = {{"vertex", vertex_label}};
        }
    } catch (const Error& e) {
        err << "pbox: " << e.what() << "\n";
        return exit_usage;
    } catch (const Json::exception& e) {
        err << "pbox: " << e.what() << "\n";
        return exit_usage;
    }
    r.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();

    if (format == "text") {
        out << r.text();
    } else {
        out << r.to_json().dump(2) << "\n";
    }
    err << r.command << ": " << report::verdict_name(r.verdict);
    if (!r.value.is_null()) {
        err << " " << (r.value.is_string() ? r.value.get<std::string>() : r.value.dump());
    }
    err << " (" << r.certificates.size() << " certificate" << (r.certificates.size() == 1 ? "" : "s") << ")\n";
    return r.verdict == report::Verdict::fail ? exit_violated : exit_ok;
}

} // namespace pbox::cli
