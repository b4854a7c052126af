#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pbox/exclusivity.hpp"
#include "pbox/marginal.hpp"
#include "pbox/polytope.hpp"
#include "pbox/scenario.hpp"

namespace pbox::gm {

inline void require_valid_c(const Rational& c)
{
    if (c.sign() <= 0 || c > Rational(1, 3)) {
        throw DomainError("GM parameter c = " + c.str() + " outside (0, 1/3]");
    }
}

/// Parties A and B with inputs A1..A3, B1..B3 and all nine cross contexts;
/// with `same_side` the six pairs {Ai, Aj}, {Bi, Bj} are declared as well.
inline Scenario gm_scenario(bool same_side = false)
{
    std::vector<InputSpec> inputs;
    for (const char* party : {"A", "B"}) {
        for (int i = 1; i <= 3; ++i) {
            inputs.push_back({std::string(party) + std::to_string(i), party, 2});
        }
    }
    std::vector<std::vector<std::string>> contexts;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            contexts.push_back({"A" + std::to_string(i), "B" + std::to_string(j)});
        }
    }
    if (same_side) {
        for (const char* party : {"A", "B"}) {
            for (auto [i, j] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 3}}) {
                contexts.push_back({std::string(party) + std::to_string(i), std::string(party) + std::to_string(j)});
            }
        }
    }
    return Scenario(std::move(inputs), contexts);
}

namespace detail {

// Cross-context table for settings (i, j), outcomes 00, 01, 10, 11.
inline std::array<Rational, 4> cross_table(int i, int j, const Rational& c)
{
    if (i == j && i <= 2) {
        return {(1 - c) / 2, 0, 0, (1 + c) / 2};
    }
    return {(1 - 3 * c) / 6, Rational(1, 3), Rational(1, 3), (1 + 3 * c) / 6};
}

inline int setting(const Scenario& sc, InputId in) { return sc.label(in)[1] - '0'; }

inline bool on_side(const Scenario& sc, InputId in, char side) { return sc.label(in)[0] == side; }

} // namespace detail

/// The Garg-Mermin correlation: nine cross-context distributions with
/// identical single marginals P(0) = (1-c)/2. Contexts A1B1 and A2B2 are
/// ((1-c)/2, 0, 0, (1+c)/2); the other seven are ((1-3c)/6, 1/3, 1/3, (1+3c)/6).
struct GMBox {
    Rational c;
    ProbabilityBox box;
};

inline GMBox gm_box(const Rational& c)
{
    require_valid_c(c);
    auto sc = gm_scenario(false);
    std::vector<std::vector<Rational>> tables;
    for (const auto& ctx : sc.contexts()) {
        auto t = detail::cross_table(detail::setting(sc, ctx[0]), detail::setting(sc, ctx[1]), c);
        tables.emplace_back(t.begin(), t.end());
    }
    return {c, ProbabilityBox(std::move(sc), std::move(tables))};
}

enum class Side { A, B };

inline char side_char(Side s) { return s == Side::A ? 'A' : 'B'; }

/// Same-side bi-joints compatible with the GM marginals. With m = (1-c)/2,
/// pair 12 is (alpha, m - alpha, m - alpha, c + alpha), and likewise beta
/// for 23 and gamma for 13. The two off-diagonal entries must agree: both
/// equal m - P(00) because every single marginal equals m, so the three
/// parameters describe every compatible same-side box.
struct GMSideExtension {
    Side side = Side::A;
    Rational alpha, beta, gamma, c;

    GMSideExtension(Side s, Rational a, Rational b, Rational g, Rational c_)
        : side(s), alpha(std::move(a)), beta(std::move(b)), gamma(std::move(g)), c(std::move(c_))
    {
        require_valid_c(c);
        const Rational m = (1 - c) / 2;
        for (const auto* v : {&alpha, &beta, &gamma}) {
            if (v->sign() < 0 || *v > m) {
                throw DomainError("side parameter " + v->str() + " outside [0, (1 - c)/2]");
            }
        }
    }

    /// Table for pair (i, j) in {(1,2), (2,3), (1,3)}.
    std::array<Rational, 4> table(int i, int j) const
    {
        const Rational& p = (i == 1 && j == 2) ? alpha : (i == 2 && j == 3) ? beta : gamma;
        const Rational m = (1 - c) / 2;
        return {p, m - p, m - p, c + p};
    }
};

/// Single-party triangle box of one side's three bi-joints.
inline ProbabilityBox side_box(const GMSideExtension& ext)
{
    const std::string s(1, side_char(ext.side));
    auto sc = triangle_scenario(s, {s + "1", s + "2", s + "3"});
    std::vector<std::vector<Rational>> tables;
    for (const auto& ctx : sc.contexts()) {
        auto t = ext.table(static_cast<int>(ctx[0]) + 1, static_cast<int>(ctx[1]) + 1);
        tables.emplace_back(t.begin(), t.end());
    }
    return ProbabilityBox(std::move(sc), std::move(tables));
}

/// GM(c) together with same-side bi-joints on both parties.
inline ProbabilityBox gm_box_with_sides(const GMSideExtension& a, const GMSideExtension& b)
{
    if (a.side != Side::A || b.side != Side::B || a.c != b.c) {
        throw DomainError("side extensions must be for A and B at the same c");
    }
    const auto& c = a.c;
    auto sc = gm_scenario(true);
    std::vector<std::vector<Rational>> tables;
    for (const auto& ctx : sc.contexts()) {
        int i = detail::setting(sc, ctx[0]);
        int j = detail::setting(sc, ctx[1]);
        std::array<Rational, 4> t;
        if (!detail::on_side(sc, ctx[0], 'A') || !detail::on_side(sc, ctx[1], 'A')) {
            t = detail::on_side(sc, ctx[0], 'B') ? b.table(i, j) : detail::cross_table(i, j, c);
        } else {
            t = a.table(i, j);
        }
        tables.emplace_back(t.begin(), t.end());
    }
    return ProbabilityBox(std::move(sc), std::move(tables));
}

// ---------------------------------------------------------------------------
// Exclusive sets and bounds
// ---------------------------------------------------------------------------

/// constant + coefficients . (alpha, beta, gamma) for Alice's side parameters.
struct SideForm {
    Rational constant;
    std::array<Rational, 3> coefficients{};

    Rational evaluate(const Rational& alpha, const Rational& beta, const Rational& gamma) const
    {
        return constant + coefficients[0] * alpha + coefficients[1] * beta + coefficients[2] * gamma;
    }

    friend SideForm operator+(SideForm x, const SideForm& y)
    {
        x.constant += y.constant;
        for (std::size_t k = 0; k < 3; ++k) {
            x.coefficients[k] += y.coefficients[k];
        }
        return x;
    }

    friend bool operator==(const SideForm&, const SideForm&) = default;

    std::string str() const
    {
        static constexpr const char* names[] = {"alpha", "beta", "gamma"};
        std::string s = constant.is_zero() ? "" : constant.str();
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& a = coefficients[k];
            if (a.is_zero()) {
                continue;
            }
            if (s.empty()) {
                s = a.sign() < 0 ? "-" : "";
            } else {
                s += (a.sign() < 0 ? " - " : " + ");
            }
            s += (abs(a) == 1 ? "" : abs(a).str() + "*") + names[k];
        }
        return s.empty() ? "0" : s;
    }
};

/// Probability of an event of gm_scenario(true) as a function of Alice's
/// side parameters. Cross and single-input events are constants; pairs on
/// Alice's side follow the side-extension table. Bob-side pairs throw.
inline SideForm symbolic_probability(const Event& e, const Rational& c)
{
    require_valid_c(c);
    auto sc = gm_scenario(true);
    const auto& a = e.assignment();
    const Rational m = (1 - c) / 2;
    SideForm f;
    if (a.size() == 1) {
        f.constant = a[0].second == 0 ? m : 1 - m;
        return f;
    }
    if (a.size() != 2) {
        throw DomainError("symbolic_probability expects one- or two-input events");
    }
    auto [x, ox] = a[0];
    auto [y, oy] = a[1];
    int i = detail::setting(sc, x);
    int j = detail::setting(sc, y);
    bool xa = detail::on_side(sc, x, 'A');
    bool ya = detail::on_side(sc, y, 'A');
    if (xa != ya) {
        f.constant = detail::cross_table(i, j, c)[static_cast<std::size_t>(2 * ox + oy)];
        return f;
    }
    if (!xa) {
        throw DomainError("symbolic_probability covers Alice's side parameters only");
    }
    std::size_t slot = (i == 1 && j == 2) ? 0 : (i == 2 && j == 3) ? 1 : 2;
    if (ox == 0 && oy == 0) {
        f.coefficients[slot] = 1;
    } else if (ox == 1 && oy == 1) {
        f.constant = c;
        f.coefficients[slot] = 1;
    } else {
        f.constant = m;
        f.coefficients[slot] = -1;
    }
    return f;
}

struct ExclusiveSet {
    std::string name;
    std::vector<Event> events; // on gm_scenario(true)
    std::vector<SideForm> probabilities;
    SideForm total;
};

/// The four pairwise-exclusive triples
///   S1 = {(11|A1,B1), (10|A2,B1), (00|A1,A2)}
///   S2 = {(11|A2,B2), (10|A3,B2), (00|A2,A3)}
///   S3 = {(11|A1,B1), (10|A3,B1), (00|A1,A3)}
///   S4 = {(01|A1,A2), (01|A2,A3), (10|A1,A3)}
/// with their probabilities as functions of (alpha, beta, gamma).
inline std::array<ExclusiveSet, 4> exclusive_sets(const Rational& c)
{
    require_valid_c(c);
    auto sc = gm_scenario(true);
    const std::array<std::array<const char*, 3>, 4> literals = {{
        {"(11|A1,B1)", "(10|A2,B1)", "(00|A1,A2)"},
        {"(11|A2,B2)", "(10|A3,B2)", "(00|A2,A3)"},
        {"(11|A1,B1)", "(10|A3,B1)", "(00|A1,A3)"},
        {"(01|A1,A2)", "(01|A2,A3)", "(10|A1,A3)"},
    }};
    std::array<ExclusiveSet, 4> sets;
    for (std::size_t s = 0; s < 4; ++s) {
        sets[s].name = "S" + std::to_string(s + 1);
        for (const char* lit : literals[s]) {
            auto e = Event::parse(sc, lit);
            for (const auto& prev : sets[s].events) {
                if (!exclusive(prev, e)) {
                    throw Error(sets[s].name + " is not pairwise exclusive");
                }
            }
            sets[s].probabilities.push_back(symbolic_probability(e, c));
            sets[s].total = sets[s].total + sets[s].probabilities.back();
            sets[s].events.push_back(std::move(e));
        }
    }
    return sets;
}

struct UpperBound {
    std::size_t parameter = 0; // 0 alpha, 1 beta, 2 gamma
    Rational value;
    std::string witness;
};

struct LowerBound {
    Rational value; // on alpha + beta + gamma
    std::string witness;
};

struct Bounds {
    std::array<UpperBound, 3> upper;
    LowerBound lower;
};

/// Applies "total <= 1" to each exclusive set. A total of the form
/// k + parameter gives parameter <= 1 - k; a total k - (alpha + beta + gamma)
/// gives alpha + beta + gamma >= k - 1.
inline Bounds derive_bounds(const std::array<ExclusiveSet, 4>& sets)
{
    Bounds b;
    std::array<bool, 3> have_upper{};
    bool have_lower = false;
    for (const auto& s : sets) {
        const auto& co = s.total.coefficients;
        int plus = 0;
        int minus = 0;
        std::size_t slot = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            if (co[k] == 1) {
                ++plus;
                slot = k;
            } else if (co[k] == -1) {
                ++minus;
            } else if (!co[k].is_zero()) {
                throw Error(s.name + ": unexpected coefficient " + co[k].str());
            }
        }
        if (plus == 1 && minus == 0) {
            b.upper[slot] = {slot, 1 - s.total.constant, s.name};
            have_upper[slot] = true;
        } else if (minus == 3) {
            b.lower = {s.total.constant - 1, s.name};
            have_lower = true;
        } else {
            throw Error(s.name + ": total " + s.total.str() + " yields no bound");
        }
    }
    if (!have_lower || !have_upper[0] || !have_upper[1] || !have_upper[2]) {
        throw Error("exclusive sets do not bound every side parameter");
    }
    return b;
}

inline Bounds derive_bounds(const Rational& c) { return derive_bounds(exclusive_sets(c)); }

/// The unique (alpha, beta, gamma) allowed by the bounds, when the upper
/// bounds add up to exactly the lower bound.
inline std::optional<std::array<Rational, 3>> forced_point(const Bounds& b)
{
    Rational sum = b.upper[0].value + b.upper[1].value + b.upper[2].value;
    if (sum != b.lower.value) {
        return std::nullopt;
    }
    return std::array<Rational, 3>{b.upper[0].value, b.upper[1].value, b.upper[2].value};
}

// ---------------------------------------------------------------------------
// Unphysicality certificate
// ---------------------------------------------------------------------------

/// Self-contained evidence that GM(c) has no physical realization:
/// exclusivity bounds force the side parameters to one point, at that point
/// the side bi-joints admit tri-joints (closed form plus explicit joint
/// witnesses), and yet GM(c) admits no joint over all six inputs (Farkas
/// witness). Together these contradict the requirement that a same-side
/// tri-joint cannot coexist with GM(c).
struct UnphysicalityCertificate {
    Rational c;
    std::array<ExclusiveSet, 4> sets;
    Bounds bounds;
    std::array<Rational, 3> forced{};
    FineConditions fine;
    std::array<ExtensionProblem, 2> tri_joint_problems; // sides A, B
    std::array<FeasibilityResult, 2> tri_joints;
    ExtensionProblem lhv_problem;
    FeasibilityResult lhv;
};

inline UnphysicalityCertificate certify_unphysicality(const Rational& c)
{
    require_valid_c(c);
    UnphysicalityCertificate cert;
    cert.c = c;
    cert.sets = exclusive_sets(c);
    cert.bounds = derive_bounds(cert.sets);
    auto point = forced_point(cert.bounds);
    if (!point) {
        throw Error("exclusivity bounds do not force a unique point at c = " + c.str());
    }
    cert.forced = *point;
    const auto& [alpha, beta, gamma] = cert.forced;
    cert.fine = fine_tri_joint_conditions(alpha, beta, gamma, c);
    for (Side s : {Side::A, Side::B}) {
        auto i = static_cast<std::size_t>(s == Side::B);
        cert.tri_joint_problems[i] = build_extension_problem(side_box(GMSideExtension(s, alpha, beta, gamma, c)));
        cert.tri_joints[i] = joint_extension_feasibility(cert.tri_joint_problems[i]);
    }
    cert.lhv_problem = build_extension_problem(gm_box(c).box);
    cert.lhv = joint_extension_feasibility(cert.lhv_problem);
    return cert;
}

/// Outcome of re-checking every piece of a certificate.
struct CertificateAudit {
    bool sets_exclusive = false;
    bool totals_match = false;
    bool bounds_match = false;
    bool forced_unique = false;
    bool fine_satisfied = false;
    bool tri_joints_valid = false;
    bool lhv_refuted = false;

    bool ok() const
    {
        return sets_exclusive && totals_match && bounds_match && forced_unique && fine_satisfied &&
               tri_joints_valid && lhv_refuted;
    }
};

/// Audits a certificate without trusting its intermediate data: the
/// symbolic totals are re-evaluated against numeric boxes, the problems
/// are rebuilt from GM(c), and witnesses go through verify_certificate.
inline CertificateAudit audit_certificate(const UnphysicalityCertificate& cert)
{
    CertificateAudit audit;
    const auto& c = cert.c;
    require_valid_c(c);
    const Rational m = (1 - c) / 2;

    audit.sets_exclusive = true;
    for (const auto& s : cert.sets) {
        for (std::size_t a = 0; a < s.events.size(); ++a) {
            for (std::size_t b = a + 1; b < s.events.size(); ++b) {
                audit.sets_exclusive = audit.sets_exclusive && exclusive(s.events[a], s.events[b]);
            }
        }
    }

    // An affine form in three variables is pinned down by four affinely
    // independent points.
    const std::array<std::array<Rational, 3>, 4> probes = {{{0, 0, 0}, {m, 0, 0}, {0, m, 0}, {0, 0, m}}};
    audit.totals_match = true;
    for (const auto& p : probes) {
        auto box = gm_box_with_sides(GMSideExtension(Side::A, p[0], p[1], p[2], c),
                                     GMSideExtension(Side::B, p[0], p[1], p[2], c));
        for (const auto& s : cert.sets) {
            Rational numeric;
            for (const auto& e : s.events) {
                numeric += event_probability(box, e);
            }
            audit.totals_match = audit.totals_match && numeric == s.total.evaluate(p[0], p[1], p[2]);
        }
    }

    try {
        auto rederived = derive_bounds(cert.sets);
        audit.bounds_match = true;
        for (std::size_t k = 0; k < 3; ++k) {
            audit.bounds_match = audit.bounds_match && rederived.upper[k].value == cert.bounds.upper[k].value;
        }
        audit.bounds_match = audit.bounds_match && rederived.lower.value == cert.bounds.lower.value;
    } catch (const Error&) {
        audit.bounds_match = false;
    }

    auto point = forced_point(cert.bounds);
    audit.forced_unique = point && *point == cert.forced;

    const auto& [alpha, beta, gamma] = cert.forced;
    audit.fine_satisfied = fine_tri_joint_conditions(alpha, beta, gamma, c).all();

    audit.tri_joints_valid = true;
    for (Side s : {Side::A, Side::B}) {
        auto i = static_cast<std::size_t>(s == Side::B);
        auto prob = build_extension_problem(side_box(GMSideExtension(s, alpha, beta, gamma, c)));
        audit.tri_joints_valid = audit.tri_joints_valid && is_feasible(cert.tri_joints[i]) &&
                                 verify_certificate(cert.tri_joints[i], prob);
    }

    auto lhv = build_extension_problem(gm_box(c).box);
    audit.lhv_refuted = !is_feasible(cert.lhv) && verify_certificate(cert.lhv, lhv);
    return audit;
}

} // namespace pbox::gm
