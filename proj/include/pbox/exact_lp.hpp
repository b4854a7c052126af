#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "pbox/error.hpp"
#include "pbox/rational.hpp"

namespace pbox {

using Matrix = std::vector<std::vector<Rational>>;

/// Solves the square system A x = b by Gauss-Jordan elimination.
/// Returns nullopt when A is singular.
inline std::optional<std::vector<Rational>> solve_square(Matrix a, std::vector<Rational> b)
{
    const auto n = a.size();
    if (b.size() != n) {
        throw DomainError("solve_square: dimension mismatch");
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col].is_zero()) {
            ++pivot;
        }
        if (pivot == n) {
            return std::nullopt;
        }
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        const Rational inv = 1 / a[col][col];
        for (std::size_t k = col; k < n; ++k) {
            a[col][k] *= inv;
        }
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) {
                continue;
            }
            const Rational f = a[r][col];
            for (std::size_t k = col; k < n; ++k) {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    return b;
}

inline std::size_t matrix_rank(Matrix a)
{
    std::size_t rank = 0;
    const auto rows = a.size();
    const auto cols = rows == 0 ? 0 : a[0].size();
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot][col].is_zero()) {
            ++pivot;
        }
        if (pivot == rows) {
            continue;
        }
        std::swap(a[pivot], a[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (a[r][col].is_zero()) {
                continue;
            }
            const Rational f = a[r][col] / a[rank][col];
            for (std::size_t k = col; k < cols; ++k) {
                a[r][k] -= f * a[rank][k];
            }
        }
        ++rank;
    }
    return rank;
}

/// x >= 0 with A x = b.
struct PrimalSolution {
    std::vector<Rational> x;
};

/// y with y^T A <= 0 componentwise and y^T b > 0, proving that no
/// nonnegative x solves A x = b.
struct FarkasCertificate {
    std::vector<Rational> y;
};

using LpOutcome = std::variant<PrimalSolution, FarkasCertificate>;

/// Decides whether {x >= 0 : A x = b} is empty with an exact phase-1
/// simplex. Bland's rule picks the entering and leaving variables, so the
/// result is deterministic and cycling cannot occur. The Farkas vector is
/// read off the phase-1 duals at termination.
inline LpOutcome find_nonnegative_solution(const Matrix& a, const std::vector<Rational>& b)
{
    const auto m = a.size();
    if (b.size() != m) {
        throw DomainError("find_nonnegative_solution: dimension mismatch");
    }
    const auto n = m == 0 ? 0 : a[0].size();
    for (const auto& row : a) {
        if (row.size() != n) {
            throw DomainError("find_nonnegative_solution: ragged matrix");
        }
    }
    if (m == 0) {
        return PrimalSolution{std::vector<Rational>(n)};
    }

    // Columns: n structural, m artificial, then the right-hand side.
    const auto rhs = n + m;
    std::vector<int> flip(m, 1);
    Matrix t(m, std::vector<Rational>(n + m + 1));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        flip[i] = b[i].sign() < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) {
            t[i][j] = flip[i] < 0 ? -a[i][j] : a[i][j];
        }
        t[i][n + i] = 1;
        t[i][rhs] = flip[i] < 0 ? -b[i] : b[i];
        basis[i] = n + i;
    }

    // Reduced costs for minimizing the sum of artificials; the last slot
    // holds minus the objective value.
    std::vector<Rational> cost(n + m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cost[j] -= t[i][j];
        }
        cost[rhs] -= t[i][rhs];
    }

    for (;;) {
        std::optional<std::size_t> enter;
        for (std::size_t j = 0; j < n + m; ++j) {
            if (cost[j].sign() < 0) {
                enter = j;
                break;
            }
        }
        if (!enter) {
            break;
        }
        const auto col = *enter;
        std::optional<std::size_t> leave;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][col].sign() <= 0) {
                continue;
            }
            Rational ratio = t[i][rhs] / t[i][col];
            if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
                leave = i;
                best = std::move(ratio);
            }
        }
        if (!leave) {
            // Unbounded is impossible: the phase-1 objective is bounded below by 0.
            throw Error("simplex: unbounded phase-1 problem");
        }
        const auto r = *leave;
        const Rational inv = 1 / t[r][col];
        for (auto& v : t[r]) {
            if (!v.is_zero()) {
                v *= inv;
            }
        }
        auto eliminate = [&](std::vector<Rational>& row) {
            if (row[col].is_zero()) {
                return;
            }
            const Rational f = row[col];
            for (std::size_t k = 0; k <= rhs; ++k) {
                if (!t[r][k].is_zero()) {
                    row[k] -= f * t[r][k];
                }
            }
        };
        for (std::size_t i = 0; i < m; ++i) {
            if (i != r) {
                eliminate(t[i]);
            }
        }
        eliminate(cost);
        basis[r] = col;
    }

    if (cost[rhs].is_zero()) {
        std::vector<Rational> x(n);
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < n) {
                x[basis[i]] = t[i][rhs];
            }
        }
        return PrimalSolution{std::move(x)};
    }
    std::vector<Rational> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        Rational u = 1 - cost[n + i];
        y[i] = flip[i] < 0 ? -u : u;
    }
    return FarkasCertificate{std::move(y)};
}

/// True iff x is nonnegative and satisfies A x = b exactly.
inline bool check_primal(const Matrix& a, const std::vector<Rational>& b, const std::vector<Rational>& x)
{
    if (a.size() != b.size()) {
        throw DomainError("check_primal: dimension mismatch");
    }
    for (const auto& v : x) {
        if (v.sign() < 0) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != x.size()) {
            throw DomainError("check_primal: dimension mismatch");
        }
        Rational s;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (!a[i][j].is_zero()) {
                s += a[i][j] * x[j];
            }
        }
        if (s != b[i]) {
            return false;
        }
    }
    return true;
}

/// True iff y^T A <= 0 componentwise and y^T b > 0.
inline bool check_farkas(const Matrix& a, const std::vector<Rational>& b, const std::vector<Rational>& y)
{
    if (y.size() != a.size() || b.size() != a.size()) {
        throw DomainError("check_farkas: dimension mismatch");
    }
    Rational yb;
    for (std::size_t i = 0; i < y.size(); ++i) {
        yb += y[i] * b[i];
    }
    if (yb.sign() <= 0) {
        return false;
    }
    const auto n = a.empty() ? 0 : a[0].size();
    for (std::size_t j = 0; j < n; ++j) {
        Rational s;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (!a[i][j].is_zero() && !y[i].is_zero()) {
                s += y[i] * a[i][j];
            }
        }
        if (s.sign() > 0) {
            return false;
        }
    }
    return true;
}

} // namespace pbox
