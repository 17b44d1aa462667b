#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stochfred/errors.hpp"

namespace stochfred {

// Truncated window of an infinite diagonal matrix, generated by a closed-form
// rule for the entries a_ii (i >= 1). Analytic inf/sup over the full infinite
// diagonal may be supplied alongside the truncation.
struct DiagonalOperator {
    std::vector<double> entries; // a_11 .. a_NN
    std::optional<double> analytic_inf;
    std::optional<double> analytic_sup;

    DiagonalOperator() = default;
    DiagonalOperator(const std::function<double(std::size_t)>& diag_rule, std::size_t n,
                     std::optional<double> inf = std::nullopt,
                     std::optional<double> sup = std::nullopt)
        : analytic_inf(inf), analytic_sup(sup) {
        if (n < 1) fail("dimension-mismatch", "diagonal window needs N >= 1");
        entries.reserve(n);
        double min_abs = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            const double v = diag_rule(i);
            if (!std::isfinite(v)) fail("invalid-entry", "diagonal entry not finite");
            entries.push_back(v);
            min_abs = (i == 1) ? std::abs(v) : std::min(min_abs, std::abs(v));
        }
        // The truncated minimum can only sit above the infimum of the full
        // infinite diagonal.
        if (analytic_inf && !(min_abs >= *analytic_inf - 1e-12))
            fail("invalid-entry", "truncated minimum lies below the declared analytic infimum");
    }

    static DiagonalOperator constant(double c, std::size_t n) {
        return DiagonalOperator([c](std::size_t) { return c; }, n, std::abs(c), std::abs(c));
    }

    std::size_t size() const noexcept { return entries.size(); }
};

struct DiagonalStats {
    double min_abs = 0.0; // m over the truncation
    double max_abs = 0.0; // M over the truncation; exact operator norm
};

inline DiagonalStats diagonal_stats(const DiagonalOperator& d) {
    DiagonalStats s;
    bool first = true;
    for (double v : d.entries) {
        const double a = std::abs(v);
        if (first) {
            s.min_abs = s.max_abs = a;
            first = false;
        } else {
            if (a < s.min_abs) s.min_abs = a;
            if (a > s.max_abs) s.max_abs = a;
        }
    }
    return s;
}

struct CoveringConstantReport {
    double truncated = 0.0;               // min |a_ii| over i <= N
    std::optional<double> analytic;       // inf over the infinite diagonal, when known
};

// Covering constant of a diagonal operator is inf |a_ii|; the truncated
// minimum is nonincreasing in N and only an upper estimate of the limit.
inline CoveringConstantReport diagonal_covering_constant(const DiagonalOperator& d) {
    CoveringConstantReport r;
    r.truncated = diagonal_stats(d).min_abs;
    r.analytic = d.analytic_inf;
    return r;
}

// Result of checking 0 < M_B < m_A <= M_A <= 1 on the truncation.
struct DiagonalConditions {
    double m_a = 0.0;
    double big_m_a = 0.0;
    double m_b = 0.0;
    double big_m_b = 0.0;
    bool passes = false;
    bool zero_b = false; // strictness caveat: 0 < M_B fails but B is harmless
    std::vector<std::string> reasons;
    // Admissible (alpha, lambda) interval (M_B, m_A]; empty when !passes.
    double alpha_low = 0.0;
    double alpha_high = 0.0;
};

inline DiagonalConditions check_conditions_diagonal(const DiagonalOperator& a,
                                                    const DiagonalOperator& b) {
    DiagonalConditions c;
    const auto sa = diagonal_stats(a);
    const auto sb = diagonal_stats(b);
    c.m_a = sa.min_abs;
    c.big_m_a = sa.max_abs;
    c.m_b = sb.min_abs;
    c.big_m_b = sb.max_abs;
    c.zero_b = (c.big_m_b == 0.0);
    c.passes = true;
    if (c.big_m_b == 0.0) c.reasons.push_back("zero-B");
    if (!(c.big_m_b < c.m_a)) {
        c.passes = false;
        c.reasons.push_back("M_B >= m_A");
    }
    if (!(c.big_m_a <= 1.0)) {
        c.passes = false;
        c.reasons.push_back("M_A > 1");
    }
    if (c.passes) {
        c.alpha_low = c.big_m_b;
        c.alpha_high = c.m_a;
    }
    return c;
}

// Componentwise solution sigma_i = omega_i(s) / (a_ii - b_ii) of the diagonal
// system A sigma = B sigma + omega(s). A coincident diagonal entry with zero
// noise takes the minimal-norm representative sigma_i = 0.
inline std::vector<double> solve_stochastic_diagonal(
    const DiagonalOperator& a, const DiagonalOperator& b,
    const std::function<std::vector<double>(double)>& omega, double s) {
    if (a.size() != b.size()) fail("dimension-mismatch", "diagonal windows differ in size");
    const std::vector<double> w = omega(s);
    if (w.size() != a.size()) fail("dimension-mismatch", "noise length differs from window");
    std::vector<double> sigma(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = a.entries[i] - b.entries[i];
        if (denom == 0.0) {
            if (w[i] != 0.0)
                fail("no-solution", "a_ii = b_ii with nonzero noise at index " + std::to_string(i + 1));
            sigma[i] = 0.0;
        } else {
            sigma[i] = w[i] / denom;
        }
    }
    return sigma;
}

} // namespace stochfred
