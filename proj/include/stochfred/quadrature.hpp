#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "stochfred/errors.hpp"

namespace stochfred {

// Composite quadrature grid on [a_end, b_end]: strictly increasing nodes with
// positive weights summing to the interval length. Gauss-Legendre panels keep
// nodes interior, so panel junctions never produce duplicate nodes.
struct QuadGrid {
    double a_end = 0.0;
    double b_end = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t panels = 0;
    std::size_t points_per_panel = 0;

    std::size_t size() const noexcept { return nodes.size(); }

    // A composite rule with m points per panel integrates polynomials of
    // degree <= 2m-1 exactly on each panel.
    std::size_t exactness_degree() const noexcept { return 2 * points_per_panel - 1; }
};

using GridPtr = std::shared_ptr<const QuadGrid>;

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre_reference(std::size_t n,
                                     std::vector<double>& x,
                                     std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double pi = 3.14159265358979323846;
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double t = std::cos(pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 64; ++iter) {
            double p0 = 1.0;
            double p1 = t;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            // For n = 1, p1 = t and dp = 1.
            dp = (n == 1) ? 1.0 : n * (t * p1 - p0) / (t * t - 1.0);
            const double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if (n == 1) {
        x[0] = 0.0;
        w[0] = 2.0;
    }
}

inline std::size_t parse_rule_order(const std::string& rule) {
    const std::string prefix = "gauss-legendre-";
    if (rule.rfind(prefix, 0) != 0)
        fail("unknown-rule", "unsupported quadrature rule '" + rule + "'");
    const std::string tail = rule.substr(prefix.size());
    if (tail.empty()) fail("unknown-rule", "missing order in rule '" + rule + "'");
    std::size_t order = 0;
    for (char c : tail) {
        if (c < '0' || c > '9')
            fail("unknown-rule", "bad order in rule '" + rule + "'");
        order = order * 10 + static_cast<std::size_t>(c - '0');
    }
    if (order == 0 || order > 512)
        fail("unknown-rule", "order out of range in rule '" + rule + "'");
    return order;
}

} // namespace detail

inline GridPtr make_grid(double a_end, double b_end, std::size_t panels,
                         const std::string& rule = "gauss-legendre-8") {
    if (!(a_end < b_end))
        fail("invalid-interval", "require a_end < b_end");
    if (panels < 1)
        fail("invalid-interval", "require panels >= 1");

    const std::size_t order = detail::parse_rule_order(rule);
    std::vector<double> xref, wref;
    detail::gauss_legendre_reference(order, xref, wref);

    auto grid = std::make_shared<QuadGrid>();
    grid->a_end = a_end;
    grid->b_end = b_end;
    grid->panels = panels;
    grid->points_per_panel = order;
    grid->nodes.reserve(panels * order);
    grid->weights.reserve(panels * order);

    const double width = (b_end - a_end) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double pa = a_end + width * static_cast<double>(p);
        for (std::size_t i = 0; i < order; ++i) {
            grid->nodes.push_back(pa + 0.5 * width * (xref[i] + 1.0));
            grid->weights.push_back(0.5 * width * wref[i]);
        }
    }
    return grid;
}

// Structural comparison; grids are shared by pointer in the common case.
inline bool same_grid(const QuadGrid& a, const QuadGrid& b) {
    if (&a == &b) return true;
    return a.a_end == b.a_end && a.b_end == b.b_end && a.nodes == b.nodes &&
           a.weights == b.weights;
}

} // namespace stochfred
