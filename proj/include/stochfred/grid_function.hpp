#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "stochfred/errors.hpp"
#include "stochfred/quadrature.hpp"

namespace stochfred {

// A square-integrable function represented by its values at the quadrature
// nodes of a shared grid. Immutable by convention: operations return fresh
// values and never mutate their inputs.
struct GridFunction {
    GridPtr grid;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
        if (!grid) fail("grid-mismatch", "GridFunction requires a grid");
        if (values.size() != grid->size())
            fail("grid-mismatch", "value count does not match node count");
        for (double x : values)
            if (!std::isfinite(x)) fail("non-finite-value", "grid values must be finite");
    }

    static GridFunction zero(const GridPtr& g) {
        return GridFunction(g, std::vector<double>(g->size(), 0.0));
    }

    static GridFunction sample(const GridPtr& g, const std::function<double(double)>& f) {
        std::vector<double> v(g->size());
        for (std::size_t i = 0; i < g->size(); ++i) v[i] = f(g->nodes[i]);
        return GridFunction(g, std::move(v));
    }

    std::size_t size() const noexcept { return values.size(); }
};

namespace detail {
inline void require_shared_grid(const GridFunction& f, const GridFunction& g) {
    if (!f.grid || !g.grid || !same_grid(*f.grid, *g.grid))
        fail("grid-mismatch", "functions live on different grids");
}
} // namespace detail

inline double inner_product(const GridFunction& f, const GridFunction& g) {
    detail::require_shared_grid(f, g);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        acc += f.grid->weights[i] * f.values[i] * g.values[i];
    return acc;
}

inline double l2_norm(const GridFunction& f) {
    return std::sqrt(inner_product(f, f));
}

// Quadrature of f over its interval.
inline double integrate(const GridFunction& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        acc += f.grid->weights[i] * f.values[i];
    return acc;
}

inline GridFunction operator+(const GridFunction& f, const GridFunction& g) {
    detail::require_shared_grid(f, g);
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = f.values[i] + g.values[i];
    return GridFunction(f.grid, std::move(v));
}

inline GridFunction operator-(const GridFunction& f, const GridFunction& g) {
    detail::require_shared_grid(f, g);
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = f.values[i] - g.values[i];
    return GridFunction(f.grid, std::move(v));
}

inline GridFunction operator*(double c, const GridFunction& f) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = c * f.values[i];
    return GridFunction(f.grid, std::move(v));
}

inline GridFunction operator*(const GridFunction& f, double c) { return c * f; }

} // namespace stochfred
