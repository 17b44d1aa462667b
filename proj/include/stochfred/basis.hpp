#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "stochfred/errors.hpp"
#include "stochfred/grid_function.hpp"
#include "stochfred/quadrature.hpp"

namespace stochfred {

// Truncated coefficient sequence with respect to an orthonormal basis, plus a
// bound on the l2 mass of the omitted tail.
struct CoeffFunction {
    std::vector<double> coeffs;
    double tail_bound = 0.0;

    CoeffFunction() = default;
    explicit CoeffFunction(std::vector<double> c, double tail = 0.0)
        : coeffs(std::move(c)), tail_bound(tail) {
        if (tail_bound < 0.0) fail("invalid-tail", "tail_bound must be nonnegative");
        for (double x : coeffs)
            if (!std::isfinite(x)) fail("non-finite-value", "coefficients must be finite");
    }

    std::size_t size() const noexcept { return coeffs.size(); }
};

inline double l2_norm(const CoeffFunction& f) {
    double acc = 0.0;
    for (double c : f.coeffs) acc += c * c;
    return std::sqrt(acc);
}

inline CoeffFunction operator+(const CoeffFunction& f, const CoeffFunction& g) {
    if (f.size() != g.size()) fail("dimension-mismatch", "coefficient lengths differ");
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = f.coeffs[i] + g.coeffs[i];
    return CoeffFunction(std::move(v), f.tail_bound + g.tail_bound);
}

inline CoeffFunction operator-(const CoeffFunction& f, const CoeffFunction& g) {
    if (f.size() != g.size()) fail("dimension-mismatch", "coefficient lengths differ");
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = f.coeffs[i] - g.coeffs[i];
    return CoeffFunction(std::move(v), f.tail_bound + g.tail_bound);
}

inline CoeffFunction operator*(double c, const CoeffFunction& f) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = c * f.coeffs[i];
    return CoeffFunction(std::move(v), std::abs(c) * f.tail_bound);
}

inline CoeffFunction operator*(const CoeffFunction& f, double c) { return c * f; }

// An ordered orthonormal family e_1..e_N. Concrete mode realizes the members
// on a grid; abstract mode is a marker for purely coefficient-space work.
class Basis {
public:
    static Basis abstract() { return Basis(); }

    // Normalized Legendre polynomials on the grid's interval. With a
    // Gauss-Legendre rule of per-panel order m >= N the Gram matrix is exact.
    static Basis legendre(const GridPtr& grid, std::size_t count) {
        if (count < 1) fail("insufficient-basis", "basis needs at least one member");
        Basis b;
        b.grid_ = grid;
        b.members_.reserve(count);
        const double a = grid->a_end;
        const double bb = grid->b_end;
        const double len = bb - a;
        for (std::size_t n = 1; n <= count; ++n) {
            std::vector<double> vals(grid->size());
            const double scale = std::sqrt((2.0 * n - 1.0) / len);
            for (std::size_t i = 0; i < grid->size(); ++i) {
                const double t = (2.0 * grid->nodes[i] - a - bb) / len;
                double p0 = 1.0, p1 = t;
                if (n == 1) {
                    vals[i] = scale;
                    continue;
                }
                for (std::size_t k = 2; k < n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                vals[i] = scale * p1;
            }
            b.members_.emplace_back(grid, std::move(vals));
        }
        // Orthonormality invariant: the quadrature Gram matrix must be the
        // identity; a grid of per-panel order < N cannot resolve the family.
        if (b.gram_max_error() > 1e-8)
            fail("insufficient-basis", "grid cannot resolve an orthonormal basis of this size");
        return b;
    }

    bool is_abstract() const noexcept { return members_.empty(); }
    std::size_t size() const noexcept { return members_.size(); }
    const GridPtr& grid() const noexcept { return grid_; }

    const GridFunction& member(std::size_t n) const {
        if (n == 0 || n > members_.size())
            fail("insufficient-basis", "basis member index out of range");
        return members_[n - 1];
    }

    // Largest deviation of <e_m, e_n> from the identity; diagnostic for tests.
    double gram_max_error() const {
        double worst = 0.0;
        for (std::size_t m = 1; m <= size(); ++m)
            for (std::size_t n = m; n <= size(); ++n) {
                const double g = inner_product(member(m), member(n));
                worst = std::max(worst, std::abs(g - (m == n ? 1.0 : 0.0)));
            }
        return worst;
    }

private:
    Basis() = default;
    GridPtr grid_;
    std::vector<GridFunction> members_;
};

inline CoeffFunction coeff_expand(const GridFunction& f, const Basis& basis, std::size_t count) {
    if (basis.is_abstract())
        fail("insufficient-basis", "coeff_expand requires a concrete basis");
    if (basis.size() < count)
        fail("insufficient-basis", "basis has fewer members than requested");
    detail::require_shared_grid(f, basis.member(1));
    std::vector<double> c(count);
    double sumsq = 0.0;
    for (std::size_t n = 1; n <= count; ++n) {
        c[n - 1] = inner_product(f, basis.member(n));
        sumsq += c[n - 1] * c[n - 1];
    }
    const double total = inner_product(f, f);
    const double tail = std::sqrt(std::max(0.0, total - sumsq));
    return CoeffFunction(std::move(c), tail);
}

inline GridFunction coeff_synth(const CoeffFunction& c, const Basis& basis) {
    if (basis.is_abstract())
        fail("insufficient-basis", "coeff_synth requires a concrete basis");
    if (basis.size() < c.size())
        fail("insufficient-basis", "basis has fewer members than coefficients");
    GridFunction out = GridFunction::zero(basis.grid());
    for (std::size_t n = 1; n <= c.size(); ++n) {
        const GridFunction& e = basis.member(n);
        const double cn = c.coeffs[n - 1];
        for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += cn * e.values[i];
    }
    return out;
}

} // namespace stochfred
