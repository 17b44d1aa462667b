#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "stochfred/basis.hpp"
#include "stochfred/errors.hpp"
#include "stochfred/grid_function.hpp"

namespace stochfred {

// k(u, v) = g(u) h(v); the induced operator is rank one.
struct TensorProductKernel {
    GridFunction g;
    GridFunction h;
};

// k_mn with respect to an orthonormal basis pair, plus the declared l2 mass
// of the omitted coefficients.
struct CoeffMatrixKernel {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> entries; // row-major, rows index m (output), cols index n (input)
    double tail_bound = 0.0;

    CoeffMatrixKernel() = default;
    CoeffMatrixKernel(std::size_t m, std::size_t n, double tail = 0.0)
        : rows(m), cols(n), entries(m * n, 0.0), tail_bound(tail) {}

    double& at(std::size_t m, std::size_t n) { return entries[m * cols + n]; }
    double at(std::size_t m, std::size_t n) const { return entries[m * cols + n]; }

    static CoeffMatrixKernel rank_one(const CoeffFunction& g, const CoeffFunction& h,
                                      double tail = 0.0) {
        CoeffMatrixKernel k(g.size(), h.size(), tail);
        for (std::size_t m = 0; m < g.size(); ++m)
            for (std::size_t n = 0; n < h.size(); ++n)
                k.at(m, n) = g.coeffs[m] * h.coeffs[n];
        return k;
    }
};

// Samples k(u_i, v_j) on the product of two quadrature grids. v_scale holds
// the indicator factors of a parameter truncation: entries drop to zero for
// nodes past the cut, leaving the node layout untouched.
struct GridSamplesKernel {
    GridPtr u_grid;
    GridPtr v_grid;
    std::vector<double> values; // row-major over (u index, v index)
    std::vector<double> v_scale;
    std::optional<double> cut_at;
    double cut_gap = 0.0; // node spacing straddling the cut; quadrature uncertainty

    GridSamplesKernel() = default;
    GridSamplesKernel(GridPtr ug, GridPtr vg)
        : u_grid(std::move(ug)), v_grid(std::move(vg)),
          values(u_grid->size() * v_grid->size(), 0.0),
          v_scale(v_grid->size(), 1.0) {}

    double& at(std::size_t i, std::size_t j) { return values[i * v_grid->size() + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * v_grid->size() + j]; }

    static GridSamplesKernel from_tensor(const TensorProductKernel& k) {
        GridSamplesKernel out(k.g.grid, k.h.grid);
        for (std::size_t i = 0; i < k.g.size(); ++i)
            for (std::size_t j = 0; j < k.h.size(); ++j)
                out.at(i, j) = k.g.values[i] * k.h.values[j];
        return out;
    }
};

using Kernel = std::variant<TensorProductKernel, CoeffMatrixKernel, GridSamplesKernel>;

inline double hs_norm(const Kernel& k) {
    if (const auto* t = std::get_if<TensorProductKernel>(&k))
        return l2_norm(t->g) * l2_norm(t->h);
    if (const auto* c = std::get_if<CoeffMatrixKernel>(&k)) {
        double acc = 0.0;
        for (double v : c->entries) acc += v * v;
        return std::sqrt(acc);
    }
    const auto& g = std::get<GridSamplesKernel>(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.u_grid->size(); ++i) {
        const double wi = g.u_grid->weights[i];
        for (std::size_t j = 0; j < g.v_grid->size(); ++j) {
            const double kij = g.at(i, j) * g.v_scale[j];
            acc += wi * g.v_grid->weights[j] * kij * kij;
        }
    }
    return std::sqrt(acc);
}

inline GridFunction apply_kernel(const Kernel& k, const GridFunction& f) {
    if (const auto* t = std::get_if<TensorProductKernel>(&k)) {
        const double moment = inner_product(t->h, f);
        return moment * t->g;
    }
    if (const auto* g = std::get_if<GridSamplesKernel>(&k)) {
        if (!same_grid(*g->v_grid, *f.grid))
            fail("grid-mismatch", "input lives on a different grid than the kernel");
        GridFunction out = GridFunction::zero(g->u_grid);
        for (std::size_t i = 0; i < g->u_grid->size(); ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < g->v_grid->size(); ++j)
                acc += g->v_grid->weights[j] * g->v_scale[j] * g->at(i, j) * f.values[j];
            out.values[i] = acc;
        }
        return out;
    }
    fail("representation-mismatch", "coefficient kernels act on CoeffFunction inputs");
}

inline CoeffFunction apply_kernel(const Kernel& k, const CoeffFunction& f) {
    const auto* c = std::get_if<CoeffMatrixKernel>(&k);
    if (!c) fail("representation-mismatch", "grid kernels act on GridFunction inputs");
    if (c->cols != f.size())
        fail("dimension-mismatch", "coefficient lengths differ from kernel columns");
    std::vector<double> out(c->rows, 0.0);
    for (std::size_t m = 0; m < c->rows; ++m) {
        double acc = 0.0;
        for (std::size_t n = 0; n < c->cols; ++n) acc += c->at(m, n) * f.coeffs[n];
        out[m] = acc;
    }
    return CoeffFunction(std::move(out));
}

// ||K f||_2 <= ||k|| ||f||_2, so the Hilbert-Schmidt norm bounds the operator
// norm from above.
inline double op_norm_bound(const Kernel& k) { return hs_norm(k); }

// k_s(u, v) = k(u, v) * indicator(v <= s), realized by zeroing the v-node
// scales past s. Nodes never move, so solutions stay comparable across s.
inline GridSamplesKernel truncate_kernel_param(const Kernel& k, double s) {
    GridSamplesKernel out = [&k]() {
        if (const auto* t = std::get_if<TensorProductKernel>(&k))
            return GridSamplesKernel::from_tensor(*t);
        if (const auto* g = std::get_if<GridSamplesKernel>(&k)) return *g;
        fail("representation-mismatch", "coefficient kernels have no parameter truncation");
    }();

    const QuadGrid& vg = *out.v_grid;
    if (s < vg.a_end || s > vg.b_end)
        fail("parameter-out-of-range", "cut parameter outside the kernel interval");

    double last_kept = vg.a_end;
    double first_dropped = vg.b_end;
    bool dropped = false;
    for (std::size_t j = 0; j < vg.size(); ++j) {
        if (vg.nodes[j] <= s) {
            last_kept = vg.nodes[j];
        } else {
            out.v_scale[j] = 0.0;
            if (!dropped) {
                first_dropped = vg.nodes[j];
                dropped = true;
            }
        }
    }
    out.cut_at = s;
    out.cut_gap = dropped ? first_dropped - last_kept : 0.0;
    return out;
}

// Pointwise multiplication operator: scales the n-th basis coefficient by a_n.
struct MultiplicationOperator {
    std::vector<double> a_seq;
    std::optional<double> analytic_inf;
    std::optional<double> analytic_sup;

    MultiplicationOperator() = default;
    explicit MultiplicationOperator(std::vector<double> entries,
                                    std::optional<double> inf = std::nullopt,
                                    std::optional<double> sup = std::nullopt)
        : a_seq(std::move(entries)), analytic_inf(inf), analytic_sup(sup) {
        for (double v : a_seq) {
            if (!std::isfinite(v)) fail("invalid-entry", "sequence entry not finite");
            if (analytic_sup && !(std::abs(v) <= *analytic_sup + 1e-12))
                fail("invalid-entry", "entry exceeds the declared analytic supremum");
        }
    }

    static MultiplicationOperator ones(std::size_t n) {
        return MultiplicationOperator(std::vector<double>(n, 1.0), 1.0, 1.0);
    }

    std::size_t size() const noexcept { return a_seq.size(); }
};

inline CoeffFunction mult_apply(const MultiplicationOperator& a, const CoeffFunction& f) {
    if (a.size() != f.size()) fail("dimension-mismatch", "sequence lengths differ");
    std::vector<double> out(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) out[n] = a.a_seq[n] * f.coeffs[n];
    return CoeffFunction(std::move(out), f.tail_bound);
}

struct MultCoveringReport {
    double truncated_inf = 0.0;          // min |a_n| over the truncation
    double truncated_sup = 0.0;          // max |a_n|; exact operator norm of the window
    std::optional<double> analytic_inf;
    bool sup_at_most_one = false;
};

inline MultCoveringReport mult_covering_constant(const MultiplicationOperator& a) {
    MultCoveringReport r;
    bool first = true;
    for (double v : a.a_seq) {
        const double m = std::abs(v);
        if (first) {
            r.truncated_inf = r.truncated_sup = m;
            first = false;
        } else {
            if (m < r.truncated_inf) r.truncated_inf = m;
            if (m > r.truncated_sup) r.truncated_sup = m;
        }
    }
    r.analytic_inf = a.analytic_inf;
    r.sup_at_most_one = r.truncated_sup <= 1.0 + 1e-12 &&
                        (!a.analytic_sup || *a.analytic_sup <= 1.0 + 1e-12);
    return r;
}

} // namespace stochfred
