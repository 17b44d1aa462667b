#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "stochfred/errors.hpp"

namespace stochfred {

// Row-major dense matrix, just enough linear algebra for the truncated
// windows this library works with.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

namespace detail {

struct LuFactors {
    DenseMatrix lu;
    std::vector<std::size_t> perm;
    bool singular = false;
};

inline LuFactors lu_factor(DenseMatrix m) {
    const std::size_t n = m.rows;
    LuFactors f;
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

    double scale = 0.0;
    for (double v : m.data) scale = std::max(scale, std::abs(v));
    const double tiny = scale * 1e-300 + 1e-300;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(m.at(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(m.at(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= tiny) {
            f.singular = true;
            f.lu = std::move(m);
            return f;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m.at(k, j), m.at(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = m.at(i, k) / m.at(k, k);
            m.at(i, k) = factor;
            for (std::size_t j = k + 1; j < n; ++j)
                m.at(i, j) -= factor * m.at(k, j);
        }
    }
    f.lu = std::move(m);
    return f;
}

inline std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& b) {
    const std::size_t n = f.lu.rows;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 1; i < n; ++i) {
        double acc = x[i];
        for (std::size_t j = 0; j < i; ++j) acc -= f.lu.at(i, j) * x[j];
        x[i] = acc;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= f.lu.at(ii, j) * x[j];
        x[ii] = acc / f.lu.at(ii, ii);
    }
    return x;
}

} // namespace detail

// Solves the square system M x = b by partial-pivot elimination.
inline std::vector<double> dense_solve(const DenseMatrix& m, const std::vector<double>& b) {
    if (m.rows != m.cols || m.rows != b.size())
        fail("dimension-mismatch", "dense_solve needs a square system");
    auto f = detail::lu_factor(m);
    if (f.singular) fail("singular-system", "matrix is numerically singular");
    return detail::lu_solve(f, b);
}

} // namespace stochfred
