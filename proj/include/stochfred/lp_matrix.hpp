#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "stochfred/dense.hpp"
#include "stochfred/errors.hpp"

namespace stochfred {

// N x N window of an infinite matrix acting on l_p by x -> xA, i.e.
// (A x)_j = sum_i a_ij x_i. Rows are indexed by i, columns by j.
struct TruncatedMatrix {
    std::size_t n = 0;
    std::vector<double> entries; // row-major
    double p_exponent = 2.0;

    TruncatedMatrix() = default;
    TruncatedMatrix(std::size_t size, double p) : n(size), entries(size * size, 0.0), p_exponent(p) {
        if (size < 1) fail("dimension-mismatch", "matrix window needs N >= 1");
        if (!(p > 1.0) || !std::isfinite(p))
            fail("invalid-exponent", "p must lie in (1, inf)");
    }

    double& at(std::size_t i, std::size_t j) { return entries[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }

    double q_exponent() const noexcept { return p_exponent / (p_exponent - 1.0); }

    static TruncatedMatrix identity(std::size_t size, double p = 2.0) {
        TruncatedMatrix m(size, p);
        for (std::size_t i = 0; i < size; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline double lp_norm(const std::vector<double>& x, double p) {
    double acc = 0.0;
    for (double v : x) acc += std::pow(std::abs(v), p);
    return std::pow(acc, 1.0 / p);
}

inline std::vector<double> apply_matrix(const TruncatedMatrix& a, const std::vector<double>& x) {
    if (x.size() != a.n) fail("dimension-mismatch", "vector length differs from window size");
    std::vector<double> out(a.n, 0.0);
    for (std::size_t i = 0; i < a.n; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < a.n; ++j) out[j] += a.at(i, j) * xi;
    }
    return out;
}

// Hoelder bound (sum_j (sum_i |a_ij|^q)^{p/q})^{1/p} on the operator norm.
inline double norm_upper_bound(const TruncatedMatrix& a) {
    const double p = a.p_exponent;
    const double q = a.q_exponent();
    double outer = 0.0;
    for (std::size_t j = 0; j < a.n; ++j) {
        double inner = 0.0;
        for (std::size_t i = 0; i < a.n; ++i)
            inner += std::pow(std::abs(a.at(i, j)), q);
        outer += std::pow(inner, p / q);
    }
    return std::pow(outer, 1.0 / p);
}

// Same bound for the transpose acting on l_q.
inline double transpose_norm_upper_bound(const TruncatedMatrix& a) {
    const double p = a.p_exponent;
    const double q = a.q_exponent();
    double outer = 0.0;
    for (std::size_t i = 0; i < a.n; ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < a.n; ++j)
            inner += std::pow(std::abs(a.at(i, j)), p);
        outer += std::pow(inner, q / p);
    }
    return std::pow(outer, 1.0 / q);
}

// min over unit basis vectors s_m of ||A^T(s_m)||_q. Restricting the infimum
// that defines the covering constant to basis vectors makes this an upper
// bound on it, never an estimate. (A^T s_m)_i = a_im, so the quantity is the
// smallest column q-norm of the window.
inline double basis_vector_covering_upper_bound(const TruncatedMatrix& a) {
    const double q = a.q_exponent();
    double best = -1.0;
    for (std::size_t m = 0; m < a.n; ++m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.n; ++i)
            acc += std::pow(std::abs(a.at(i, m)), q);
        const double norm = std::pow(acc, 1.0 / q);
        if (best < 0.0 || norm < best) best = norm;
    }
    return best < 0.0 ? 0.0 : best;
}

// inf over l2 unit vectors y of ||A^T y||_2, the smallest singular value of
// the window. Inverse power iteration on the Gram matrix G = A A^T; a
// singular Gram factor means the infimum is zero and is returned as such.
inline double min_singular_estimate(const TruncatedMatrix& a,
                                    double tol = 1e-12,
                                    std::size_t max_iter = 100000) {
    if (a.p_exponent != 2.0)
        fail("invalid-exponent", "min_singular_estimate requires p = 2");
    const std::size_t n = a.n;
    DenseMatrix gram(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += a.at(i, k) * a.at(j, k);
            gram.at(i, j) = acc;
        }

    auto f = detail::lu_factor(gram);
    if (f.singular) return 0.0;

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = 1.0 + 0.25 * std::sin(static_cast<double>(i + 1)); // generic start
    double ynorm = lp_norm(y, 2.0);
    for (double& v : y) v /= ynorm;

    double prev = -1.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::vector<double> z = detail::lu_solve(f, y);
        double zy = 0.0, zz = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            zy += z[i] * y[i];
            zz += z[i] * z[i];
        }
        const double lambda = zy / zz; // eigenvalue estimate for G
        const double znorm = std::sqrt(zz);
        for (std::size_t i = 0; i < n; ++i) y[i] = z[i] / znorm;
        if (prev >= 0.0 && std::abs(lambda - prev) < tol * std::max(1.0, lambda))
            return std::sqrt(std::max(0.0, lambda));
        prev = lambda;
    }
    fail("no-convergence", "inverse iteration did not converge");
}

} // namespace stochfred
