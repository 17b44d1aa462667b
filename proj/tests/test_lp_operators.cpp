#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "stochfred/diagonal.hpp"
#include "stochfred/lp_matrix.hpp"

using namespace stochfred;

namespace {

TruncatedMatrix diag_matrix(const std::vector<double>& d, double p = 2.0) {
    TruncatedMatrix m(d.size(), p);
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t n, double p) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = dist(rng);
    const double norm = lp_norm(x, p);
    for (double& v : x) v /= norm;
    return x;
}

} // namespace

TEST_CASE("apply_matrix follows the row-vector convention") {
    const auto id = TruncatedMatrix::identity(4);
    const std::vector<double> x{1.0, -2.0, 3.0, 0.5};
    CHECK(apply_matrix(id, x) == x);

    const auto d = diag_matrix({0.5, 1.0 / 3.0, 0.25});
    const auto y = apply_matrix(d, {1.0, 1.0, 1.0});
    CHECK(y[0] == doctest::Approx(0.5));
    CHECK(y[1] == doctest::Approx(1.0 / 3.0));
    CHECK(y[2] == doctest::Approx(0.25));

    TruncatedMatrix zero(3, 2.0);
    for (double v : apply_matrix(zero, {1.0, 2.0, 3.0})) CHECK(v == 0.0);

    // Off-diagonal check of output_j = sum_i a_ij x_i.
    TruncatedMatrix m(2, 2.0);
    m.at(0, 1) = 1.0; // row 1, column 2
    const auto z = apply_matrix(m, {5.0, 0.0});
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 5.0);

    CHECK_THROWS_WITH_AS(apply_matrix(id, {1.0}), doctest::Contains("dimension-mismatch"), Error);
}

TEST_CASE("norm_upper_bound closed cases") {
    TruncatedMatrix zero(3, 2.0);
    CHECK(norm_upper_bound(zero) == 0.0);

    const auto id = TruncatedMatrix::identity(9);
    CHECK(norm_upper_bound(id) == doctest::Approx(3.0).epsilon(1e-14));

    std::vector<double> d(200);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = 1.0 / (static_cast<double>(i) + 2.0);
    CHECK(norm_upper_bound(diag_matrix(d)) < 1.0); // sum 1/(j+1)^2 < 1
}

TEST_CASE("norm_upper_bound dominates sampled operator values") {
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double p : {2.0, 1.5, 3.0}) {
        TruncatedMatrix a(6, p);
        for (double& v : a.entries) v = dist(rng);
        const double bound = norm_upper_bound(a);
        for (int trial = 0; trial < 1000; ++trial) {
            const auto x = random_unit(rng, 6, p);
            CHECK(lp_norm(apply_matrix(a, x), p) <= bound + 1e-10);
        }
    }
}

TEST_CASE("transpose_norm_upper_bound closed cases") {
    TruncatedMatrix zero(4, 2.0);
    CHECK(transpose_norm_upper_bound(zero) == 0.0);

    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    TruncatedMatrix sym(5, 2.0);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i; j < 5; ++j) {
            const double v = dist(rng);
            sym.at(i, j) = v;
            sym.at(j, i) = v;
        }
    CHECK(transpose_norm_upper_bound(sym) ==
          doctest::Approx(norm_upper_bound(sym)).epsilon(1e-14));

    // ((1,0),(0,0)) with p = 2: both double sums collapse to 1.
    TruncatedMatrix corner(2, 2.0);
    corner.at(0, 0) = 1.0;
    CHECK(transpose_norm_upper_bound(corner) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("diagonal_stats and covering estimate") {
    const DiagonalOperator harmonic(
        [](std::size_t i) { return 1.0 / (static_cast<double>(i) + 1.0); }, 100);
    const auto st = diagonal_stats(harmonic);
    CHECK(st.min_abs == doctest::Approx(1.0 / 101.0).epsilon(1e-15));
    CHECK(st.max_abs == doctest::Approx(0.5).epsilon(1e-15));

    const auto c = DiagonalOperator::constant(-0.7, 10);
    const auto stc = diagonal_stats(c);
    CHECK(stc.min_abs == doctest::Approx(0.7));
    CHECK(stc.max_abs == doctest::Approx(0.7));

    const auto ones = DiagonalOperator::constant(1.0, 5);
    CHECK(diagonal_covering_constant(ones).truncated == 1.0);

    const DiagonalOperator floored(
        [](std::size_t i) { return i == 1 ? 0.9 : (i == 2 ? 0.8 : 0.7); }, 50, 0.7);
    const auto cov = diagonal_covering_constant(floored);
    CHECK(cov.truncated == doctest::Approx(0.7));
    REQUIRE(cov.analytic.has_value());
    CHECK(*cov.analytic == doctest::Approx(0.7));

    // A declared analytic infimum above the truncated minimum is inconsistent.
    CHECK_THROWS_WITH_AS(DiagonalOperator([](std::size_t) { return 0.5; }, 10, 0.8),
                         doctest::Contains("invalid-entry"), Error);
}

TEST_CASE("truncated covering estimate is nonincreasing in N") {
    const auto rule = [](std::size_t i) { return 1.0 / (static_cast<double>(i) + 1.0); };
    double prev = 2.0;
    for (std::size_t n : {10u, 20u, 40u, 80u}) {
        const double est = diagonal_covering_constant(DiagonalOperator(rule, n)).truncated;
        CHECK(est == doctest::Approx(1.0 / (n + 1.0)).epsilon(1e-15));
        CHECK(est < prev);
        prev = est;
    }
}

TEST_CASE("basis-vector covering upper bound") {
    CHECK(basis_vector_covering_upper_bound(TruncatedMatrix::identity(7)) ==
          doctest::Approx(1.0));

    std::vector<double> d(10);
    for (std::size_t i = 0; i < 10; ++i) d[i] = 1.0 / (static_cast<double>(i) + 2.0);
    CHECK(basis_vector_covering_upper_bound(diag_matrix(d)) ==
          doctest::Approx(1.0 / 11.0).epsilon(1e-15));

    // A summable-class matrix: a_ij = 2^{-i-j}. Column norms shrink
    // geometrically, so the bound falls toward zero as the window grows.
    double prev = 1e9;
    for (std::size_t n : {4u, 8u, 16u, 32u}) {
        TruncatedMatrix a(n, 2.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a.at(i, j) = std::pow(2.0, -static_cast<double>(i + j + 2));
        const double bound = basis_vector_covering_upper_bound(a);
        CHECK(bound < prev);
        prev = bound;
    }
    CHECK(prev < 1e-9);
}

TEST_CASE("min_singular_estimate on known spectra") {
    CHECK(min_singular_estimate(TruncatedMatrix::identity(6)) == doctest::Approx(1.0));
    CHECK(min_singular_estimate(diag_matrix({0.5, 1.0 / 3.0})) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> d(8);
    for (double& v : d) v = dist(rng);
    const double expected = [&] {
        double best = 1e9;
        for (double v : d) best = std::min(best, std::abs(v));
        return best;
    }();
    CHECK(min_singular_estimate(diag_matrix(d)) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("min_singular_estimate vs unit-sphere sampling oracle") {
    std::mt19937_64 rng(123457);
    std::normal_distribution<double> gauss(0.0, 1.0);
    // Shifted ensemble: the bottom of the spectrum stays clustered, which a
    // million uniform directions can actually resolve to 1e-3.
    TruncatedMatrix a(5, 2.0);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            a.at(i, j) = (i == j ? 0.5 : 0.0) + 0.1 * gauss(rng);

    const double estimate = min_singular_estimate(a);

    // Brute-force oracle: minimum of ||A^T y||_2 over a million random unit
    // vectors. It can only overshoot the true infimum.
    double sampled = 1e300;
    for (int trial = 0; trial < 1000000; ++trial) {
        double y[5], norm2 = 0.0;
        for (double& v : y) {
            v = gauss(rng);
            norm2 += v * v;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        double acc = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            double comp = 0.0;
            for (std::size_t j = 0; j < 5; ++j) comp += a.at(i, j) * y[j] * inv;
            acc += comp * comp;
        }
        sampled = std::min(sampled, std::sqrt(acc));
    }
    CHECK(sampled >= estimate - 1e-9);
    CHECK(sampled - estimate < 1e-3);
}

TEST_CASE("min_singular_estimate of a singular window is zero") {
    TruncatedMatrix a(3, 2.0);
    a.at(0, 0) = 1.0;
    a.at(1, 1) = 1.0; // third row/column empty
    CHECK(min_singular_estimate(a) == 0.0);
}

TEST_CASE("solve_stochastic_diagonal closed cases") {
    const std::size_t n = 16;
    const auto id = DiagonalOperator::constant(1.0, n);
    const auto zero = DiagonalOperator::constant(0.0, n);
    const auto omega = [n](double s) {
        std::vector<double> w(n);
        for (std::size_t i = 1; i <= n; ++i) w[i - 1] = s / std::pow(2.0, static_cast<double>(i));
        return w;
    };

    const auto sigma = solve_stochastic_diagonal(id, zero, omega, 0.75);
    const auto w = omega(0.75);
    for (std::size_t i = 0; i < n; ++i) CHECK(sigma[i] == w[i]);

    // Constant difference c scales the noise by 1/c.
    const auto a = DiagonalOperator::constant(0.9, n);
    const auto b = DiagonalOperator::constant(0.4, n);
    const auto sigma2 = solve_stochastic_diagonal(a, b, omega, 1.0);
    const auto w2 = omega(1.0);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(sigma2[i] == doctest::Approx(w2[i] / 0.5).epsilon(1e-15));
}

TEST_CASE("diagonal solver: residual, bound and linearity") {
    const std::size_t n = 32;
    // Satisfies 0 < M_B < m_A <= M_A <= 1.
    const DiagonalOperator a([](std::size_t i) { return 0.8 + 0.1 / static_cast<double>(i); }, n);
    const DiagonalOperator b([](std::size_t i) { return 0.2 - 0.1 / (i + 1.0); }, n);
    const auto cond = check_conditions_diagonal(a, b);
    REQUIRE(cond.passes);

    const auto omega = [n](double s) {
        std::vector<double> w(n);
        for (std::size_t i = 1; i <= n; ++i) w[i - 1] = s / std::pow(2.0, static_cast<double>(i));
        return w;
    };
    const double s = 0.6;
    const auto sigma = solve_stochastic_diagonal(a, b, omega, s);
    const auto w = omega(s);
    for (std::size_t i = 0; i < n; ++i) {
        const double res = a.entries[i] * sigma[i] - b.entries[i] * sigma[i] - w[i];
        CHECK(std::abs(res) < 1e-12 * std::max(1.0, std::abs(w[i])));
    }

    // Distance bound with alpha strictly inside (M_B, m_A), random anchors.
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double alpha = 0.5 * (cond.big_m_b + cond.m_a);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(n);
        for (double& v : x) v = dist(rng);
        std::vector<double> lhs_vec(n), rhs_vec(n);
        for (std::size_t i = 0; i < n; ++i) {
            lhs_vec[i] = sigma[i] - x[i];
            rhs_vec[i] = b.entries[i] * x[i] + w[i] - a.entries[i] * x[i];
        }
        const double lhs = lp_norm(lhs_vec, 2.0);
        const double rhs = lp_norm(rhs_vec, 2.0) / (alpha - cond.big_m_b);
        CHECK(lhs <= rhs + 1e-12);
    }

    // Linearity: scaling the noise scales the solution exactly.
    const auto sigma2 = solve_stochastic_diagonal(
        a, b, [&](double t) {
            auto v = omega(t);
            for (double& u : v) u *= 3.0;
            return v;
        },
        s);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(sigma2[i] == doctest::Approx(3.0 * sigma[i]).epsilon(1e-14));
}

TEST_CASE("diagonal solver degenerate entries") {
    const std::size_t n = 4;
    const auto a = DiagonalOperator::constant(0.5, n);
    const auto b = DiagonalOperator::constant(0.5, n);
    const auto zero_noise = [n](double) { return std::vector<double>(n, 0.0); };
    const auto sigma = solve_stochastic_diagonal(a, b, zero_noise, 0.0);
    for (double v : sigma) CHECK(v == 0.0);

    const auto bad_noise = [n](double) { return std::vector<double>(n, 1.0); };
    CHECK_THROWS_WITH_AS(solve_stochastic_diagonal(a, b, bad_noise, 0.0),
                         doctest::Contains("no-solution"), Error);
}

TEST_CASE("check_conditions_diagonal verdicts") {
    const auto pass = check_conditions_diagonal(DiagonalOperator::constant(0.9, 8),
                                                DiagonalOperator::constant(0.1, 8));
    CHECK(pass.passes);
    CHECK(pass.alpha_low == doctest::Approx(0.1));
    CHECK(pass.alpha_high == doctest::Approx(0.9));

    // M_A < m_B flips the required ordering.
    const auto swapped = check_conditions_diagonal(DiagonalOperator::constant(0.3, 8),
                                                   DiagonalOperator::constant(0.8, 8));
    CHECK_FALSE(swapped.passes);
    bool found = false;
    for (const auto& r : swapped.reasons) found = found || r == "M_B >= m_A";
    CHECK(found);

    const auto large = check_conditions_diagonal(DiagonalOperator::constant(1.5, 8),
                                                 DiagonalOperator::constant(0.1, 8));
    CHECK_FALSE(large.passes);
    found = false;
    for (const auto& r : large.reasons) found = found || r == "M_A > 1";
    CHECK(found);
}
