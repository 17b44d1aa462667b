#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stochfred/basis.hpp"
#include "stochfred/dense.hpp"
#include "stochfred/errors.hpp"
#include "stochfred/grid_function.hpp"
#include "stochfred/kernel.hpp"
#include "stochfred/report.hpp"
#include "stochfred/verification.hpp"

namespace stochfred {

namespace detail {

// ||lambda sigma - K sigma - omega||_2, recomputed from scratch so it never
// depends on the state a solver left behind.
inline double residual_norm(const Kernel& k, double lambda, const GridFunction& sigma,
                            const GridFunction& omega_s) {
    return l2_norm(lambda * sigma - apply_kernel(k, sigma) - omega_s);
}

inline double residual_norm(const MultiplicationOperator& a, const Kernel& k,
                            const CoeffFunction& sigma, const CoeffFunction& omega_s) {
    const CoeffFunction ks = apply_kernel(k, sigma);
    std::vector<double> r(sigma.size());
    for (std::size_t m = 0; m < sigma.size(); ++m)
        r[m] = a.a_seq[m] * sigma.coeffs[m] - ks.coeffs[m] - omega_s.coeffs[m];
    return l2_norm(CoeffFunction(std::move(r)));
}

} // namespace detail

struct MomentCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

// <h, sigma(s)> = <h, omega(s)> / (lambda - <g, h>) for tensor kernels.
inline MomentCheck moment_check(const GridFunction& g, const GridFunction& h, double lambda,
                                const GridFunction& omega_s, const GridFunction& sigma_s) {
    const double gh = inner_product(g, h);
    if (std::abs(lambda - gh) <= 1e-12)
        fail("denominator-singular", "lambda - <g, h> vanishes");
    MomentCheck m;
    m.lhs = inner_product(h, sigma_s);
    m.rhs = inner_product(h, omega_s) / (lambda - gh);
    m.pass = std::abs(m.lhs - m.rhs) < 1e-8 * std::max(1.0, std::abs(m.rhs));
    return m;
}

// Explicit solution for a tensor kernel g (x) h:
//   sigma(s) = (1/lambda) (<h, omega(s)> / (lambda - <g, h>)) g + omega(s)/lambda.
// The contraction condition |lambda| > ||g|| ||h|| guarantees the denominator;
// force skips that check as long as the denominator itself is safe.
inline SolveReport solve_tensor_closed_form(const GridFunction& g, const GridFunction& h,
                                            double lambda, const NoiseFamily& omega, double s,
                                            bool force = false) {
    const Kernel k = TensorProductKernel{g, h};
    SolveReport rep;
    rep.condition_diagnostic = check_conditions_kernel(k, lambda);

    const double gh = inner_product(g, h);
    if (std::abs(lambda - gh) <= 1e-12)
        fail("denominator-singular", "lambda - <g, h> vanishes");
    if (!force && !(std::abs(lambda) > hs_norm(k)))
        fail("condition-violated", "|lambda| must exceed ||g||_2 ||h||_2 (use force to override)");

    const GridFunction omega_s = omega.grid_at(s);
    const double moment = inner_product(h, omega_s) / (lambda - gh);
    const GridFunction sigma = (moment / lambda) * g + (1.0 / lambda) * omega_s;

    rep.solution = sigma;
    rep.iterations = 0;
    rep.residual_norm = detail::residual_norm(k, lambda, sigma, omega_s);
    if (std::abs(lambda) > 1.0) rep.warnings.push_back("lambda-exceeds-one");
    return rep;
}

// Contraction iteration sigma <- (K sigma + omega)/lambda, convergent at
// geometric rate ||k||/|lambda|. Values of |lambda| above 1 break hypothesis
// (a1) but not convergence, so they are accepted with a warning.
inline SolveReport solve_neumann(const Kernel& k, double lambda, const GridFunction& omega_s,
                                 double tol = 1e-10, std::size_t max_iter = 10000) {
    const double kn = hs_norm(k);
    if (!(std::abs(lambda) > kn))
        fail("condition-violated", "|lambda| must exceed the Hilbert-Schmidt norm");

    SolveReport rep;
    rep.condition_diagnostic = check_conditions_kernel(k, lambda);
    if (std::abs(lambda) > 1.0) rep.warnings.push_back("lambda-exceeds-one");

    GridFunction sigma = (1.0 / lambda) * omega_s;
    double prev_step = -1.0;
    double worst_ratio = -1.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const GridFunction next = (1.0 / lambda) * (apply_kernel(k, sigma) + omega_s);
        const double step = l2_norm(next - sigma);
        const double scale = std::max(1.0, l2_norm(sigma));
        // Ratios of steps already at roundoff level say nothing about the
        // contraction rate and are not recorded.
        if (prev_step > 1e-13 * scale) {
            const double ratio = step / prev_step;
            if (ratio > worst_ratio) worst_ratio = ratio;
        }
        prev_step = step;
        sigma = next;
        if (step < tol * scale) {
            rep.iterations = it;
            rep.solution = sigma;
            rep.residual_norm = detail::residual_norm(k, lambda, sigma, omega_s);
            if (worst_ratio >= 0.0) rep.contraction_estimate = worst_ratio;
            return rep;
        }
    }
    fail("no-convergence", "Neumann iteration exhausted max_iter");
}

enum class CoeffMethod { direct, iterative };

// Truncated coefficient system a_m sigma_m = sum_n k_mn sigma_n + omega_m,
// solved densely with partial pivoting or by diagonal-preconditioned
// iteration.
inline SolveReport solve_coefficient_system(const MultiplicationOperator& a, const Kernel& k,
                                            const CoeffFunction& omega_coeffs,
                                            CoeffMethod method = CoeffMethod::direct,
                                            bool force = false, double tol = 1e-12,
                                            std::size_t max_iter = 10000) {
    const auto* km = std::get_if<CoeffMatrixKernel>(&k);
    if (!km) fail("representation-mismatch", "coefficient solver needs a coefficient kernel");
    const std::size_t n = omega_coeffs.size();
    if (a.size() != n || km->rows != n || km->cols != n)
        fail("dimension-mismatch", "operator, kernel and noise sizes differ");

    SolveReport rep;
    rep.condition_diagnostic = check_conditions_coefficient(a, k);
    const double kn = hs_norm(k);
    const double inf_a = mult_covering_constant(a).truncated_inf;
    if (!force && !(inf_a > kn))
        fail("condition-violated", "inf|a_n| must exceed ||k|| (use force to override)");

    if (method == CoeffMethod::direct) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m.at(i, j) = (i == j ? a.a_seq[i] : 0.0) - km->at(i, j);
        CoeffFunction sigma(dense_solve(m, omega_coeffs.coeffs));
        rep.solution = sigma;
        rep.iterations = 0;
        rep.residual_norm = detail::residual_norm(a, k, sigma, omega_coeffs);
        return rep;
    }

    for (double an : a.a_seq)
        if (an == 0.0) fail("singular-system", "iterative method needs nonzero a_n");
    CoeffFunction sigma(std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) sigma.coeffs[i] = omega_coeffs.coeffs[i] / a.a_seq[i];
    double prev_step = -1.0;
    double worst_ratio = -1.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const CoeffFunction ks = apply_kernel(k, sigma);
        CoeffFunction next(std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            next.coeffs[i] = (ks.coeffs[i] + omega_coeffs.coeffs[i]) / a.a_seq[i];
        const double step = l2_norm(next - sigma);
        const double scale = std::max(1.0, l2_norm(sigma));
        if (prev_step > 1e-13 * scale) worst_ratio = std::max(worst_ratio, step / prev_step);
        prev_step = step;
        sigma = next;
        if (step < tol * scale) {
            rep.solution = sigma;
            rep.iterations = it;
            if (worst_ratio >= 0.0) rep.contraction_estimate = worst_ratio;
            rep.residual_norm = detail::residual_norm(a, k, sigma, omega_coeffs);
            return rep;
        }
    }
    fail("no-convergence", "coefficient iteration exhausted max_iter");
}

// Rank-one elimination closed form with unit multiplication operator:
//   sigma_m = (<omega, h> / (1 - <g, h>)) g_m + omega_m.
inline CoeffFunction solve_rank_one_unit(const CoeffFunction& g_coeffs,
                                         const CoeffFunction& h_coeffs,
                                         const CoeffFunction& omega_coeffs) {
    const std::size_t n = omega_coeffs.size();
    if (g_coeffs.size() != n || h_coeffs.size() != n)
        fail("dimension-mismatch", "coefficient lengths differ");
    double gh = 0.0, wh = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        gh += g_coeffs.coeffs[i] * h_coeffs.coeffs[i];
        wh += omega_coeffs.coeffs[i] * h_coeffs.coeffs[i];
    }
    if (std::abs(1.0 - gh) <= 1e-12)
        fail("denominator-singular", "1 - <g, h> vanishes");
    const double moment = wh / (1.0 - gh);
    std::vector<double> sigma(n);
    for (std::size_t m = 0; m < n; ++m)
        sigma[m] = moment * g_coeffs.coeffs[m] + omega_coeffs.coeffs[m];
    return CoeffFunction(std::move(sigma));
}

// Parameterized family lambda sigma(s) = integral_a^s k sigma(s) + omega(s):
// each sample solves with the kernel cut at s. Norm monotonicity in s comes
// with the cut realization, since enlarging the kept node set only adds
// nonnegative Hilbert-Schmidt mass.
inline std::vector<SolveReport> solve_parameterized_family(
    const Kernel& k, double lambda, const NoiseFamily& omega,
    const std::vector<double>& s_grid, double c, double tol = 1e-10,
    std::size_t max_iter = 10000) {
    const GridSamplesKernel cut_base = truncate_kernel_param(k, c);
    if (!(hs_norm(Kernel{cut_base}) > 0.0))
        fail("condition-violated", "kernel mass below the family start c vanishes");
    if (!(std::abs(lambda) > hs_norm(k)))
        fail("condition-violated", "|lambda| must exceed the full-kernel norm");

    std::vector<SolveReport> reports;
    reports.reserve(s_grid.size());
    for (double s : s_grid) {
        if (s < c) fail("parameter-out-of-range", "sample below the family start c");
        const Kernel ks = truncate_kernel_param(k, s);
        reports.push_back(solve_neumann(ks, lambda, omega.grid_at(s), tol, max_iter));
    }
    return reports;
}

// Appends a-posteriori bound checks at the given anchors. guaranteed marks
// whether the hypotheses backing the bound actually held.
inline void evaluate_bound_checks(SolveReport& rep, const Kernel& k, double lambda,
                                  const GridFunction& omega_s,
                                  const std::vector<std::pair<std::string, GridFunction>>& anchors,
                                  double alpha) {
    const bool guaranteed = rep.condition_diagnostic.passes;
    for (const auto& [name, f] : anchors) {
        BoundCheck bc;
        bc.anchor = name;
        bc.alpha = alpha;
        bc.lhs = l2_norm(rep.grid_solution() - f);
        bc.rhs = error_bound_rhs(k, lambda, omega_s, f, alpha);
        bc.pass = bc.lhs <= bc.rhs + 1e-12;
        bc.guaranteed = guaranteed;
        rep.bound_checks.push_back(bc);
    }
}

} // namespace stochfred
