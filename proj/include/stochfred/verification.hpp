#pragma once

#include <cmath>
#include <string>

#include "stochfred/diagnostics.hpp"
#include "stochfred/errors.hpp"
#include "stochfred/grid_function.hpp"
#include "stochfred/kernel.hpp"
#include "stochfred/report.hpp"

namespace stochfred {

// Covering constant of the scalar map f -> lambda f. The closed form |lambda|
// is stated under |lambda| <= 1; outside that range the value is still
// returned but flagged.
inline ScalarCovering scalar_identity_covering(double lambda) {
    ScalarCovering s;
    s.value = std::abs(lambda);
    s.within_hypothesis = std::abs(lambda) <= 1.0;
    return s;
}

// Hypotheses for lambda sigma = K sigma + omega: 0 < ||k|| < |lambda| <= 1.
// The covering constant of lambda I is |lambda|; the perturbation modulus is
// bounded by the Hilbert-Schmidt norm of k. A zero kernel fails strict
// positivity only degenerately and is flagged rather than failed.
inline ConditionDiagnostic check_conditions_kernel(const Kernel& k, double lambda) {
    ConditionDiagnostic d;
    d.kernel_norm = hs_norm(k);
    d.lambda_abs = std::abs(lambda);
    d.covering_constant = d.lambda_abs;
    d.lipschitz_modulus = d.kernel_norm;
    d.zero_kernel = (d.kernel_norm == 0.0);
    d.passes = true;
    if (d.zero_kernel) d.reasons.push_back("zero-kernel");
    if (!(d.lipschitz_modulus < d.covering_constant)) {
        d.passes = false;
        d.reasons.push_back("modulus >= covering");
    }
    if (!(d.lambda_abs <= 1.0)) {
        d.passes = false;
        d.reasons.push_back("|lambda| > 1");
    }
    if (d.passes) {
        d.has_alpha_interval = true;
        d.alpha_low = d.kernel_norm;
        d.alpha_high = d.lambda_abs;
    }
    return d;
}

// Coefficient-space hypotheses: 0 < ||k|| < inf|a_n| <= sup|a_n| <= 1, with
// the inf/sup taken over the truncation (and analytic values when supplied).
inline ConditionDiagnostic check_conditions_coefficient(const MultiplicationOperator& a,
                                                        const Kernel& k) {
    if (!std::holds_alternative<CoeffMatrixKernel>(k))
        fail("representation-mismatch", "coefficient conditions need a coefficient kernel");
    ConditionDiagnostic d;
    const auto cov = mult_covering_constant(a);
    d.kernel_norm = hs_norm(k);
    d.lambda_abs = cov.truncated_sup; // operator norm of the multiplication window
    d.covering_constant = cov.analytic_inf ? *cov.analytic_inf : cov.truncated_inf;
    d.lipschitz_modulus = d.kernel_norm;
    d.zero_kernel = (d.kernel_norm == 0.0);
    d.passes = true;
    if (d.zero_kernel) d.reasons.push_back("zero-kernel");
    if (!(d.lipschitz_modulus < d.covering_constant)) {
        d.passes = false;
        d.reasons.push_back("modulus >= covering");
    }
    if (!cov.sup_at_most_one) {
        d.passes = false;
        d.reasons.push_back("sup|a_n| > 1");
    }
    if (d.passes) {
        d.has_alpha_interval = true;
        d.alpha_low = d.kernel_norm;
        d.alpha_high = d.covering_constant;
    }
    return d;
}

// Right-hand side of the a-posteriori bound: the residual of an arbitrary
// anchor f, divided by the covering surplus alpha - ||k||. Grid variant.
inline double error_bound_rhs(const Kernel& k, double lambda, const GridFunction& omega_s,
                              const GridFunction& anchor_f, double alpha) {
    const double kn = hs_norm(k);
    if (!(kn < alpha && alpha < std::abs(lambda)))
        fail("alpha-out-of-range", "need ||k|| < alpha < |lambda|");
    const GridFunction defect = apply_kernel(k, anchor_f) + omega_s - lambda * anchor_f;
    return l2_norm(defect) / (alpha - kn);
}

// Coefficient variant with sqrt-of-sums norms and a multiplication operator
// on the left-hand side.
inline double error_bound_rhs(const MultiplicationOperator& a, const Kernel& k,
                              const CoeffFunction& omega_s, const CoeffFunction& anchor_f,
                              double alpha) {
    const double kn = hs_norm(k);
    const double inf_a = mult_covering_constant(a).truncated_inf;
    if (!(kn < alpha && alpha < inf_a))
        fail("alpha-out-of-range", "need ||k|| < alpha < inf|a_n|");
    const CoeffFunction kf = apply_kernel(k, anchor_f);
    std::vector<double> diff(anchor_f.size());
    for (std::size_t m = 0; m < anchor_f.size(); ++m)
        diff[m] = kf.coeffs[m] + omega_s.coeffs[m] - a.a_seq[m] * anchor_f.coeffs[m];
    return l2_norm(CoeffFunction(std::move(diff))) / (alpha - kn);
}

} // namespace stochfred
