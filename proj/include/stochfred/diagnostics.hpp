#pragma once

#include <optional>
#include <string>
#include <vector>

namespace stochfred {

// Outcome of checking the contraction hypotheses for one problem instance.
// covering_constant is the covering constant of the left-hand operator,
// lipschitz_modulus the modulus of the right-hand perturbation.
struct ConditionDiagnostic {
    double kernel_norm = 0.0;
    double lambda_abs = 0.0;
    double covering_constant = 0.0;
    double lipschitz_modulus = 0.0;
    bool has_alpha_interval = false;
    double alpha_low = 0.0;   // open below
    double alpha_high = 0.0;  // open above
    bool passes = false;
    bool zero_kernel = false; // strict positivity of the modulus fails degenerately
    std::vector<std::string> reasons;

    double alpha_midpoint() const { return 0.5 * (alpha_low + alpha_high); }
};

// One evaluation of the a-posteriori distance bound for a chosen anchor.
struct BoundCheck {
    std::string anchor;
    double alpha = 0.0;
    double lhs = 0.0; // ||sigma - anchor||
    double rhs = 0.0; // residual-at-anchor / (alpha - modulus)
    bool pass = false;
    bool guaranteed = true; // false when the hypotheses failed and the run was forced
};

struct ScalarCovering {
    double value = 0.0;
    bool within_hypothesis = true; // |lambda| <= 1 in the stated result
};

} // namespace stochfred
