#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stochfred/basis.hpp"
#include "stochfred/diagnostics.hpp"
#include "stochfred/grid_function.hpp"

namespace stochfred {

// Parameter-indexed noise family omega(s). Grid and coefficient evaluators
// may both be present; solvers pick the representation they need.
struct NoiseFamily {
    std::function<GridFunction(double)> grid_eval;
    std::function<CoeffFunction(double)> coeff_eval;
    double s_min = 0.0;
    double s_max = 1.0;

    GridFunction grid_at(double s) const {
        if (!grid_eval) fail("representation-mismatch", "noise family has no grid evaluator");
        return grid_eval(s);
    }
    CoeffFunction coeff_at(double s) const {
        if (!coeff_eval) fail("representation-mismatch", "noise family has no coefficient evaluator");
        return coeff_eval(s);
    }
};

// Everything a solve reports: the solution, an independently recomputed
// residual, iteration statistics, the condition diagnostic, and any
// a-posteriori bound checks evaluated afterwards.
struct SolveReport {
    std::variant<GridFunction, CoeffFunction> solution;
    double residual_norm = 0.0;
    std::size_t iterations = 0; // 0 for closed forms
    std::optional<double> contraction_estimate;
    ConditionDiagnostic condition_diagnostic;
    std::vector<BoundCheck> bound_checks;
    std::vector<std::string> warnings;

    const GridFunction& grid_solution() const {
        if (const auto* g = std::get_if<GridFunction>(&solution)) return *g;
        fail("representation-mismatch", "report holds a coefficient solution");
    }
    const CoeffFunction& coeff_solution() const {
        if (const auto* c = std::get_if<CoeffFunction>(&solution)) return *c;
        fail("representation-mismatch", "report holds a grid solution");
    }
    double solution_norm() const {
        if (const auto* g = std::get_if<GridFunction>(&solution)) return l2_norm(*g);
        return l2_norm(std::get<CoeffFunction>(solution));
    }
};

} // namespace stochfred
