#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stochfred/basis.hpp"
#include "stochfred/config.hpp"
#include "stochfred/diagnostics.hpp"
#include "stochfred/errors.hpp"
#include "stochfred/kernel.hpp"
#include "stochfred/quadrature.hpp"
#include "stochfred/report.hpp"
#include "stochfred/solvers.hpp"

namespace stochfred {

struct RunRow {
    double s = 0.0;
    double residual = 0.0;
    double solution_norm = 0.0;
    std::size_t iterations = 0;
    std::size_t bound_passed = 0;
    std::size_t bound_total = 0;
    bool flagged = false;
};

struct RunReport {
    std::vector<RunRow> rows;
    ConditionDiagnostic conditions;
    bool forced = false;
    bool bounds_guaranteed = true;
    std::uint64_t seed = 0;
    bool seeded = false;
    double timing_seconds = 0.0;
    std::string config_echo;
    std::vector<std::string> warnings;

    bool all_ok() const {
        if (!conditions.passes && !forced) return false;
        for (const auto& r : rows)
            if (r.flagged) return false;
        return true;
    }

    // Machine-readable emission; 17 significant digits, fixed column set.
    std::string csv() const {
        std::string out = "s,residual,solution_norm,iterations,bound_checks_passed,bound_checks_total\n";
        char buf[128];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%zu,%zu,%zu\n", r.s, r.residual,
                          r.solution_norm, r.iterations, r.bound_passed, r.bound_total);
            out += buf;
        }
        return out;
    }

    std::string table() const {
        std::string out;
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "conditions: %s  (covering=%.6g, modulus=%.6g%s)\n",
                      conditions.passes ? "pass" : (forced ? "FAIL (forced)" : "FAIL"),
                      conditions.covering_constant, conditions.lipschitz_modulus,
                      conditions.zero_kernel ? ", zero-kernel" : "");
        out += buf;
        if (!conditions.reasons.empty()) {
            out += "reasons:";
            for (const auto& r : conditions.reasons) out += " [" + r + "]";
            out += "\n";
        }
        if (!bounds_guaranteed) out += "error bound: not guaranteed (hypotheses fail)\n";
        if (seeded) out += "seed: " + std::to_string(seed) + "\n";
        for (const auto& w : warnings) out += "warning: " + w + "\n";
        out += "        s          residual      solution_norm  iters  bounds\n";
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%13.6g  %16.6e  %16.6e  %5zu  %zu/%zu%s\n", r.s,
                          r.residual, r.solution_norm, r.iterations, r.bound_passed,
                          r.bound_total, r.flagged ? "  FLAGGED" : "");
            out += buf;
        }
        std::snprintf(buf, sizeof(buf), "elapsed: %.3f s\n", timing_seconds);
        out += buf;
        return out;
    }
};

namespace runner_detail {

inline std::vector<double> sweep_samples(const ProblemConfig& cfg) {
    std::vector<double> s;
    switch (cfg.sweep_kind) {
    case ProblemConfig::SweepKind::list:
        s = cfg.sweep_values;
        break;
    case ProblemConfig::SweepKind::grid: {
        const std::size_t n = std::max<std::size_t>(1, cfg.sweep_count);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = n == 1 ? 0.0
                                    : static_cast<double>(i) / static_cast<double>(n - 1);
            s.push_back(cfg.s_min + t * (cfg.s_max - cfg.s_min));
        }
        break;
    }
    case ProblemConfig::SweepKind::random: {
        std::mt19937_64 rng(cfg.seed);
        for (std::size_t i = 0; i < cfg.sweep_count; ++i) {
            // Explicit 53-bit mapping keeps the stream platform-independent.
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            s.push_back(cfg.s_min + u * (cfg.s_max - cfg.s_min));
        }
        break;
    }
    }
    std::sort(s.begin(), s.end());
    return s;
}

} // namespace runner_detail

inline RunReport run_problem(const ProblemConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    report.forced = cfg.force;
    report.seeded = cfg.sweep_kind == ProblemConfig::SweepKind::random;
    report.seed = cfg.seed;
    report.config_echo = serialize_config(cfg);

    const std::vector<double> samples = runner_detail::sweep_samples(cfg);

    if (cfg.kernel_kind == ProblemConfig::KernelKind::coeff) {
        const std::size_t n = cfg.coeff_n;
        std::vector<double> gs(n), hs(n), as(n);
        for (std::size_t i = 1; i <= n; ++i) {
            gs[i - 1] = eval_seq(cfg.kernel_g_seq, 0.0, i);
            hs[i - 1] = eval_seq(cfg.kernel_h_seq, 0.0, i);
            as[i - 1] = cfg.has_a_seq ? eval_seq(cfg.a_seq, 0.0, i) : 1.0;
        }
        const CoeffFunction gc(gs, seq_tail_l2(cfg.kernel_g_seq, n, 0.0));
        const CoeffFunction hc(hs, seq_tail_l2(cfg.kernel_h_seq, n, 0.0));
        const double kernel_tail = gc.tail_bound * l2_norm(hc) + l2_norm(gc) * hc.tail_bound +
                                   gc.tail_bound * hc.tail_bound;
        const Kernel k = CoeffMatrixKernel::rank_one(gc, hc, kernel_tail);
        MultiplicationOperator mult(as);
        if (!cfg.has_a_seq) {
            mult.analytic_inf = 1.0;
            mult.analytic_sup = 1.0;
        }

        report.conditions = check_conditions_coefficient(mult, k);
        if (!report.conditions.passes && !cfg.force)
            fail("condition-violated", "coefficient hypotheses fail; rerun with force");
        report.bounds_guaranteed = report.conditions.passes;

        const double kn = hs_norm(k);
        const double inf_a = mult_covering_constant(mult).truncated_inf;
        const double alpha = cfg.alpha_midpoint ? 0.5 * (kn + inf_a) : cfg.alpha;
        const bool alpha_ok = kn < alpha && alpha < inf_a;
        if (!alpha_ok) report.warnings.push_back("no admissible alpha; bound checks skipped");

        for (double s : samples) {
            RunRow row;
            row.s = s;
            try {
                std::vector<double> wn(n);
                for (std::size_t i = 1; i <= n; ++i) wn[i - 1] = eval_seq(cfg.noise_seq, s, i);
                const CoeffFunction omega_s(wn, seq_tail_l2(cfg.noise_seq, n, s));
                const auto method = cfg.solver == ProblemConfig::SolverName::coeff_direct
                                        ? CoeffMethod::direct
                                        : CoeffMethod::iterative;
                SolveReport sr = solve_coefficient_system(mult, k, omega_s, method, cfg.force,
                                                          cfg.tol, cfg.max_iter);
                row.residual = sr.residual_norm;
                row.solution_norm = sr.solution_norm();
                row.iterations = sr.iterations;
                if (alpha_ok) {
                    const CoeffFunction zero(std::vector<double>(n, 0.0));
                    const double rhs = error_bound_rhs(mult, k, omega_s, zero, alpha);
                    const double lhs = l2_norm(sr.coeff_solution());
                    row.bound_total = 1;
                    row.bound_passed = lhs <= rhs + 1e-12 ? 1 : 0;
                }
                row.flagged =
                    row.residual > cfg.residual_tol || row.bound_passed != row.bound_total;
            } catch (const Error& e) {
                // Per-row propagation: a failed sample flags its row and the
                // sweep continues.
                row.flagged = true;
                row.residual = std::numeric_limits<double>::infinity();
                report.warnings.push_back("s = " + config_detail::num_str(s) + ": " + e.what());
            }
            report.rows.push_back(row);
        }
    } else {
        const GridPtr grid = make_grid(cfg.effective_a(), cfg.effective_b(), cfg.panels,
                                       "gauss-legendre-" + std::to_string(cfg.order));
        const GridFunction g = sample_func(cfg.kernel_g, grid, 0.0);
        const GridFunction h = sample_func(cfg.kernel_h, grid, 0.0);
        const Kernel k = cfg.kernel_kind == ProblemConfig::KernelKind::tensor
                             ? Kernel(TensorProductKernel{g, h})
                             : Kernel(GridSamplesKernel::from_tensor(TensorProductKernel{g, h}));

        report.conditions = check_conditions_kernel(k, cfg.lambda);
        if (!report.conditions.passes && !cfg.force)
            fail("condition-violated", "kernel hypotheses fail; rerun with force");
        report.bounds_guaranteed = report.conditions.passes;
        if (cfg.solver == ProblemConfig::SolverName::family && !cfg.force) {
            const Kernel cut(truncate_kernel_param(k, cfg.family_start));
            if (!(hs_norm(cut) > 0.0))
                fail("condition-violated", "kernel mass below family_start vanishes");
        }

        NoiseFamily omega;
        omega.s_min = cfg.s_min;
        omega.s_max = cfg.s_max;
        const FuncExpr noise_expr = cfg.noise_expr;
        omega.grid_eval = [noise_expr, grid](double s) {
            return sample_func(noise_expr, grid, s);
        };

        const double kn = hs_norm(k);
        const double alpha = cfg.alpha_midpoint ? 0.5 * (kn + std::abs(cfg.lambda)) : cfg.alpha;
        const bool alpha_ok = kn < alpha && alpha < std::abs(cfg.lambda);
        if (!alpha_ok) report.warnings.push_back("no admissible alpha; bound checks skipped");

        std::vector<std::pair<std::string, GridFunction>> anchors;
        if (cfg.anchor_zero) anchors.emplace_back("zero", GridFunction::zero(grid));
        for (std::size_t i = 0; i < cfg.anchors.size(); ++i)
            anchors.emplace_back("anchor-" + std::to_string(i + 1),
                                 sample_func(cfg.anchors[i], grid, 0.0));

        const bool family = cfg.solver == ProblemConfig::SolverName::family;
        double worst_cut_gap = 0.0;
        for (double s : samples) {
            RunRow row;
            row.s = s;
            try {
                const GridFunction omega_s = omega.grid_at(s);
                Kernel sample_kernel = k;
                if (family) {
                    if (s < cfg.family_start)
                        fail("parameter-out-of-range", "sample below family_start");
                    auto cut = truncate_kernel_param(k, s);
                    worst_cut_gap = std::max(worst_cut_gap, cut.cut_gap);
                    sample_kernel = std::move(cut);
                }
                SolveReport sr = [&]() {
                    switch (cfg.solver) {
                    case ProblemConfig::SolverName::closed_form:
                        return solve_tensor_closed_form(g, h, cfg.lambda, omega, s, cfg.force);
                    case ProblemConfig::SolverName::neumann:
                    case ProblemConfig::SolverName::family:
                        return solve_neumann(sample_kernel, cfg.lambda, omega_s, cfg.tol,
                                             cfg.max_iter);
                    default:
                        fail("parse-error", "solver/kernel mismatch");
                    }
                }();

                row.residual = sr.residual_norm;
                row.solution_norm = sr.solution_norm();
                row.iterations = sr.iterations;
                if (alpha_ok) {
                    // For the family, the bound applies to the per-sample cut
                    // kernel; alpha stays admissible since ||k_s|| <= ||k||.
                    evaluate_bound_checks(sr, sample_kernel, cfg.lambda, omega_s, anchors, alpha);
                    row.bound_total = sr.bound_checks.size();
                    for (const auto& bc : sr.bound_checks)
                        if (bc.pass) ++row.bound_passed;
                }
                row.flagged =
                    row.residual > cfg.residual_tol || row.bound_passed != row.bound_total;
            } catch (const Error& e) {
                row.flagged = true;
                row.residual = std::numeric_limits<double>::infinity();
                report.warnings.push_back("s = " + config_detail::num_str(s) + ": " + e.what());
            }
            report.rows.push_back(row);
        }
        if (family && worst_cut_gap > 0.0) {
            char buf[96];
            std::snprintf(buf, sizeof(buf),
                          "largest node gap straddling a cut: %.3g (quadrature uncertainty)",
                          worst_cut_gap);
            report.warnings.push_back(buf);
        }
    }

    report.timing_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace stochfred
