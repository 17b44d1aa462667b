// Command-line front end: solve a problem-definition file, check its
// hypotheses, or reproduce one of the built-in reference examples.
//
// Exit codes: 0 all-pass, 1 any failed row or check, 2 usage/parse errors.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "stochfred/stochfred.hpp"

namespace {

constexpr const char* kUsage =
    "usage: stochfred <command> [args]\n"
    "\n"
    "commands:\n"
    "  solve <config-file> [--out <csv-path>] [--force] [--seed <u64>]\n"
    "  check <config-file>\n"
    "  reproduce <example-name|all>   (ex2.1 ex3.3 ex3.7 ex4.4 ex4.5 ex4.6 ex4.11)\n";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) stochfred::fail("parse-error", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_solve(const std::vector<std::string>& args) {
    std::string config_path;
    std::string out_path;
    bool force = false;
    bool have_seed = false;
    std::uint64_t seed = 0;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out") {
            if (++i >= args.size()) {
                std::cerr << "missing value for --out\n" << kUsage;
                return 2;
            }
            out_path = args[i];
        } else if (args[i] == "--force") {
            force = true;
        } else if (args[i] == "--seed") {
            if (++i >= args.size()) {
                std::cerr << "missing value for --seed\n" << kUsage;
                return 2;
            }
            seed = std::stoull(args[i]);
            have_seed = true;
        } else if (config_path.empty()) {
            config_path = args[i];
        } else {
            std::cerr << "unexpected argument '" << args[i] << "'\n" << kUsage;
            return 2;
        }
    }
    if (config_path.empty()) {
        std::cerr << "missing config file\n" << kUsage;
        return 2;
    }

    stochfred::ProblemConfig cfg = stochfred::parse_config(read_file(config_path));
    if (force) cfg.force = true;
    if (have_seed) cfg.seed = seed;

    const stochfred::RunReport report = stochfred::run_problem(cfg);
    std::cout << report.table();
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write '" << out_path << "'\n";
            return 2;
        }
        out << report.csv();
    }
    return report.all_ok() ? 0 : 1;
}

int cmd_check(const std::vector<std::string>& args) {
    if (args.size() != 1) {
        std::cerr << "check takes exactly one config file\n" << kUsage;
        return 2;
    }
    const stochfred::ProblemConfig cfg = stochfred::parse_config(read_file(args[0]));

    stochfred::ConditionDiagnostic d;
    if (cfg.kernel_kind == stochfred::ProblemConfig::KernelKind::coeff) {
        const std::size_t n = cfg.coeff_n;
        std::vector<double> gs(n), hs(n), as(n);
        for (std::size_t i = 1; i <= n; ++i) {
            gs[i - 1] = stochfred::eval_seq(cfg.kernel_g_seq, 0.0, i);
            hs[i - 1] = stochfred::eval_seq(cfg.kernel_h_seq, 0.0, i);
            as[i - 1] = cfg.has_a_seq ? stochfred::eval_seq(cfg.a_seq, 0.0, i) : 1.0;
        }
        const auto k = stochfred::CoeffMatrixKernel::rank_one(stochfred::CoeffFunction(gs),
                                                              stochfred::CoeffFunction(hs));
        stochfred::MultiplicationOperator mult(as);
        if (!cfg.has_a_seq) {
            mult.analytic_inf = 1.0;
            mult.analytic_sup = 1.0;
        }
        d = stochfred::check_conditions_coefficient(mult, stochfred::Kernel(k));
    } else {
        const auto grid = stochfred::make_grid(cfg.effective_a(), cfg.effective_b(), cfg.panels,
                                               "gauss-legendre-" + std::to_string(cfg.order));
        const auto g = stochfred::sample_func(cfg.kernel_g, grid, 0.0);
        const auto h = stochfred::sample_func(cfg.kernel_h, grid, 0.0);
        d = stochfred::check_conditions_kernel(
            stochfred::Kernel(stochfred::TensorProductKernel{g, h}), cfg.lambda);
    }

    std::printf("modulus (||k||)   : %.12g\n", d.lipschitz_modulus);
    std::printf("covering constant : %.12g\n", d.covering_constant);
    if (d.has_alpha_interval)
        std::printf("admissible alpha  : (%.12g, %.12g)\n", d.alpha_low, d.alpha_high);
    std::printf("conditions        : %s\n", d.passes ? "pass" : "FAIL");
    for (const auto& r : d.reasons) std::printf("  reason: %s\n", r.c_str());
    return d.passes ? 0 : 1;
}

int cmd_reproduce(const std::vector<std::string>& args) {
    if (args.size() != 1) {
        std::cerr << "reproduce takes exactly one example name\n" << kUsage;
        return 2;
    }
    std::vector<std::string> names;
    if (args[0] == "all") names = stochfred::reproduce_names();
    else names.push_back(args[0]);

    bool all_pass = true;
    for (const auto& name : names) {
        const auto result = stochfred::reproduce_example(name);
        std::cout << result.table();
        all_pass = all_pass && result.passed();
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) {
        std::cerr << kUsage;
        return 2;
    }
    const std::string command = args.front();
    args.erase(args.begin());
    try {
        if (command == "solve") return cmd_solve(args);
        if (command == "check") return cmd_check(args);
        if (command == "reproduce") return cmd_reproduce(args);
        std::cerr << "unknown command '" << command << "'\n" << kUsage;
        return 2;
    } catch (const stochfred::Error& e) {
        const std::string code = e.code();
        std::cerr << "error: " << e.what() << "\n";
        // Malformed input is a usage problem; everything else is a failed run.
        if (code == "parse-error" || code == "unknown-function" || code == "invalid-domain" ||
            code == "unknown-example" || code == "unknown-rule")
            return 2;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
