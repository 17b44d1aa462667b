#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "stochfred/config.hpp"
#include "stochfred/expr.hpp"
#include "stochfred/reproduce.hpp"
#include "stochfred/runner.hpp"

using namespace stochfred;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kMinimalTensor =
    "[problem]\n"
    "a = -1\n"
    "b = 1\n"
    "lambda = 0.9\n"
    "[kernel]\n"
    "type = tensor\n"
    "g = monomial(2)\n"
    "h = monomial(4)\n"
    "[noise]\n"
    "expr = s^2 * monomial(2)\n"
    "[sweep]\n"
    "kind = list\n"
    "values = 0.25 0.5 1\n"
    "[solver]\n"
    "name = closed_form\n";

} // namespace

TEST_CASE("expression vocabulary evaluates against direct lambdas") {
    const auto mono = parse_func_expr("monomial(3)");
    CHECK(eval_func(mono, 0.0, 2.0) == doctest::Approx(8.0));

    const auto combo = parse_func_expr("2 * monomial(1) + 0.5 * sin - cos");
    CHECK(eval_func(combo, 0.0, 1.3) ==
          doctest::Approx(2.0 * 1.3 + 0.5 * std::sin(1.3) - std::cos(1.3)).epsilon(1e-15));

    const auto with_s = parse_func_expr("s^2 * monomial(2)");
    CHECK(eval_func(with_s, 0.5, 3.0) == doctest::Approx(0.25 * 9.0));
    CHECK(with_s.uses_parameter());

    const auto gaussish = parse_func_expr("0.5 * exp_quad(0.25) * cauchy_sqrt");
    CHECK(eval_func(gaussish, 0.0, 1.5) ==
          doctest::Approx(0.5 * std::exp(-0.25 * 2.25) / std::sqrt(1.0 + 2.25)).epsilon(1e-15));

    const auto cut = parse_func_expr("s * monomial(1) * indicator(-1, 1)");
    CHECK(eval_func(cut, 2.0, 0.5) == doctest::Approx(1.0));
    CHECK(eval_func(cut, 2.0, 1.5) == 0.0);

    // Fractions parse to their quotient.
    const auto frac = parse_seq_expr("s^2 * geometric(1/4)");
    CHECK(eval_seq(frac, 2.0, 2) == doctest::Approx(4.0 / 16.0));

    const auto inv = parse_seq_expr("inv_linear(1, 1)");
    CHECK(eval_seq(inv, 0.0, 4) == doctest::Approx(0.2));

    CHECK_THROWS_WITH_AS(parse_func_expr("tan"), doctest::Contains("unknown-function"), Error);
    CHECK_THROWS_WITH_AS(parse_func_expr("monomial(2) +"), doctest::Contains("parse-error"), Error);
    CHECK_THROWS_WITH_AS(parse_seq_expr("monomial(2)"), doctest::Contains("unknown-function"), Error);
}

TEST_CASE("sequence tail bounds honor square-summability") {
    const auto geo = parse_seq_expr("geometric(0.5)");
    // Tail of 0.5^n beyond N: 0.5^{N+1} / sqrt(1 - 0.25).
    const double tail = seq_tail_l2(geo, 10, 0.0);
    CHECK(tail == doctest::Approx(std::pow(0.5, 11) / std::sqrt(0.75)).epsilon(1e-12));
    double exact = 0.0;
    for (int n = 11; n < 200; ++n) exact += std::pow(0.5, 2 * n);
    CHECK(tail >= std::sqrt(exact));

    const auto flat = parse_seq_expr("1");
    CHECK(std::isinf(seq_tail_l2(flat, 10, 0.0)));

    const auto inv = parse_seq_expr("inv_linear(1, 1)");
    double inv_exact = 0.0;
    for (int n = 11; n < 2000000; ++n) inv_exact += 1.0 / ((1.0 + n) * (1.0 + n));
    CHECK(seq_tail_l2(inv, 10, 0.0) >= std::sqrt(inv_exact));
}

TEST_CASE("the shipped quartic config parses to the documented problem") {
    const auto cfg = parse_config(slurp("configs/example-4.4.cfg"));
    CHECK(cfg.domain_a == -1.0);
    CHECK(cfg.domain_b == 1.0);
    CHECK(cfg.lambda == doctest::Approx(0.9));
    CHECK(cfg.kernel_kind == ProblemConfig::KernelKind::tensor);
    CHECK(cfg.kernel_g.to_string() == "monomial(2)");
    CHECK(cfg.kernel_h.to_string() == "monomial(4)");
    CHECK(cfg.noise_expr.to_string() == "s^2 * monomial(2)");
    CHECK(cfg.solver == ProblemConfig::SolverName::closed_form);
}

TEST_CASE("parse_config error paths") {
    CHECK_THROWS_WITH_AS(parse_config(""), doctest::Contains("parse-error"), Error);
    CHECK_THROWS_WITH_AS(parse_config("[problem]\nbogus_key = 1\n"),
                         doctest::Contains("parse-error"), Error);
    CHECK_THROWS_WITH_AS(parse_config("[weird]\na = 1\n"),
                         doctest::Contains("parse-error"), Error);

    std::string bad = kMinimalTensor;
    bad.replace(bad.find("g = monomial(2)"), 15, "g = tan");
    CHECK_THROWS_WITH_AS(parse_config(bad), doctest::Contains("unknown-function"), Error);

    std::string flipped = kMinimalTensor;
    flipped.replace(flipped.find("a = -1"), 6, "a = 2 ");
    CHECK_THROWS_WITH_AS(parse_config(flipped), doctest::Contains("invalid-domain"), Error);

    // Line/column positions reach the message.
    try {
        parse_config("[problem]\na = -1\nb = 1\nwhat = 3\n");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }

    // Kernels and anchors are s-independent by contract.
    std::string s_kernel = kMinimalTensor;
    s_kernel.replace(s_kernel.find("g = monomial(2)"), 15, "g = s * monomial(2)");
    CHECK_THROWS_WITH_AS(parse_config(s_kernel), doctest::Contains("parse-error"), Error);
    CHECK_THROWS_WITH_AS(parse_config(std::string(kMinimalTensor) +
                                      "[bounds]\nanchor = s * monomial(1)\n"),
                         doctest::Contains("parse-error"), Error);
}

TEST_CASE("anchor bookkeeping: expression anchors do not imply the zero anchor") {
    const auto cfg = parse_config(std::string(kMinimalTensor) +
                                  "[bounds]\nanchor = monomial(2)\n");
    CHECK_FALSE(cfg.anchor_zero);
    CHECK(cfg.anchors.size() == 1);

    const auto both = parse_config(std::string(kMinimalTensor) +
                                   "[bounds]\nanchor = zero\nanchor = monomial(2)\n");
    CHECK(both.anchor_zero);
    CHECK(both.anchors.size() == 1);

    const auto none = parse_config(kMinimalTensor);
    CHECK(none.anchor_zero);
    CHECK(none.anchors.empty());
}

TEST_CASE("serialize(parse(text)) is a normal form") {
    for (const char* path : {"configs/example-4.4.cfg", "configs/example-4.5.cfg",
                             "configs/example-4.6.cfg", "configs/example-4.11.cfg",
                             "configs/example-4.4-family.cfg"}) {
        const std::string text = slurp(path);
        const std::string normalized = serialize_config(parse_config(text));
        CHECK(serialize_config(parse_config(normalized)) == normalized);
    }
}

TEST_CASE("run_problem on the quartic closed-form config") {
    auto cfg = parse_config(slurp("configs/example-4.4.cfg"));
    REQUIRE(cfg.sweep_count == 11);
    const auto report = run_problem(cfg);
    REQUIRE(report.rows.size() == 11);
    CHECK(report.conditions.passes);
    for (const auto& row : report.rows) {
        CHECK(row.residual < 1e-8);
        CHECK(row.bound_total >= 1);
        CHECK(row.bound_passed == row.bound_total);
        CHECK_FALSE(row.flagged);
    }
    CHECK(report.all_ok());
}

TEST_CASE("run_problem reproduces the geometric coefficient solution") {
    const auto cfg = parse_config(slurp("configs/example-4.11.cfg"));
    const auto report = run_problem(cfg);
    CHECK(report.all_ok());
    REQUIRE(report.rows.size() == 11);
    // Row s-values are sorted; norms must match the explicit representation.
    for (const auto& row : report.rows) {
        double norm2 = 0.0;
        for (std::size_t m = 1; m <= 50; ++m) {
            const double c = (5.0 / 44.0 + std::pow(0.5, static_cast<double>(m))) * row.s * row.s *
                             std::pow(0.5, static_cast<double>(m));
            norm2 += c * c;
        }
        CHECK(row.solution_norm == doctest::Approx(std::sqrt(norm2)).epsilon(1e-12));
    }
}

TEST_CASE("condition violations stop a run unless forced") {
    std::string text = kMinimalTensor;
    text.replace(text.find("lambda = 0.9"), 12, "lambda = 0.1");
    const auto cfg = parse_config(text);
    CHECK_THROWS_WITH_AS(run_problem(cfg), doctest::Contains("condition-violated"), Error);

    auto forced = cfg;
    forced.force = true;
    const auto report = run_problem(forced);
    CHECK_FALSE(report.conditions.passes);
    CHECK_FALSE(report.bounds_guaranteed);
    CHECK(report.rows.size() == 3);
    for (const auto& row : report.rows) CHECK(row.residual < 1e-8);
}

TEST_CASE("per-row solver errors flag the row and the sweep continues") {
    std::string text = kMinimalTensor;
    text.replace(text.find("lambda = 0.9"), 12, "lambda = 0.1");
    text.replace(text.find("name = closed_form"), 18, "name = neumann    ");
    auto cfg = parse_config(text);
    cfg.force = true;
    // Divergent contraction: every sample fails in the solver, not the run.
    const auto report = run_problem(cfg);
    REQUIRE(report.rows.size() == 3);
    for (const auto& row : report.rows) {
        CHECK(row.flagged);
        CHECK(std::isinf(row.residual));
    }
    CHECK_FALSE(report.all_ok());
    CHECK(!report.warnings.empty());
}

TEST_CASE("reports are deterministic byte for byte") {
    std::string text = kMinimalTensor;
    text.replace(text.find("kind = list\nvalues = 0.25 0.5 1"),
                 std::string("kind = list\nvalues = 0.25 0.5 1").size(),
                 "kind = random\ncount = 7\ns_min = 0\ns_max = 1\nseed = 12345");
    const auto cfg = parse_config(text);
    const auto a = run_problem(cfg);
    const auto b = run_problem(cfg);
    CHECK(a.csv() == b.csv());
    CHECK(a.rows.size() == 7);
    CHECK(a.seeded);
    CHECK(a.seed == 12345);

    // Different seed, different samples.
    auto other = cfg;
    other.seed = 54321;
    CHECK(run_problem(other).csv() != a.csv());
}

TEST_CASE("csv layout is fixed and 17-digit") {
    const auto cfg = parse_config(kMinimalTensor);
    const auto report = run_problem(cfg);
    const std::string csv = report.csv();
    CHECK(csv.rfind("s,residual,solution_norm,iterations,bound_checks_passed,bound_checks_total\n",
                    0) == 0);
    // One header plus one line per row.
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + report.rows.size());
    CHECK(csv.find("0.25") != std::string::npos);
}

TEST_CASE("family solver through the runner keeps norms monotone") {
    const auto cfg = parse_config(slurp("configs/example-4.4-family.cfg"));
    const auto report = run_problem(cfg);
    CHECK(report.all_ok());
    for (const auto& row : report.rows) CHECK(row.residual < 1e-8);
}

TEST_CASE("reproduce_example covers all seven names") {
    for (const auto& name : reproduce_names()) {
        const auto result = reproduce_example(name);
        CHECK(result.passed());
        CHECK(result.table().find("tol") != std::string::npos);
    }
    CHECK_THROWS_WITH_AS(reproduce_example("ex9.9"), doctest::Contains("unknown-example"), Error);
}
