#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stochfred/errors.hpp"
#include "stochfred/expr.hpp"

namespace stochfred {

// Parsed problem definition. Flat key-value grammar with '#' comments and
// sections [problem], [kernel], [noise], [sweep], [solver], [bounds];
// unknown sections and keys are rejected with line/column positions.
struct ProblemConfig {
    // [problem]
    bool unbounded = false;
    double domain_a = -1.0;
    double domain_b = 1.0;
    double truncation_l = 8.0; // half-width used when unbounded
    double lambda = 1.0;
    std::size_t panels = 8;
    std::size_t order = 8;
    bool force = false;

    // [kernel]
    enum class KernelKind { tensor, grid, coeff };
    KernelKind kernel_kind = KernelKind::tensor;
    FuncExpr kernel_g;
    FuncExpr kernel_h;
    SeqExpr kernel_g_seq;
    SeqExpr kernel_h_seq;
    std::size_t coeff_n = 64;

    // [noise]
    FuncExpr noise_expr;     // grid problems, in (s, v)
    SeqExpr noise_seq;       // coefficient problems, in (s, n)
    bool has_noise_expr = false;
    bool has_noise_seq = false;

    // [sweep]
    enum class SweepKind { grid, random, list };
    SweepKind sweep_kind = SweepKind::grid;
    std::size_t sweep_count = 11;
    double s_min = 0.0;
    double s_max = 1.0;
    std::uint64_t seed = 0;
    std::vector<double> sweep_values;

    // [solver]
    enum class SolverName { closed_form, neumann, coeff_direct, coeff_iterative, family };
    SolverName solver = SolverName::closed_form;
    double tol = 1e-10;
    std::size_t max_iter = 10000;
    double family_start = 0.0;
    SeqExpr a_seq; // multiplication operator entries for coefficient problems
    bool has_a_seq = false;

    // [bounds]
    bool alpha_midpoint = true;
    double alpha = 0.0;
    std::vector<FuncExpr> anchors; // in addition to the implied zero anchor
    bool anchor_zero = true;
    double residual_tol = 1e-8;

    double effective_a() const { return unbounded ? -truncation_l : domain_a; }
    double effective_b() const { return unbounded ? truncation_l : domain_b; }
};

namespace config_detail {

struct Line {
    std::size_t number = 0;
    std::string section;
    std::string key;
    std::string value;
    std::size_t value_col = 0;
};

[[noreturn]] inline void parse_fail(std::size_t line, std::size_t col, const std::string& what) {
    fail("parse-error", "line " + std::to_string(line) + ", column " + std::to_string(col) +
                            ": " + what);
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline double to_real(const Line& ln) {
    try {
        std::size_t used = 0;
        // Reuse the expression lexer so fractions like 1/3 stay legal here.
        expr_detail::Lexer lex{ln.value};
        const double v = lex.number();
        used = lex.pos;
        lex.skip_ws();
        if (lex.pos != ln.value.size())
            parse_fail(ln.number, ln.value_col + used, "trailing characters after number");
        return v;
    } catch (const Error& e) {
        if (std::string(e.code()) == "parse-error" && ln.value.empty())
            parse_fail(ln.number, ln.value_col, "expected a number");
        throw;
    }
}

inline std::size_t to_count(const Line& ln) {
    const double v = to_real(ln);
    if (v < 0 || v != std::floor(v))
        parse_fail(ln.number, ln.value_col, "expected a nonnegative integer");
    return static_cast<std::size_t>(v);
}

inline bool to_flag(const Line& ln) {
    if (ln.value == "true" || ln.value == "yes" || ln.value == "1") return true;
    if (ln.value == "false" || ln.value == "no" || ln.value == "0") return false;
    parse_fail(ln.number, ln.value_col, "expected true or false");
}

inline std::vector<double> to_real_list(const Line& ln) {
    std::vector<double> out;
    std::istringstream iss(ln.value);
    std::string tok;
    while (iss >> tok) {
        expr_detail::Lexer lex{tok};
        out.push_back(lex.number());
        lex.skip_ws();
        if (lex.pos != tok.size())
            parse_fail(ln.number, ln.value_col, "bad number '" + tok + "' in list");
    }
    if (out.empty()) parse_fail(ln.number, ln.value_col, "expected a list of numbers");
    return out;
}

inline std::string num_str(double x) { return expr_detail::num_str(x); }

} // namespace config_detail

inline ProblemConfig parse_config(const std::string& text) {
    using config_detail::Line;
    using config_detail::parse_fail;
    using config_detail::trim;

    if (trim(text).empty()) fail("parse-error", "line 1, column 1: empty configuration");

    ProblemConfig cfg;
    cfg.anchor_zero = false; // re-enabled below when no anchor key appears
    bool saw_kernel_type = false;
    bool saw_anchor_key = false;

    std::istringstream stream(text);
    std::string raw;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(stream, raw)) {
        ++lineno;
        const std::string stripped = trim(raw.substr(0, raw.find('#')));
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                parse_fail(lineno, raw.find('[') + 1, "unterminated section header");
            section = stripped.substr(1, stripped.size() - 2);
            if (section != "problem" && section != "kernel" && section != "noise" &&
                section != "sweep" && section != "solver" && section != "bounds")
                parse_fail(lineno, 1, "unknown section '" + section + "'");
            continue;
        }
        const std::string content = raw.substr(0, raw.find('#'));
        const std::size_t eq = content.find('=');
        if (eq == std::string::npos || section.empty())
            parse_fail(lineno, 1, "expected 'key = value' inside a section");
        Line ln;
        ln.number = lineno;
        ln.section = section;
        ln.key = trim(content.substr(0, eq));
        ln.value = trim(content.substr(eq + 1));
        ln.value_col = eq + 2;
        if (ln.key.empty()) parse_fail(lineno, 1, "missing key before '='");

        using config_detail::to_count;
        using config_detail::to_flag;
        using config_detail::to_real;
        using config_detail::to_real_list;

        if (section == "problem") {
            if (ln.key == "a") cfg.domain_a = to_real(ln);
            else if (ln.key == "b") cfg.domain_b = to_real(ln);
            else if (ln.key == "unbounded") cfg.unbounded = to_flag(ln);
            else if (ln.key == "truncation_l") cfg.truncation_l = to_real(ln);
            else if (ln.key == "lambda") cfg.lambda = to_real(ln);
            else if (ln.key == "panels") cfg.panels = to_count(ln);
            else if (ln.key == "order") cfg.order = to_count(ln);
            else if (ln.key == "force") cfg.force = to_flag(ln);
            else parse_fail(lineno, 1, "unknown key '" + ln.key + "' in [problem]");
        } else if (section == "kernel") {
            if (ln.key == "type") {
                saw_kernel_type = true;
                if (ln.value == "tensor") cfg.kernel_kind = ProblemConfig::KernelKind::tensor;
                else if (ln.value == "grid") cfg.kernel_kind = ProblemConfig::KernelKind::grid;
                else if (ln.value == "coeff") cfg.kernel_kind = ProblemConfig::KernelKind::coeff;
                else parse_fail(lineno, ln.value_col, "unknown kernel type '" + ln.value + "'");
            } else if (ln.key == "g") cfg.kernel_g = parse_func_expr(ln.value);
            else if (ln.key == "h") cfg.kernel_h = parse_func_expr(ln.value);
            else if (ln.key == "g_seq") cfg.kernel_g_seq = parse_seq_expr(ln.value);
            else if (ln.key == "h_seq") cfg.kernel_h_seq = parse_seq_expr(ln.value);
            else if (ln.key == "n") cfg.coeff_n = to_count(ln);
            else parse_fail(lineno, 1, "unknown key '" + ln.key + "' in [kernel]");
        } else if (section == "noise") {
            if (ln.key == "expr") {
                cfg.noise_expr = parse_func_expr(ln.value);
                cfg.has_noise_expr = true;
            } else if (ln.key == "seq") {
                cfg.noise_seq = parse_seq_expr(ln.value);
                cfg.has_noise_seq = true;
            } else parse_fail(lineno, 1, "unknown key '" + ln.key + "' in [noise]");
        } else if (section == "sweep") {
            if (ln.key == "kind") {
                if (ln.value == "grid") cfg.sweep_kind = ProblemConfig::SweepKind::grid;
                else if (ln.value == "random") cfg.sweep_kind = ProblemConfig::SweepKind::random;
                else if (ln.value == "list") cfg.sweep_kind = ProblemConfig::SweepKind::list;
                else parse_fail(lineno, ln.value_col, "unknown sweep kind '" + ln.value + "'");
            } else if (ln.key == "count") cfg.sweep_count = to_count(ln);
            else if (ln.key == "s_min") cfg.s_min = to_real(ln);
            else if (ln.key == "s_max") cfg.s_max = to_real(ln);
            else if (ln.key == "seed") cfg.seed = static_cast<std::uint64_t>(to_count(ln));
            else if (ln.key == "values") cfg.sweep_values = to_real_list(ln);
            else parse_fail(lineno, 1, "unknown key '" + ln.key + "' in [sweep]");
        } else if (section == "solver") {
            if (ln.key == "name") {
                if (ln.value == "closed_form") cfg.solver = ProblemConfig::SolverName::closed_form;
                else if (ln.value == "neumann") cfg.solver = ProblemConfig::SolverName::neumann;
                else if (ln.value == "coeff_direct") cfg.solver = ProblemConfig::SolverName::coeff_direct;
                else if (ln.value == "coeff_iterative") cfg.solver = ProblemConfig::SolverName::coeff_iterative;
                else if (ln.value == "family") cfg.solver = ProblemConfig::SolverName::family;
                else parse_fail(lineno, ln.value_col, "unknown solver '" + ln.value + "'");
            } else if (ln.key == "tol") cfg.tol = to_real(ln);
            else if (ln.key == "max_iter") cfg.max_iter = to_count(ln);
            else if (ln.key == "family_start") cfg.family_start = to_real(ln);
            else if (ln.key == "a_seq") {
                cfg.a_seq = parse_seq_expr(ln.value);
                cfg.has_a_seq = true;
            } else parse_fail(lineno, 1, "unknown key '" + ln.key + "' in [solver]");
        } else if (section == "bounds") {
            if (ln.key == "alpha") {
                if (ln.value == "midpoint") cfg.alpha_midpoint = true;
                else {
                    cfg.alpha_midpoint = false;
                    cfg.alpha = to_real(ln);
                }
            } else if (ln.key == "anchor") {
                saw_anchor_key = true;
                if (ln.value == "zero") cfg.anchor_zero = true;
                else cfg.anchors.push_back(parse_func_expr(ln.value));
            } else if (ln.key == "residual_tol") cfg.residual_tol = to_real(ln);
            else parse_fail(lineno, 1, "unknown key '" + ln.key + "' in [bounds]");
        }
    }

    if (!saw_anchor_key) cfg.anchor_zero = true;
    (void)saw_kernel_type;

    // Cross-field validation.
    if (!(cfg.effective_a() < cfg.effective_b()))
        fail("invalid-domain", "domain must satisfy a < b");
    if (cfg.unbounded && !(cfg.truncation_l > 0.0))
        fail("invalid-domain", "truncation_l must be positive");
    if (cfg.kernel_g.uses_parameter() || cfg.kernel_h.uses_parameter() ||
        cfg.kernel_g_seq.uses_parameter() || cfg.kernel_h_seq.uses_parameter())
        fail("parse-error", "kernel expressions must not depend on s");
    for (const auto& a : cfg.anchors)
        if (a.uses_parameter()) fail("parse-error", "anchor expressions must not depend on s");
    const bool coeff_problem = cfg.kernel_kind == ProblemConfig::KernelKind::coeff;
    if (coeff_problem && !cfg.anchors.empty())
        fail("parse-error", "coefficient problems support only the zero anchor");
    if (coeff_problem && !cfg.has_noise_seq)
        fail("parse-error", "coefficient kernels need a sequence noise ([noise] seq = ...)");
    if (!coeff_problem && !cfg.has_noise_expr)
        fail("parse-error", "grid problems need a function noise ([noise] expr = ...)");
    if (coeff_problem) {
        const bool coeff_solver = cfg.solver == ProblemConfig::SolverName::coeff_direct ||
                                  cfg.solver == ProblemConfig::SolverName::coeff_iterative;
        if (!coeff_solver)
            fail("parse-error", "coefficient kernels need a coefficient solver");
    } else if (cfg.solver == ProblemConfig::SolverName::coeff_direct ||
               cfg.solver == ProblemConfig::SolverName::coeff_iterative) {
        fail("parse-error", "coefficient solvers need a coefficient kernel");
    }
    if (cfg.solver == ProblemConfig::SolverName::closed_form &&
        cfg.kernel_kind != ProblemConfig::KernelKind::tensor)
        fail("parse-error", "the closed-form solver needs a tensor kernel");
    if (cfg.sweep_kind == ProblemConfig::SweepKind::list && cfg.sweep_values.empty())
        fail("parse-error", "list sweeps need values");
    return cfg;
}

// Canonical text form; parse followed by serialize normalizes a config.
inline std::string serialize_config(const ProblemConfig& cfg) {
    using config_detail::num_str;
    std::string out;
    out += "[problem]\n";
    if (cfg.unbounded) {
        out += "unbounded = true\n";
        out += "truncation_l = " + num_str(cfg.truncation_l) + "\n";
    } else {
        out += "a = " + num_str(cfg.domain_a) + "\n";
        out += "b = " + num_str(cfg.domain_b) + "\n";
    }
    out += "lambda = " + num_str(cfg.lambda) + "\n";
    out += "panels = " + std::to_string(cfg.panels) + "\n";
    out += "order = " + std::to_string(cfg.order) + "\n";
    if (cfg.force) out += "force = true\n";

    out += "\n[kernel]\n";
    switch (cfg.kernel_kind) {
    case ProblemConfig::KernelKind::tensor:
        out += "type = tensor\n";
        out += "g = " + cfg.kernel_g.to_string() + "\n";
        out += "h = " + cfg.kernel_h.to_string() + "\n";
        break;
    case ProblemConfig::KernelKind::grid:
        out += "type = grid\n";
        out += "g = " + cfg.kernel_g.to_string() + "\n";
        out += "h = " + cfg.kernel_h.to_string() + "\n";
        break;
    case ProblemConfig::KernelKind::coeff:
        out += "type = coeff\n";
        out += "g_seq = " + cfg.kernel_g_seq.to_string() + "\n";
        out += "h_seq = " + cfg.kernel_h_seq.to_string() + "\n";
        out += "n = " + std::to_string(cfg.coeff_n) + "\n";
        break;
    }

    out += "\n[noise]\n";
    if (cfg.has_noise_expr) out += "expr = " + cfg.noise_expr.to_string() + "\n";
    if (cfg.has_noise_seq) out += "seq = " + cfg.noise_seq.to_string() + "\n";

    out += "\n[sweep]\n";
    switch (cfg.sweep_kind) {
    case ProblemConfig::SweepKind::grid:
        out += "kind = grid\n";
        out += "count = " + std::to_string(cfg.sweep_count) + "\n";
        out += "s_min = " + num_str(cfg.s_min) + "\n";
        out += "s_max = " + num_str(cfg.s_max) + "\n";
        break;
    case ProblemConfig::SweepKind::random:
        out += "kind = random\n";
        out += "count = " + std::to_string(cfg.sweep_count) + "\n";
        out += "s_min = " + num_str(cfg.s_min) + "\n";
        out += "s_max = " + num_str(cfg.s_max) + "\n";
        out += "seed = " + std::to_string(cfg.seed) + "\n";
        break;
    case ProblemConfig::SweepKind::list: {
        out += "kind = list\n";
        out += "values =";
        for (double v : cfg.sweep_values) out += " " + num_str(v);
        out += "\n";
        break;
    }
    }

    out += "\n[solver]\n";
    switch (cfg.solver) {
    case ProblemConfig::SolverName::closed_form: out += "name = closed_form\n"; break;
    case ProblemConfig::SolverName::neumann: out += "name = neumann\n"; break;
    case ProblemConfig::SolverName::coeff_direct: out += "name = coeff_direct\n"; break;
    case ProblemConfig::SolverName::coeff_iterative: out += "name = coeff_iterative\n"; break;
    case ProblemConfig::SolverName::family: out += "name = family\n"; break;
    }
    out += "tol = " + num_str(cfg.tol) + "\n";
    out += "max_iter = " + std::to_string(cfg.max_iter) + "\n";
    if (cfg.solver == ProblemConfig::SolverName::family)
        out += "family_start = " + num_str(cfg.family_start) + "\n";
    if (cfg.has_a_seq) out += "a_seq = " + cfg.a_seq.to_string() + "\n";

    out += "\n[bounds]\n";
    out += cfg.alpha_midpoint ? "alpha = midpoint\n" : "alpha = " + num_str(cfg.alpha) + "\n";
    if (cfg.anchor_zero) out += "anchor = zero\n";
    for (const auto& a : cfg.anchors) out += "anchor = " + a.to_string() + "\n";
    out += "residual_tol = " + num_str(cfg.residual_tol) + "\n";
    return out;
}

} // namespace stochfred
