#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "stochfred/errors.hpp"
#include "stochfred/grid_function.hpp"

namespace stochfred {

// Closed vocabulary of function expressions in (s, v):
//   monomial(k), sin, cos, exp_quad(c) for e^{-c v^2},
//   cauchy_sqrt for (1 + v^2)^{-1/2}, indicator(l, r),
// combined by '*' and '+'/'-', with numeric literals (decimal or p/q) and
// parameter monomials s^k as multipliers.
//
// Sequence expressions in (s, n) use the same combinators over
//   geometric(r) for r^n and inv_linear(c0, c1) for 1/(c0 + c1 n).

namespace expr_detail {

struct Monomial { int k = 0; };
struct SinF {};
struct CosF {};
struct ExpQuad { double c = 1.0; };
struct CauchySqrt {};
struct Indicator { double l = 0.0, r = 0.0; };
using FuncPrim = std::variant<Monomial, SinF, CosF, ExpQuad, CauchySqrt, Indicator>;

struct Geometric { double r = 0.0; };
struct InvLinear { double c0 = 1.0, c1 = 1.0; };
using SeqPrim = std::variant<Geometric, InvLinear>;

inline double eval(const FuncPrim& p, double v) {
    if (const auto* m = std::get_if<Monomial>(&p)) return std::pow(v, m->k);
    if (std::holds_alternative<SinF>(p)) return std::sin(v);
    if (std::holds_alternative<CosF>(p)) return std::cos(v);
    if (const auto* e = std::get_if<ExpQuad>(&p)) return std::exp(-e->c * v * v);
    if (std::holds_alternative<CauchySqrt>(p)) return 1.0 / std::sqrt(1.0 + v * v);
    const auto& ind = std::get<Indicator>(p);
    return (v >= ind.l && v <= ind.r) ? 1.0 : 0.0;
}

inline double eval(const SeqPrim& p, std::size_t n) {
    if (const auto* g = std::get_if<Geometric>(&p))
        return std::pow(g->r, static_cast<double>(n));
    const auto& il = std::get<InvLinear>(p);
    return 1.0 / (il.c0 + il.c1 * static_cast<double>(n));
}

inline std::string num_str(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string to_string(const FuncPrim& p) {
    if (const auto* m = std::get_if<Monomial>(&p))
        return "monomial(" + std::to_string(m->k) + ")";
    if (std::holds_alternative<SinF>(p)) return "sin";
    if (std::holds_alternative<CosF>(p)) return "cos";
    if (const auto* e = std::get_if<ExpQuad>(&p)) return "exp_quad(" + num_str(e->c) + ")";
    if (std::holds_alternative<CauchySqrt>(p)) return "cauchy_sqrt";
    const auto& ind = std::get<Indicator>(p);
    return "indicator(" + num_str(ind.l) + ", " + num_str(ind.r) + ")";
}

inline std::string to_string(const SeqPrim& p) {
    if (const auto* g = std::get_if<Geometric>(&p)) return "geometric(" + num_str(g->r) + ")";
    const auto& il = std::get<InvLinear>(p);
    return "inv_linear(" + num_str(il.c0) + ", " + num_str(il.c1) + ")";
}

} // namespace expr_detail

template <typename Prim>
struct ExprTerm {
    double scale = 1.0;
    int s_power = 0;
    std::vector<Prim> factors;
};

// Sum of products; the normal form both parse and serialize work with.
template <typename Prim>
struct Expr {
    std::vector<ExprTerm<Prim>> terms;

    bool uses_parameter() const {
        for (const auto& t : terms)
            if (t.s_power != 0) return true;
        return false;
    }

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const auto& t = terms[i];
            double scale = t.scale;
            if (i == 0) {
                if (scale < 0.0) out += "-";
            } else {
                out += scale < 0.0 ? " - " : " + ";
            }
            scale = std::abs(scale);
            std::vector<std::string> parts;
            if (scale != 1.0 || (t.s_power == 0 && t.factors.empty()))
                parts.push_back(expr_detail::num_str(scale));
            if (t.s_power == 1) parts.push_back("s");
            else if (t.s_power != 0) parts.push_back("s^" + std::to_string(t.s_power));
            for (const auto& f : t.factors) parts.push_back(expr_detail::to_string(f));
            for (std::size_t j = 0; j < parts.size(); ++j) {
                if (j) out += " * ";
                out += parts[j];
            }
        }
        return out;
    }
};

using FuncExpr = Expr<expr_detail::FuncPrim>;
using SeqExpr = Expr<expr_detail::SeqPrim>;

inline double eval_func(const FuncExpr& e, double s, double v) {
    double acc = 0.0;
    for (const auto& t : e.terms) {
        double prod = t.scale * std::pow(s, t.s_power);
        for (const auto& f : t.factors) prod *= expr_detail::eval(f, v);
        acc += prod;
    }
    return acc;
}

inline double eval_seq(const SeqExpr& e, double s, std::size_t n) {
    double acc = 0.0;
    for (const auto& t : e.terms) {
        double prod = t.scale * std::pow(s, t.s_power);
        for (const auto& f : t.factors) prod *= expr_detail::eval(f, n);
        acc += prod;
    }
    return acc;
}

inline GridFunction sample_func(const FuncExpr& e, const GridPtr& grid, double s) {
    return GridFunction::sample(grid, [&](double v) { return eval_func(e, s, v); });
}

// l2 bound on the omitted entries past n = N, by term. Geometric factors give
// the closed-form tail; pure inv_linear terms use the integral bound; a term
// with no decaying factor is not square-summable and reports infinity.
inline double seq_tail_l2(const SeqExpr& e, std::size_t n_trunc, double s) {
    double total = 0.0;
    for (const auto& t : e.terms) {
        double coeff = std::abs(t.scale * std::pow(s, t.s_power));
        double geo_ratio = 1.0;
        bool has_geo = false;
        double inv_head = 1.0;
        const expr_detail::InvLinear* last_inv = nullptr;
        for (const auto& f : t.factors) {
            if (const auto* g = std::get_if<expr_detail::Geometric>(&f)) {
                geo_ratio *= std::abs(g->r);
                has_geo = true;
            } else {
                const auto& il = std::get<expr_detail::InvLinear>(f);
                if (last_inv) inv_head *= expr_detail::eval(expr_detail::SeqPrim(*last_inv),
                                                            n_trunc + 1);
                last_inv = &il;
            }
        }
        if (has_geo) {
            if (geo_ratio >= 1.0) return std::numeric_limits<double>::infinity();
            double head = inv_head;
            if (last_inv) head *= expr_detail::eval(expr_detail::SeqPrim(*last_inv), n_trunc + 1);
            total += coeff * head * std::pow(geo_ratio, static_cast<double>(n_trunc + 1)) /
                     std::sqrt(1.0 - geo_ratio * geo_ratio);
        } else if (last_inv) {
            if (!(last_inv->c1 > 0.0)) return std::numeric_limits<double>::infinity();
            const double integral = 1.0 / (last_inv->c1 *
                                           (last_inv->c0 + last_inv->c1 * static_cast<double>(n_trunc)));
            total += coeff * inv_head * std::sqrt(integral);
        } else if (coeff != 0.0) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser shared by both vocabularies.

namespace expr_detail {

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            fail("parse-error", std::string("expected '") + c + "' in expression '" + text + "'");
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        return text.substr(start, pos - start);
    }
    double number() {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
            ++pos;
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            ++pos;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        if (pos == start)
            fail("parse-error", "expected a number in expression '" + text + "'");
        double value = std::stod(text.substr(start, pos - start));
        if (accept('/')) {
            const double denom = number();
            if (denom == 0.0) fail("parse-error", "division by zero in numeric literal");
            value /= denom;
        }
        return value;
    }
    int integer() {
        const double v = number();
        const int k = static_cast<int>(std::lround(v));
        if (static_cast<double>(k) != v)
            fail("parse-error", "expected an integer in expression '" + text + "'");
        return k;
    }
};

inline bool starts_number(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+';
}

template <typename Prim, typename PrimParser>
Expr<Prim> parse_expr(const std::string& text, PrimParser parse_prim) {
    Lexer lex{text};
    Expr<Prim> e;
    bool negate_first = lex.accept('-');
    for (;;) {
        ExprTerm<Prim> term;
        if (negate_first) {
            term.scale = -1.0;
            negate_first = false;
        }
        for (;;) {
            if (starts_number(lex.peek())) {
                term.scale *= lex.number();
            } else {
                const std::size_t save = lex.pos;
                std::string name = lex.ident();
                if (name.empty())
                    fail("parse-error", "expected a factor in expression '" + text + "'");
                if (name == "s") {
                    if (lex.accept('^')) term.s_power += lex.integer();
                    else term.s_power += 1;
                } else {
                    lex.pos = save;
                    term.factors.push_back(parse_prim(lex));
                }
            }
            if (!lex.accept('*')) break;
        }
        e.terms.push_back(std::move(term));
        if (lex.accept('+')) continue;
        if (lex.accept('-')) {
            negate_first = true;
            continue;
        }
        break;
    }
    if (!lex.done())
        fail("parse-error", "trailing input in expression '" + text + "'");
    return e;
}

inline FuncPrim parse_func_prim(Lexer& lex) {
    const std::string name = lex.ident();
    if (name == "monomial") {
        lex.expect('(');
        const int k = lex.integer();
        lex.expect(')');
        if (k < 0) fail("parse-error", "monomial degree must be nonnegative");
        return Monomial{k};
    }
    if (name == "sin") return SinF{};
    if (name == "cos") return CosF{};
    if (name == "exp_quad") {
        lex.expect('(');
        const double c = lex.number();
        lex.expect(')');
        return ExpQuad{c};
    }
    if (name == "cauchy_sqrt") return CauchySqrt{};
    if (name == "indicator") {
        lex.expect('(');
        const double l = lex.number();
        lex.expect(',');
        const double r = lex.number();
        lex.expect(')');
        if (!(l <= r)) fail("parse-error", "indicator needs l <= r");
        return Indicator{l, r};
    }
    fail("unknown-function", "'" + name + "' is not in the function vocabulary");
}

inline SeqPrim parse_seq_prim(Lexer& lex) {
    const std::string name = lex.ident();
    if (name == "geometric") {
        lex.expect('(');
        const double r = lex.number();
        lex.expect(')');
        return Geometric{r};
    }
    if (name == "inv_linear") {
        lex.expect('(');
        const double c0 = lex.number();
        lex.expect(',');
        const double c1 = lex.number();
        lex.expect(')');
        return InvLinear{c0, c1};
    }
    fail("unknown-function", "'" + name + "' is not in the sequence vocabulary");
}

} // namespace expr_detail

inline FuncExpr parse_func_expr(const std::string& text) {
    return expr_detail::parse_expr<expr_detail::FuncPrim>(text, expr_detail::parse_func_prim);
}

inline SeqExpr parse_seq_expr(const std::string& text) {
    return expr_detail::parse_expr<expr_detail::SeqPrim>(text, expr_detail::parse_seq_prim);
}

} // namespace stochfred
