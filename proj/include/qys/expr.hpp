// Closed-form field expressions: a fixed grammar over chart coordinates and
// named constants, evaluable at double or nested-dual scalars.
//
// Grammar: + - * / ^, pow(a,b), exp, ln, sin, cos, sinh, cosh, unary minus,
// parentheses, numeric literals, coordinates x1..xn, named constants (pi is
// built in; others come from the FieldSpec parameter map and are folded into
// the tree at parse time).
#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qys/dual.hpp"
#include "qys/errors.hpp"

namespace qys {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

enum class ExprOp {
    number,   // literal or folded constant
    coord,    // x_i
    add, sub, mul, div, pow,
    neg,
    exp, ln, sin, cos, sinh, cosh,
};

struct ExprNode {
    ExprOp op;
    double value = 0.0;  // number
    int index = 0;       // coord
    ExprPtr a, b;
};

/// Parse an expression over coordinates x1..x`dim`. Throws ConfigError on
/// syntax errors, unknown identifiers, or coordinate indices beyond dim.
ExprPtr parse_expression(const std::string& text, int dim,
                         const std::map<std::string, double>& constants = {});

template <typename T>
T eval_expression(const ExprNode& e, std::span<const T> x) {
    switch (e.op) {
        case ExprOp::number: return T(e.value);
        case ExprOp::coord: return x[e.index];
        case ExprOp::add: return eval_expression(*e.a, x) + eval_expression(*e.b, x);
        case ExprOp::sub: return eval_expression(*e.a, x) - eval_expression(*e.b, x);
        case ExprOp::mul: return eval_expression(*e.a, x) * eval_expression(*e.b, x);
        case ExprOp::div: return eval_expression(*e.a, x) / eval_expression(*e.b, x);
        case ExprOp::pow: {
            // exponents that are plain numbers keep the power rule exact at
            // zero and negative bases
            if (e.b->op == ExprOp::number) return pow(eval_expression(*e.a, x), e.b->value);
            return pow(eval_expression(*e.a, x), eval_expression(*e.b, x));
        }
        case ExprOp::neg: return -eval_expression(*e.a, x);
        case ExprOp::exp: return exp(eval_expression(*e.a, x));
        case ExprOp::ln: return log(eval_expression(*e.a, x));
        case ExprOp::sin: return sin(eval_expression(*e.a, x));
        case ExprOp::cos: return cos(eval_expression(*e.a, x));
        case ExprOp::sinh: return sinh(eval_expression(*e.a, x));
        case ExprOp::cosh: return cosh(eval_expression(*e.a, x));
    }
    throw ConfigError("corrupt expression tree");
}

}  // namespace qys
