#include "qys/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <numbers>

namespace qys {
namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    int dim;
    const std::map<std::string, double>* constants;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ConfigError("expression parse error at offset " + std::to_string(pos) + ": " + msg +
                          " in \"" + std::string(text) + "\"");
    }

    static ExprPtr make(ExprOp op, ExprPtr a = nullptr, ExprPtr b = nullptr) {
        auto n = std::make_shared<ExprNode>();
        n->op = op;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    static ExprPtr number(double v) {
        auto n = std::make_shared<ExprNode>();
        n->op = ExprOp::number;
        n->value = v;
        return n;
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        while (true) {
            if (eat('+')) {
                lhs = make(ExprOp::add, lhs, term());
            } else if (eat('-')) {
                lhs = make(ExprOp::sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        while (true) {
            if (eat('*')) {
                lhs = make(ExprOp::mul, lhs, factor());
            } else if (eat('/')) {
                lhs = make(ExprOp::div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr factor() {
        if (eat('-')) return make(ExprOp::neg, factor());
        if (eat('+')) return factor();
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (eat('^')) return make(ExprOp::pow, base, factor());  // right associative
        return base;
    }

    ExprPtr atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        const char c = text[pos];
        if (c == '(') {
            ++pos;
            ExprPtr inner = expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    ExprPtr parse_number() {
        const char* begin = text.data() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("bad numeric literal");
        pos += static_cast<std::size_t>(end - begin);
        return number(v);
    }

    ExprPtr parse_ident() {
        const std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        const std::string name(text.substr(start, pos - start));

        if (peek() == '(') {
            ++pos;  // consume '('
            if (name == "pow") {
                ExprPtr a = expr();
                if (!eat(',')) fail("pow expects two arguments");
                ExprPtr b = expr();
                if (!eat(')')) fail("expected ')'");
                return make(ExprOp::pow, a, b);
            }
            ExprOp op;
            if (name == "exp") {
                op = ExprOp::exp;
            } else if (name == "ln" || name == "log") {
                op = ExprOp::ln;
            } else if (name == "sin") {
                op = ExprOp::sin;
            } else if (name == "cos") {
                op = ExprOp::cos;
            } else if (name == "sinh") {
                op = ExprOp::sinh;
            } else if (name == "cosh") {
                op = ExprOp::cosh;
            } else {
                fail("unknown function '" + name + "'");
            }
            ExprPtr a = expr();
            if (!eat(')')) fail("expected ')'");
            return make(op, a);
        }

        // coordinate x1..xn
        if (name.size() >= 2 && name[0] == 'x') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
            if (digits) {
                const int k = std::atoi(name.c_str() + 1);
                if (k < 1 || k > dim)
                    fail("coordinate '" + name + "' outside chart dimension " + std::to_string(dim));
                auto n = std::make_shared<ExprNode>();
                n->op = ExprOp::coord;
                n->index = k - 1;
                return n;
            }
        }

        if (name == "pi") return number(std::numbers::pi);
        if (constants) {
            auto it = constants->find(name);
            if (it != constants->end()) return number(it->second);
        }
        fail("unknown identifier '" + name + "'");
    }
};

}  // namespace

ExprPtr parse_expression(const std::string& text, int dim,
                         const std::map<std::string, double>& constants) {
    Parser p{text, 0, dim, &constants};
    ExprPtr root = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return root;
}

}  // namespace qys
