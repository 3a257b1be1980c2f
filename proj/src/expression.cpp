#include "cutfem/expression.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace cutfem {

struct expression::node {
    enum kind_t { NUM, VAR, ADD, SUB, MUL, DIV, POW, NEG, FUN } kind;
    double value = 0.0;
    std::string fun;
    std::shared_ptr<const node> a, b;
};

namespace {

using node_ptr = std::shared_ptr<const expression::node>;

} // namespace

namespace detail_expr {

using node = expression::node;
using ptr = std::shared_ptr<const node>;

ptr num(double v) {
    auto n = std::make_shared<node>();
    n->kind = node::NUM;
    n->value = v;
    return n;
}
ptr var() {
    auto n = std::make_shared<node>();
    n->kind = node::VAR;
    return n;
}
ptr mk(node::kind_t k, ptr a, ptr b = nullptr) {
    auto n = std::make_shared<node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}
ptr fun(const std::string& f, ptr a) {
    auto n = std::make_shared<node>();
    n->kind = node::FUN;
    n->fun = f;
    n->a = std::move(a);
    return n;
}

struct parser {
    const std::string& s;
    size_t i = 0;

    explicit parser(const std::string& text) : s(text) {}

    void skip() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("expression parse error at position " + std::to_string(i) + ": " + what + " in '" + s + "'");
    }

    ptr parse() {
        ptr e = expr();
        skip();
        if (i != s.size()) fail("trailing input");
        return e;
    }
    ptr expr() {
        ptr e = term();
        for (;;) {
            if (eat('+')) e = mk(node::ADD, e, term());
            else if (eat('-')) e = mk(node::SUB, e, term());
            else return e;
        }
    }
    ptr term() {
        ptr e = factor();
        for (;;) {
            if (eat('*')) e = mk(node::MUL, e, factor());
            else if (eat('/')) e = mk(node::DIV, e, factor());
            else return e;
        }
    }
    ptr factor() {
        ptr e = unary();
        if (eat('^')) return mk(node::POW, e, factor()); // right associative
        return e;
    }
    ptr unary() {
        if (eat('-')) return mk(node::NEG, unary());
        eat('+');
        return primary();
    }
    ptr primary() {
        skip();
        if (i >= s.size()) fail("unexpected end");
        char c = s[i];
        if (std::isdigit((unsigned char)c) || c == '.') {
            size_t j;
            double v = std::stod(s.substr(i), &j);
            i += j;
            return num(v);
        }
        if (c == '(') {
            ++i;
            ptr e = expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (std::isalpha((unsigned char)c)) {
            size_t j = i;
            while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
            std::string name = s.substr(i, j - i);
            i = j;
            if (name == "t" || name == "theta" || name == "x") return var();
            if (name == "pi") return num(M_PI);
            if (name == "e") return num(M_E);
            if (eat('(')) {
                ptr a = expr();
                if (!eat(')')) fail("missing ')' after " + name);
                return fun(name, a);
            }
            fail("unknown identifier '" + name + "'");
        }
        fail("unexpected character");
    }
};

double eval_node(const node* n, double t) {
    switch (n->kind) {
    case node::NUM: return n->value;
    case node::VAR: return t;
    case node::ADD: return eval_node(n->a.get(), t) + eval_node(n->b.get(), t);
    case node::SUB: return eval_node(n->a.get(), t) - eval_node(n->b.get(), t);
    case node::MUL: return eval_node(n->a.get(), t) * eval_node(n->b.get(), t);
    case node::DIV: return eval_node(n->a.get(), t) / eval_node(n->b.get(), t);
    case node::POW: return std::pow(eval_node(n->a.get(), t), eval_node(n->b.get(), t));
    case node::NEG: return -eval_node(n->a.get(), t);
    case node::FUN: {
        double a = eval_node(n->a.get(), t);
        if (n->fun == "sin") return std::sin(a);
        if (n->fun == "cos") return std::cos(a);
        if (n->fun == "tan") return std::tan(a);
        if (n->fun == "exp") return std::exp(a);
        if (n->fun == "log") return std::log(a);
        if (n->fun == "sqrt") return std::sqrt(a);
        if (n->fun == "abs") return std::abs(a);
        if (n->fun == "sinh") return std::sinh(a);
        if (n->fun == "cosh") return std::cosh(a);
        throw std::invalid_argument("unknown function " + n->fun);
    }
    }
    throw std::logic_error("bad node");
}

ptr diff(const ptr& n);

ptr diff_fun(const ptr& n) {
    const ptr& a = n->a;
    ptr da = diff(a);
    const std::string& f = n->fun;
    if (f == "sin") return mk(node::MUL, fun("cos", a), da);
    if (f == "cos") return mk(node::NEG, mk(node::MUL, fun("sin", a), da));
    if (f == "tan") {
        ptr sec2 = mk(node::DIV, num(1.0), mk(node::POW, fun("cos", a), num(2.0)));
        return mk(node::MUL, sec2, da);
    }
    if (f == "exp") return mk(node::MUL, fun("exp", a), da);
    if (f == "log") return mk(node::DIV, da, a);
    if (f == "sqrt") return mk(node::DIV, da, mk(node::MUL, num(2.0), fun("sqrt", a)));
    if (f == "abs") return mk(node::MUL, mk(node::DIV, a, fun("abs", a)), da);
    if (f == "sinh") return mk(node::MUL, fun("cosh", a), da);
    if (f == "cosh") return mk(node::MUL, fun("sinh", a), da);
    throw std::invalid_argument("cannot differentiate " + f);
}

ptr diff(const ptr& n) {
    switch (n->kind) {
    case node::NUM: return num(0.0);
    case node::VAR: return num(1.0);
    case node::ADD: return mk(node::ADD, diff(n->a), diff(n->b));
    case node::SUB: return mk(node::SUB, diff(n->a), diff(n->b));
    case node::MUL:
        return mk(node::ADD, mk(node::MUL, diff(n->a), n->b), mk(node::MUL, n->a, diff(n->b)));
    case node::DIV:
        return mk(node::DIV,
                  mk(node::SUB, mk(node::MUL, diff(n->a), n->b), mk(node::MUL, n->a, diff(n->b))),
                  mk(node::POW, n->b, num(2.0)));
    case node::POW: {
        // d/dt a^b = a^b (b' log a + b a'/a); constant-exponent shortcut for the common case
        if (n->b->kind == node::NUM) {
            double e = n->b->value;
            return mk(node::MUL, mk(node::MUL, num(e), mk(node::POW, n->a, num(e - 1.0))), diff(n->a));
        }
        ptr loga = fun("log", n->a);
        ptr inner = mk(node::ADD, mk(node::MUL, diff(n->b), loga),
                       mk(node::DIV, mk(node::MUL, n->b, diff(n->a)), n->a));
        return mk(node::MUL, mk(node::POW, n->a, n->b), inner);
    }
    case node::NEG: return mk(node::NEG, diff(n->a));
    case node::FUN: return diff_fun(n);
    }
    throw std::logic_error("bad node");
}

} // namespace detail_expr

expression::expression(const std::string& text) : text_(text) {
    detail_expr::parser p(text);
    root_ = p.parse();
}

expression::expression(std::shared_ptr<const node> r) : root_(std::move(r)), text_("<derived>") {}

double expression::eval(double t) const {
    if (!root_) throw std::logic_error("empty expression");
    return detail_expr::eval_node(root_.get(), t);
}

expression expression::derivative() const {
    if (!root_) throw std::logic_error("empty expression");
    return expression(detail_expr::diff(root_));
}

} // namespace cutfem
