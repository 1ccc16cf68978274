#include "cornerhom/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

namespace cornerhom {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sqrt, Exp };

struct Expression::Node {
    Op op = Op::Const;
    double constant = 0;
    int axis = 0;
    std::shared_ptr<const Node> a, b;
};

using NodePtr = std::shared_ptr<const Expression::Node>;

ExpressionError::ExpressionError(const std::string& what, std::size_t column)
    : std::invalid_argument(what + " at column " + std::to_string(column)), column_(column) {}

namespace {

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_constant(double c) {
    auto n = std::make_shared<Expression::Node>();
    n->constant = c;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    NodePtr parse() {
        auto e = expr();
        skip();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ExpressionError(what, pos_ + 1); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr expr() {
        auto left = term();
        for (;;) {
            if (accept('+')) left = make(Op::Add, left, term());
            else if (accept('-')) left = make(Op::Sub, left, term());
            else return left;
        }
    }
    NodePtr term() {
        auto left = unary();
        for (;;) {
            if (accept('*')) left = make(Op::Mul, left, unary());
            else if (accept('/')) left = make(Op::Div, left, unary());
            else return left;
        }
    }
    NodePtr unary() {
        if (accept('-')) {
            auto inner = unary();
            if (inner->op == Op::Const) return make_constant(-inner->constant);
            return make(Op::Neg, inner);
        }
        if (accept('+')) return unary();
        return power();
    }
    NodePtr power() {
        auto base = primary();
        if (accept('^')) return make(Op::Pow, base, unary());
        return base;
    }
    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (accept('(')) {
            auto e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "x" || name == "y" || name == "z") {
                auto n = std::make_shared<Expression::Node>();
                n->op = Op::Var;
                n->axis = name[0] - 'x';
                return n;
            }
            if (name == "sqrt" || name == "exp") {
                expect('(');
                auto arg = expr();
                expect(')');
                return make(name == "sqrt" ? Op::Sqrt : Op::Exp, arg);
            }
            if (name == "pow") {
                expect('(');
                auto a = expr();
                expect(',');
                auto b = expr();
                expect(')');
                return make(Op::Pow, a, b);
            }
            pos_ = start;
            fail("unknown name '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
    NodePtr number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return make_constant(v);
    }
};

bool integer_constant(const NodePtr& n, int& out) {
    if (n->op != Op::Const || std::nearbyint(n->constant) != n->constant || std::abs(n->constant) > 64) return false;
    out = static_cast<int>(n->constant);
    return true;
}

double eval(const NodePtr& n, const Vec3& p) {
    switch (n->op) {
        case Op::Const: return n->constant;
        case Op::Var: return p[static_cast<std::size_t>(n->axis)];
        case Op::Add: return eval(n->a, p) + eval(n->b, p);
        case Op::Sub: return eval(n->a, p) - eval(n->b, p);
        case Op::Mul: return eval(n->a, p) * eval(n->b, p);
        case Op::Div: return eval(n->a, p) / eval(n->b, p);
        case Op::Neg: return -eval(n->a, p);
        case Op::Sqrt: return std::sqrt(eval(n->a, p));
        case Op::Exp: return std::exp(eval(n->a, p));
        case Op::Pow: {
            int k = 0;
            if (integer_constant(n->b, k)) {
                const double t = eval(n->a, p);
                double r = 1;
                for (int i = 0; i < std::abs(k); ++i) r *= t;
                return k < 0 ? 1 / r : r;
            }
            return std::pow(eval(n->a, p), eval(n->b, p));
        }
    }
    return 0;
}

// phi(a) given phi', phi''
Jet chain(const Jet& a, double v, double d1, double d2) {
    Jet r;
    r.value = v;
    for (int i = 0; i < 3; ++i) r.gradient[i] = d1 * a.gradient[i];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.hessian[i][j] = d1 * a.hessian[i][j] + d2 * a.gradient[i] * a.gradient[j];
    return r;
}

Jet product(const Jet& a, const Jet& b) {
    Jet r;
    r.value = a.value * b.value;
    for (int i = 0; i < 3; ++i) r.gradient[i] = a.value * b.gradient[i] + b.value * a.gradient[i];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.hessian[i][j] = a.value * b.hessian[i][j] + b.value * a.hessian[i][j] + a.gradient[i] * b.gradient[j] +
                              b.gradient[i] * a.gradient[j];
    return r;
}

Jet linear(const Jet& a, double sa, const Jet& b, double sb) {
    Jet r;
    r.value = sa * a.value + sb * b.value;
    for (int i = 0; i < 3; ++i) {
        r.gradient[i] = sa * a.gradient[i] + sb * b.gradient[i];
        for (int j = 0; j < 3; ++j) r.hessian[i][j] = sa * a.hessian[i][j] + sb * b.hessian[i][j];
    }
    return r;
}

Jet log_jet(const Jet& a) { return chain(a, std::log(a.value), 1 / a.value, -1 / (a.value * a.value)); }

Jet exp_jet(const Jet& a) {
    const double e = std::exp(a.value);
    return chain(a, e, e, e);
}

Jet jet_of(const NodePtr& n, const Vec3& p) {
    switch (n->op) {
        case Op::Const: {
            Jet r;
            r.value = n->constant;
            return r;
        }
        case Op::Var: {
            Jet r;
            r.value = p[static_cast<std::size_t>(n->axis)];
            r.gradient[static_cast<std::size_t>(n->axis)] = 1;
            return r;
        }
        case Op::Add: return linear(jet_of(n->a, p), 1, jet_of(n->b, p), 1);
        case Op::Sub: return linear(jet_of(n->a, p), 1, jet_of(n->b, p), -1);
        case Op::Neg: return linear(jet_of(n->a, p), -1, Jet{}, 0);
        case Op::Mul: return product(jet_of(n->a, p), jet_of(n->b, p));
        case Op::Div: {
            const Jet b = jet_of(n->b, p);
            const double t = b.value;
            return product(jet_of(n->a, p), chain(b, 1 / t, -1 / (t * t), 2 / (t * t * t)));
        }
        case Op::Sqrt: {
            const Jet a = jet_of(n->a, p);
            const double s = std::sqrt(a.value);
            return chain(a, s, 0.5 / s, -0.25 / (s * a.value));
        }
        case Op::Exp: return exp_jet(jet_of(n->a, p));
        case Op::Pow: {
            const Jet a = jet_of(n->a, p);
            int k = 0;
            if (integer_constant(n->b, k)) {
                if (k == 0) return chain(a, 1, 0, 0);
                auto ipow = [](double t, int e) {
                    double r = 1;
                    for (int i = 0; i < std::abs(e); ++i) r *= t;
                    return e < 0 ? 1 / r : r;
                };
                const double t = a.value;
                return chain(a, ipow(t, k), k * ipow(t, k - 1), k * (k - 1) * (k == 1 ? 0 : ipow(t, k - 2)));
            }
            if (n->b->op == Op::Const) {
                const double c = n->b->constant, t = a.value;
                return chain(a, std::pow(t, c), c * std::pow(t, c - 1), c * (c - 1) * std::pow(t, c - 2));
            }
            return exp_jet(product(jet_of(n->b, p), log_jet(a)));
        }
    }
    return {};
}

std::string format_constant(double c) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    std::string s = buf;
    return c < 0 ? "(" + s + ")" : s;
}

std::string print(const NodePtr& n) {
    switch (n->op) {
        case Op::Const: return format_constant(n->constant);
        case Op::Var: return std::string(1, static_cast<char>('x' + n->axis));
        case Op::Add: return "(" + print(n->a) + " + " + print(n->b) + ")";
        case Op::Sub: return "(" + print(n->a) + " - " + print(n->b) + ")";
        case Op::Mul: return "(" + print(n->a) + " * " + print(n->b) + ")";
        case Op::Div: return "(" + print(n->a) + " / " + print(n->b) + ")";
        case Op::Pow: return "(" + print(n->a) + " ^ " + print(n->b) + ")";
        case Op::Neg: return "(-" + print(n->a) + ")";
        case Op::Sqrt: return "sqrt(" + print(n->a) + ")";
        case Op::Exp: return "exp(" + print(n->a) + ")";
    }
    return "?";
}

}  // namespace

Expression::Expression() : root_(make_constant(0)) {}

Expression Expression::parse(const std::string& text) { return Expression(Parser(text).parse()); }

Expression Expression::constant(double c) { return Expression(make_constant(c)); }

Expression Expression::variable(int axis) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("variable axis must be 0, 1 or 2");
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->axis = axis;
    return Expression(n);
}

double Expression::value(const Vec3& p) const { return eval(root_, p); }

Jet Expression::jet(const Vec3& p) const { return jet_of(root_, p); }

Expression Expression::operator-() const { return Expression(make(Op::Neg, root_)); }

std::string Expression::to_string() const { return print(root_); }

}  // namespace cornerhom
