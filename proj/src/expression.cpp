#include "mildeig/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

namespace mildeig {

namespace {

enum class Op { Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt, Abs };
enum class Var { T, X, U };

}  // namespace

struct Expression::Node {
    enum class Kind { Number, Variable, Unary, Binary, Call } kind;
    double number = 0.0;
    Var var = Var::T;
    Op op = Op::Add;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = v;
    return n;
}

NodePtr make_var(Var v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Variable;
    n->var = v;
    return n;
}

NodePtr make_unary(Op op, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = op == Op::Neg ? Node::Kind::Unary : Node::Kind::Call;
    n->op = op;
    n->lhs = std::move(a);
    return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    Parser(std::string_view src, VarSet allowed) : src_(src), allowed_(allowed) {}

    NodePtr run() {
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            throw ExprSyntaxError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    VarSet allowed_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (true) {
            if (consume('+')) {
                lhs = make_binary(Op::Add, lhs, parse_term());
            } else if (consume('-')) {
                lhs = make_binary(Op::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (true) {
            if (consume('*')) {
                lhs = make_binary(Op::Mul, lhs, parse_unary());
            } else if (consume('/')) {
                lhs = make_binary(Op::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (consume('-')) return make_unary(Op::Neg, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (consume('^')) return make_binary(Op::Pow, base, parse_unary());
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ExprSyntaxError("unexpected end of input", pos_);
        const char c = src_[pos_];

        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            if (!consume(')')) throw ExprSyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ExprSyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr parse_number() {
        double value = 0.0;
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        auto [next, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc())
            throw ExprSyntaxError("malformed numeric literal", pos_);
        pos_ += static_cast<std::size_t>(next - begin);
        return make_number(value);
    }

    NodePtr parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name(src_.substr(start, pos_ - start));

        if (peek() == '(') {
            Op op;
            if (name == "sin") op = Op::Sin;
            else if (name == "cos") op = Op::Cos;
            else if (name == "exp") op = Op::Exp;
            else if (name == "sqrt") op = Op::Sqrt;
            else if (name == "abs") op = Op::Abs;
            else throw UnknownFunction("unknown function '" + name + "'");
            consume('(');
            NodePtr arg = parse_expr();
            if (!consume(')')) throw ExprSyntaxError("expected ')'", pos_);
            return make_unary(op, arg);
        }

        if (name == "pi") return make_number(std::numbers::pi);
        if (name == "e") return make_number(std::numbers::e);
        if (name == "t") {
            if (!allowed_.t) throw UnknownVariable("variable 't' is not allowed here");
            return make_var(Var::T);
        }
        if (name == "x") {
            if (!allowed_.x) throw UnknownVariable("variable 'x' is not allowed here");
            return make_var(Var::X);
        }
        if (name == "u") {
            if (!allowed_.u) throw UnknownVariable("variable 'u' is not allowed here");
            return make_var(Var::U);
        }
        throw UnknownVariable("unknown identifier '" + name + "'");
    }
};

double eval_node(const Node& n, double t, double x, double u) {
    switch (n.kind) {
        case Node::Kind::Number:
            return n.number;
        case Node::Kind::Variable:
            switch (n.var) {
                case Var::T: return t;
                case Var::X: return x;
                case Var::U: return u;
            }
            break;
        case Node::Kind::Unary:
            return -eval_node(*n.lhs, t, x, u);
        case Node::Kind::Call: {
            const double a = eval_node(*n.lhs, t, x, u);
            switch (n.op) {
                case Op::Sin: return std::sin(a);
                case Op::Cos: return std::cos(a);
                case Op::Exp: return std::exp(a);
                case Op::Abs: return std::abs(a);
                case Op::Sqrt:
                    if (a < 0.0) throw EvalError("sqrt of a negative value");
                    return std::sqrt(a);
                default: break;
            }
            break;
        }
        case Node::Kind::Binary: {
            const double a = eval_node(*n.lhs, t, x, u);
            const double b = eval_node(*n.rhs, t, x, u);
            switch (n.op) {
                case Op::Add: return a + b;
                case Op::Sub: return a - b;
                case Op::Mul: return a * b;
                case Op::Div:
                    if (b == 0.0) throw EvalError("division by zero");
                    return a / b;
                case Op::Pow: {
                    const double r = std::pow(a, b);
                    if (!std::isfinite(r)) throw EvalError("non-finite power result");
                    return r;
                }
                default: break;
            }
            break;
        }
    }
    throw EvalError("malformed expression tree");
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Node::Kind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.number);
            out += buf;
            return;
        }
        case Node::Kind::Variable:
            out += n.var == Var::T ? 't' : n.var == Var::X ? 'x' : 'u';
            return;
        case Node::Kind::Unary:
            out += "(-";
            print_node(*n.lhs, out);
            out += ')';
            return;
        case Node::Kind::Call: {
            switch (n.op) {
                case Op::Sin: out += "sin("; break;
                case Op::Cos: out += "cos("; break;
                case Op::Exp: out += "exp("; break;
                case Op::Sqrt: out += "sqrt("; break;
                case Op::Abs: out += "abs("; break;
                default: out += "?("; break;
            }
            print_node(*n.lhs, out);
            out += ')';
            return;
        }
        case Node::Kind::Binary: {
            out += '(';
            print_node(*n.lhs, out);
            switch (n.op) {
                case Op::Add: out += '+'; break;
                case Op::Sub: out += '-'; break;
                case Op::Mul: out += '*'; break;
                case Op::Div: out += '/'; break;
                case Op::Pow: out += '^'; break;
                default: out += '?'; break;
            }
            print_node(*n.rhs, out);
            out += ')';
            return;
        }
    }
}

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

Expression Expression::parse(std::string_view src, VarSet allowed) {
    if (src.empty()) throw ExprSyntaxError("empty expression", 0);
    Parser parser(src, allowed);
    return Expression(parser.run(), std::string(src));
}

double Expression::eval(double t, double x, double u) const {
    return eval_node(*root_, t, x, u);
}

std::string Expression::to_string() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

}  // namespace mildeig
