#include "greenpath/expressions.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace greenpath {

namespace {

enum class Op { Constant, Variable, Time, Add, Sub, Mul, Div, Pow, Neg, Exp, Sin, Cos, Erf };

}  // namespace

struct Expression::Node {
    Op op;
    double value = 0.0;  // Constant
    int index = 0;       // Variable
    std::unique_ptr<Node> lhs, rhs;

    std::unique_ptr<Node> clone() const {
        auto n = std::make_unique<Node>();
        n->op = op;
        n->value = value;
        n->index = index;
        if (lhs) n->lhs = lhs->clone();
        if (rhs) n->rhs = rhs->clone();
        return n;
    }

    double eval(std::span<const double> x, double t) const {
        switch (op) {
            case Op::Constant: return value;
            case Op::Variable:
                if (index >= static_cast<int>(x.size()))
                    throw std::invalid_argument("expression references x" + std::to_string(index + 1) +
                                                " beyond the problem dimension");
                return x[static_cast<std::size_t>(index)];
            case Op::Time: return t;
            case Op::Add: return lhs->eval(x, t) + rhs->eval(x, t);
            case Op::Sub: return lhs->eval(x, t) - rhs->eval(x, t);
            case Op::Mul: return lhs->eval(x, t) * rhs->eval(x, t);
            case Op::Div: return lhs->eval(x, t) / rhs->eval(x, t);
            case Op::Pow: return std::pow(lhs->eval(x, t), rhs->eval(x, t));
            case Op::Neg: return -lhs->eval(x, t);
            case Op::Exp: return std::exp(lhs->eval(x, t));
            case Op::Sin: return std::sin(lhs->eval(x, t));
            case Op::Cos: return std::cos(lhs->eval(x, t));
            case Op::Erf: return std::erf(lhs->eval(x, t));
        }
        throw std::logic_error("unreachable expression op");
    }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression error at offset " + std::to_string(pos) + ": " + msg);
    }

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

    static NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
        auto n = std::make_unique<Node>();
        n->op = op;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }

    static NodePtr constant(double v) {
        auto n = make(Op::Constant);
        n->value = v;
        return n;
    }

    NodePtr parse_expr() {
        NodePtr node = parse_term();
        while (true) {
            if (eat('+'))
                node = make(Op::Add, std::move(node), parse_term());
            else if (eat('-'))
                node = make(Op::Sub, std::move(node), parse_term());
            else
                return node;
        }
    }

    NodePtr parse_term() {
        NodePtr node = parse_unary();
        while (true) {
            if (eat('*'))
                node = make(Op::Mul, std::move(node), parse_unary());
            else if (eat('/'))
                node = make(Op::Div, std::move(node), parse_unary());
            else
                return node;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) return make(Op::Neg, parse_unary());
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (eat('^')) return make(Op::Pow, std::move(base), parse_unary());  // right associative
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        const char c = text[pos];
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        const char* begin = text.data() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("bad number");
        pos += static_cast<std::size_t>(end - begin);
        return constant(v);
    }

    NodePtr parse_ident() {
        const std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        const std::string name(text.substr(start, pos - start));
        if (name == "pi") return constant(std::numbers::pi);
        if (name == "t") return make(Op::Time);
        if (name.size() >= 2 && name[0] == 'x') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
            if (digits) {
                const int idx = std::stoi(name.substr(1));
                if (idx < 1 || idx > 8) fail("variable index out of range in '" + name + "'");
                auto n = make(Op::Variable);
                n->index = idx - 1;
                return n;
            }
        }
        Op op;
        if (name == "exp")
            op = Op::Exp;
        else if (name == "sin")
            op = Op::Sin;
        else if (name == "cos")
            op = Op::Cos;
        else if (name == "erf")
            op = Op::Erf;
        else
            fail("unknown identifier '" + name + "'");
        if (!eat('(')) fail("expected '(' after " + name);
        NodePtr arg = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return make(op, std::move(arg));
    }
};

}  // namespace

Expression Expression::parse(std::string_view text) {
    Parser parser{text};
    NodePtr root = parser.parse_expr();
    parser.skip_ws();
    if (parser.pos != text.size()) parser.fail("trailing input");
    return Expression(std::move(root), std::string(text));
}

Expression::Expression(std::unique_ptr<Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}

Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;
Expression::~Expression() = default;

Expression::Expression(const Expression& other)
    : root_(other.root_ ? other.root_->clone() : nullptr), text_(other.text_) {}

Expression& Expression::operator=(const Expression& other) {
    if (this != &other) {
        root_ = other.root_ ? other.root_->clone() : nullptr;
        text_ = other.text_;
    }
    return *this;
}

double Expression::eval(std::span<const double> x, double t) const { return root_->eval(x, t); }

}  // namespace greenpath
