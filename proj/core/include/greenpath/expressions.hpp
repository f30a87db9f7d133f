#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace greenpath {

// Small arithmetic expression over the spatial variables x1..x8 and the time
// variable t: numbers, + - * / ^, parentheses, the constant pi, and the
// functions exp, sin, cos, erf.  Compiled once, evaluated many times;
// evaluation is const and thread-safe.
class Expression {
public:
    static Expression parse(std::string_view text);

    double eval(std::span<const double> x, double t = 0.0) const;
    const std::string& text() const { return text_; }

    Expression(Expression&&) noexcept;
    Expression& operator=(Expression&&) noexcept;
    Expression(const Expression&);
    Expression& operator=(const Expression&);
    ~Expression();

    struct Node;  // AST node; defined in the implementation

private:
    explicit Expression(std::unique_ptr<Node> root, std::string text);
    std::unique_ptr<Node> root_;
    std::string text_;
};

}  // namespace greenpath
