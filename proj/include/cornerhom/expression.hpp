#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>

namespace cornerhom {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// Value, gradient and Hessian of a function R^3 -> R at a point.
struct Jet {
    double value = 0;
    Vec3 gradient{};
    Mat3 hessian{};
};

/// Parse failure with the 1-based column of the offending character.
class ExpressionError : public std::invalid_argument {
public:
    ExpressionError(const std::string& what, std::size_t column);
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

/**
 * Expression tree over x, y, z and numeric literals with + - * / ^, unary
 * minus, sqrt(.), exp(.) and pow(., .). Derivatives are propagated exactly
 * through the tree (second-order forward mode), so gradients and Hessians
 * carry only floating-point rounding.
 */
class Expression {
public:
    struct Node;

    Expression();  // the constant 0
    static Expression parse(const std::string& text);
    static Expression constant(double c);
    static Expression variable(int axis);

    double value(const Vec3& p) const;
    Jet jet(const Vec3& p) const;

    Expression operator-() const;
    /// Fully parenthesized infix form that parses back to the same tree.
    std::string to_string() const;

private:
    explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

}  // namespace cornerhom
