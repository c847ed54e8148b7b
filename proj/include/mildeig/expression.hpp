#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "mildeig/errors.hpp"

namespace mildeig {

/// Which of the three context variables an expression may reference.
struct VarSet {
    bool t = false;
    bool x = false;
    bool u = false;

    static VarSet of_t() { return {true, false, false}; }
    static VarSet of_x() { return {false, true, false}; }
    static VarSet of_tx() { return {true, true, false}; }
    static VarSet of_txu() { return {true, true, true}; }
};

/// Parsed arithmetic expression over (t, x, u).
///
/// Grammar: numeric literals, the allowed variables, binary + - * / ^
/// (^ right-associative and binding tighter than unary minus), parentheses,
/// functions sin, cos, exp, sqrt, abs, constants pi and e. Parsing is
/// whitespace-insensitive; division by zero and sqrt of a negative raise
/// EvalError at evaluation time.
class Expression {
public:
    static Expression parse(std::string_view src, VarSet allowed);

    double eval(double t = 0.0, double x = 0.0, double u = 0.0) const;

    /// Fully parenthesized text form; parse(to_string()) rebuilds this tree.
    std::string to_string() const;

    const std::string& source() const { return source_; }

    struct Node;  // opaque AST node, defined in the implementation

private:
    Expression(std::shared_ptr<const Node> root, std::string source);
    std::shared_ptr<const Node> root_;
    std::string source_;
};

}  // namespace mildeig
