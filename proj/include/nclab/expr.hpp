#pragma once

// Textual symbol expressions.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?            right-associative; "-x^2" = -(x^2)
//   atom   := number | 'pi' | var | func '(' expr ')' | '(' expr ')' | '|xi|' | '<xi>'
//   var    := 'x'k | 'xi'k | 'theta'k        1 <= k <= n
//   func   := 'cos' | 'sin' | 'exp' | 'abs'
//
// <xi> is the Japanese bracket (1+|xi|^2)^(1/2). Angular expressions use
// theta1..thetan in place of the frequency variables.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nclab/errors.hpp"
#include "nclab/symbol.hpp"

namespace nclab::dsl {

enum class NodeKind {
    Number, Pi, TorusVar, FreqVar, ThetaVar, NormXi, BracketXi,
    Add, Sub, Mul, Div, Pow, Neg,
    Cos, Sin, Exp, Abs,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    double value = 0.0;  // Number
    int index = 0;       // variables, zero-based
    NodePtr lhs;         // unary operand / function argument / left operand
    NodePtr rhs;
};

bool equal(const Node& a, const Node& b);

/// Which frequency-like variables an expression may reference.
enum class VariableSet { Symbol, Angular };

class ParseError : public UsageError {
public:
    ParseError(std::size_t offset, std::string expected, std::string excerpt);

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }
    const std::string& excerpt() const { return excerpt_; }

private:
    std::size_t offset_;
    std::string expected_;
    std::string excerpt_;
};

class EvalError : public NumericalError {
public:
    EvalError(std::string what, std::string subexpression);
    const std::string& subexpression() const { return subexpression_; }

private:
    std::string subexpression_;
};

/// Immutable parsed expression. Copies share the tree.
class SymbolExpr {
public:
    SymbolExpr(NodePtr root, int n, VariableSet vars);

    int dim() const { return n_; }
    VariableSet variables() const { return vars_; }
    const Node& root() const { return *root_; }

    /// `first` carries ξ (or θ for angular expressions), `x` the torus point.
    double operator()(std::span<const double> first, std::span<const double> x) const;

    bool operator==(const SymbolExpr& o) const { return n_ == o.n_ && equal(*root_, *o.root_); }

private:
    NodePtr root_;
    int n_;
    VariableSet vars_;
};

SymbolExpr parse(std::string_view text, int n, VariableSet vars = VariableSet::Symbol);

/// Fully parenthesised rendering that parses back to an equal tree.
std::string to_string(const SymbolExpr& e);
std::string to_string(const Node& node);

double eval_expr(const SymbolExpr& e, std::span<const double> first, std::span<const double> x);

struct ClassicalTermText {
    double degree = 0.0;
    std::string angular_re;
    std::string angular_im;  // empty means 0
};

struct SymbolText {
    int n = 1;
    std::string re;
    std::string im;  // empty means 0
    std::vector<ClassicalTermText> terms;
    double cutoff_radius = 1.0;
    double order = 0.0;
    double rho = 1.0;
    double delta = 0.0;
    Side side = Side::Discrete;
};

/// Builds a Symbol from expression text; declared terms must descend by one from `order`.
Symbol to_symbol(const SymbolText& text);

}  // namespace nclab::dsl
