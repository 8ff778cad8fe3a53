#include "nclab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace nclab::dsl {

namespace {

constexpr int kMaxDepth = 200;

NodePtr make(NodeKind k, NodePtr lhs = {}, NodePtr rhs = {}) {
    return std::make_shared<const Node>(Node{k, 0.0, 0, std::move(lhs), std::move(rhs)});
}

std::string excerpt_at(std::string_view text, std::size_t offset) {
    const std::size_t begin = offset > 12 ? offset - 12 : 0;
    std::string out;
    for (std::size_t i = begin; i < std::min(text.size(), offset + 12); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        out += (c >= 0x20 && c < 0x7f) ? static_cast<char>(c) : '?';
    }
    return out;
}

class Parser {
public:
    Parser(std::string_view text, int n, VariableSet vars) : text_(text), n_(n), vars_(vars) {}

    NodePtr parse_all() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ < text_.size()) fail("operator or end of input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& expected) const {
        throw ParseError(pos_, expected, excerpt_at(text_, pos_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
                                       text_[pos_] == '\n'))
            ++pos_;
    }

    // Accepts ASCII '-' and U+2212.
    bool take_minus() {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            return true;
        }
        if (text_.substr(pos_, 3) == "\xE2\x88\x92") {
            pos_ += 3;
            return true;
        }
        return false;
    }

    bool take(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool take(std::string_view s) {
        skip_ws();
        if (text_.substr(pos_, s.size()) == s) {
            pos_ += s.size();
            return true;
        }
        return false;
    }

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.depth_ > kMaxDepth) p.fail("shallower nesting (limit 200)");
        }
        ~DepthGuard() { --p.depth_; }
    };

    NodePtr expr() {
        DepthGuard g(*this);
        NodePtr lhs = term();
        for (;;) {
            if (take('+'))
                lhs = make(NodeKind::Add, lhs, term());
            else if (take_minus())
                lhs = make(NodeKind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (take('*'))
                lhs = make(NodeKind::Mul, lhs, factor());
            else if (take('/'))
                lhs = make(NodeKind::Div, lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor() {
        DepthGuard g(*this);
        if (take_minus()) return make(NodeKind::Neg, factor());
        NodePtr base = atom();
        if (take('^')) return make(NodeKind::Pow, base, factor());
        return base;
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t d = 0;
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_, ++d;
            return d;
        };
        std::size_t mant = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mant += digits();
        }
        if (mant == 0) {
            pos_ = start;
            fail("number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) fail("exponent digits");
        }
        double v = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(v)) {
            pos_ = start;
            fail("representable number");
        }
        auto node = std::make_shared<Node>(Node{NodeKind::Number, v, 0, {}, {}});
        return node;
    }

    NodePtr variable(NodeKind kind, std::size_t name_start, std::string_view digits) {
        if (digits.empty()) {
            pos_ = name_start;
            fail("variable index");
        }
        int idx = 0;
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
        if (res.ec != std::errc() || idx < 1 || idx > n_) {
            pos_ = name_start;
            fail("variable index between 1 and " + std::to_string(n_) + " (dimension error)");
        }
        return std::make_shared<Node>(Node{kind, 0.0, idx - 1, {}, {}});
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expression");
        const char c = text_[pos_];
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if (take('(')) {
            NodePtr e = expr();
            if (!take(')')) fail("')'");
            return e;
        }
        const std::size_t start = pos_;
        if (take("|xi|")) {
            if (vars_ != VariableSet::Symbol) {
                pos_ = start;
                fail("angular variable (theta1..thetan or x1..xn)");
            }
            return make(NodeKind::NormXi);
        }
        if (take("<xi>")) {
            if (vars_ != VariableSet::Symbol) {
                pos_ = start;
                fail("angular variable (theta1..thetan or x1..xn)");
            }
            return make(NodeKind::BracketXi);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t p = pos_;
            while (p < text_.size() && std::isalpha(static_cast<unsigned char>(text_[p]))) ++p;
            const std::string_view name = text_.substr(pos_, p - pos_);
            std::size_t q = p;
            while (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) ++q;
            const std::string_view digits = text_.substr(p, q - p);

            if (digits.empty()) {
                NodeKind fn;
                if (name == "pi") {
                    pos_ = p;
                    return make(NodeKind::Pi);
                } else if (name == "cos") {
                    fn = NodeKind::Cos;
                } else if (name == "sin") {
                    fn = NodeKind::Sin;
                } else if (name == "exp") {
                    fn = NodeKind::Exp;
                } else if (name == "abs") {
                    fn = NodeKind::Abs;
                } else {
                    fail("number, variable, function or '('");
                }
                pos_ = p;
                if (!take('(')) fail("'(' after function name");
                NodePtr arg = expr();
                if (!take(')')) fail("')'");
                return make(fn, arg);
            }
            NodeKind kind;
            if (name == "x") {
                kind = NodeKind::TorusVar;
            } else if (name == "xi" && vars_ == VariableSet::Symbol) {
                kind = NodeKind::FreqVar;
            } else if (name == "theta" && vars_ == VariableSet::Angular) {
                kind = NodeKind::ThetaVar;
            } else {
                fail(vars_ == VariableSet::Symbol ? "variable x1..xn or xi1..xin"
                                                  : "variable x1..xn or theta1..thetan");
            }
            pos_ = q;
            return variable(kind, start, digits);
        }
        fail("expression");
    }

    std::string_view text_;
    int n_;
    VariableSet vars_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

std::string number_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

double evaluate(const Node& node, std::span<const double> first, std::span<const double> x) {
    switch (node.kind) {
        case NodeKind::Number: return node.value;
        case NodeKind::Pi: return std::numbers::pi;
        case NodeKind::TorusVar: return x[node.index];
        case NodeKind::FreqVar:
        case NodeKind::ThetaVar: return first[node.index];
        case NodeKind::NormXi: return norm(first);
        case NodeKind::BracketXi: {
            const double r = norm(first);
            return std::sqrt(1.0 + r * r);
        }
        case NodeKind::Add: return evaluate(*node.lhs, first, x) + evaluate(*node.rhs, first, x);
        case NodeKind::Sub: return evaluate(*node.lhs, first, x) - evaluate(*node.rhs, first, x);
        case NodeKind::Mul: return evaluate(*node.lhs, first, x) * evaluate(*node.rhs, first, x);
        case NodeKind::Div: {
            const double den = evaluate(*node.rhs, first, x);
            if (den == 0.0) throw EvalError("division by zero", to_string(node));
            return evaluate(*node.lhs, first, x) / den;
        }
        case NodeKind::Pow: {
            const double base = evaluate(*node.lhs, first, x);
            const double ex = evaluate(*node.rhs, first, x);
            if (base == 0.0 && ex < 0.0) throw EvalError("zero raised to a negative power", to_string(node));
            if (base < 0.0 && ex != std::floor(ex))
                throw EvalError("negative base with non-integer exponent", to_string(node));
            return std::pow(base, ex);
        }
        case NodeKind::Neg: return -evaluate(*node.lhs, first, x);
        case NodeKind::Cos: return std::cos(evaluate(*node.lhs, first, x));
        case NodeKind::Sin: return std::sin(evaluate(*node.lhs, first, x));
        case NodeKind::Exp: return std::exp(evaluate(*node.lhs, first, x));
        case NodeKind::Abs: return std::abs(evaluate(*node.lhs, first, x));
    }
    return 0.0;
}

}  // namespace

bool equal(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.index != b.index) return false;
    if (a.kind == NodeKind::Number && a.value != b.value) return false;
    if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
    if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
    if (a.lhs && !equal(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !equal(*a.rhs, *b.rhs)) return false;
    return true;
}

ParseError::ParseError(std::size_t offset, std::string expected, std::string excerpt)
    : UsageError("parse error at offset " + std::to_string(offset) + ": expected " + expected + " near '" +
                 excerpt + "'"),
      offset_(offset),
      expected_(std::move(expected)),
      excerpt_(std::move(excerpt)) {}

EvalError::EvalError(std::string what, std::string subexpression)
    : NumericalError("evaluation error: " + what + " in " + subexpression),
      subexpression_(std::move(subexpression)) {}

SymbolExpr::SymbolExpr(NodePtr root, int n, VariableSet vars) : root_(std::move(root)), n_(n), vars_(vars) {}

double SymbolExpr::operator()(std::span<const double> first, std::span<const double> x) const {
    return evaluate(*root_, first, x);
}

SymbolExpr parse(std::string_view text, int n, VariableSet vars) {
    if (n < 1) throw UsageError("expression dimension must be >= 1");
    Parser p(text, n, vars);
    return SymbolExpr(p.parse_all(), n, vars);
}

std::string to_string(const Node& node) {
    auto bin = [&](const char* op) { return "(" + to_string(*node.lhs) + " " + op + " " + to_string(*node.rhs) + ")"; };
    auto fn = [&](const char* name) { return std::string(name) + "(" + to_string(*node.lhs) + ")"; };
    const std::string idx = std::to_string(node.index + 1);
    switch (node.kind) {
        case NodeKind::Number: return number_text(node.value);
        case NodeKind::Pi: return "pi";
        case NodeKind::TorusVar: return "x" + idx;
        case NodeKind::FreqVar: return "xi" + idx;
        case NodeKind::ThetaVar: return "theta" + idx;
        case NodeKind::NormXi: return "|xi|";
        case NodeKind::BracketXi: return "<xi>";
        case NodeKind::Add: return bin("+");
        case NodeKind::Sub: return bin("-");
        case NodeKind::Mul: return bin("*");
        case NodeKind::Div: return bin("/");
        case NodeKind::Pow: return bin("^");
        case NodeKind::Neg: return "(-" + to_string(*node.lhs) + ")";
        case NodeKind::Cos: return fn("cos");
        case NodeKind::Sin: return fn("sin");
        case NodeKind::Exp: return fn("exp");
        case NodeKind::Abs: return fn("abs");
    }
    return {};
}

std::string to_string(const SymbolExpr& e) { return to_string(e.root()); }

double eval_expr(const SymbolExpr& e, std::span<const double> first, std::span<const double> x) {
    if (first.size() != static_cast<std::size_t>(e.dim()) || x.size() != static_cast<std::size_t>(e.dim()))
        throw UsageError("eval_expr: argument dimensions do not match expression dimension");
    return e(first, x);
}

namespace {

SymbolFn complex_fn(int n, const std::string& re, const std::string& im, VariableSet vars) {
    SymbolExpr re_e = parse(re, n, vars);
    if (im.empty()) {
        return [re_e](std::span<const double> f, std::span<const double> x) { return Complex(re_e(f, x), 0.0); };
    }
    SymbolExpr im_e = parse(im, n, vars);
    return [re_e, im_e](std::span<const double> f, std::span<const double> x) {
        return Complex(re_e(f, x), im_e(f, x));
    };
}

}  // namespace

Symbol to_symbol(const SymbolText& text) {
    SymbolFn main = complex_fn(text.n, text.re, text.im, VariableSet::Symbol);
    std::optional<ClassicalStructure> classical;
    if (!text.terms.empty()) {
        ClassicalStructure cs;
        cs.cutoff_radius = text.cutoff_radius;
        for (std::size_t j = 0; j < text.terms.size(); ++j) {
            const double expected = text.order - static_cast<double>(j);
            if (std::abs(text.terms[j].degree - expected) > 1e-12)
                throw UsageError("classical term " + std::to_string(j + 1) + " has degree " +
                                 number_text(text.terms[j].degree) + ", expected " + number_text(expected) +
                                 " (degrees must descend by one from the order)");
            cs.terms.push_back({text.terms[j].degree, complex_fn(text.n, text.terms[j].angular_re,
                                                                 text.terms[j].angular_im, VariableSet::Angular)});
        }
        classical = std::move(cs);
    }
    return Symbol(text.n, std::move(main), text.order, text.side, text.rho, text.delta, std::move(classical));
}

}  // namespace nclab::dsl
