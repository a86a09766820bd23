#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shaderevo/errors.hpp"

namespace shaderevo {

/// Every node kind a displacement expression may contain: eleven operators
/// followed by five terminal kinds.
enum class Symbol : std::uint8_t {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Ceil,
    Floor,
    Sqrt,
    Log,
    Sin,
    Cos,
    Constant,
    X,
    Y,
    Z,
    Time,
};

inline constexpr std::array<Symbol, 11> kOperators = {
    Symbol::Add,  Symbol::Sub,   Symbol::Mul,  Symbol::Div, Symbol::Neg, Symbol::Ceil,
    Symbol::Floor, Symbol::Sqrt, Symbol::Log, Symbol::Sin, Symbol::Cos,
};

inline constexpr std::array<Symbol, 5> kTerminals = {
    Symbol::Constant, Symbol::X, Symbol::Y, Symbol::Z, Symbol::Time,
};

constexpr int arity(Symbol s) noexcept {
    switch (s) {
    case Symbol::Add:
    case Symbol::Sub:
    case Symbol::Mul:
    case Symbol::Div:
        return 2;
    case Symbol::Neg:
    case Symbol::Ceil:
    case Symbol::Floor:
    case Symbol::Sqrt:
    case Symbol::Log:
    case Symbol::Sin:
    case Symbol::Cos:
        return 1;
    default:
        return 0;
    }
}

constexpr bool is_operator(Symbol s) noexcept { return arity(s) > 0; }
constexpr bool is_binary(Symbol s) noexcept { return arity(s) == 2; }

/// Canonical lowercase name; "const" for Constant.
std::string_view symbol_name(Symbol s) noexcept;

struct Node {
    Symbol symbol = Symbol::Constant;
    double value = 0.0; // meaningful only for Symbol::Constant
};

struct Env {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double time = 0.0;
};

struct Metrics {
    int depth = 0;
    std::size_t node_count = 0;
};

/// Immutable expression tree stored as a prefix-ordered node sequence.
///
/// The subtree rooted at node i occupies the contiguous range
/// [i, subtree_end(i)). Structural equality compares shape, symbols and the
/// bit patterns of constants.
class Expression {
public:
    /// Throws std::invalid_argument unless `prefix` encodes exactly one tree.
    explicit Expression(std::vector<Node> prefix);

    static Expression constant(double value);
    static Expression variable(Symbol terminal);
    static Expression unary(Symbol op, const Expression& operand);
    static Expression binary(Symbol op, const Expression& lhs, const Expression& rhs);

    std::span<const Node> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const Node& root() const noexcept { return nodes_.front(); }

    std::size_t subtree_end(std::size_t i) const;
    Expression subtree(std::size_t i) const;
    Expression replace_subtree(std::size_t i, const Expression& replacement) const;

    int depth() const;
    Metrics metrics() const { return {depth(), size()}; }

    friend bool operator==(const Expression& a, const Expression& b) noexcept;

private:
    struct Trusted {};
    Expression(Trusted, std::vector<Node> prefix) noexcept : nodes_(std::move(prefix)) {}

    std::vector<Node> nodes_;
};

inline Metrics metrics(const Expression& e) { return e.metrics(); }

/// IEEE-754 evaluation; division by zero, log and sqrt of negatives produce
/// inf/NaN exactly as the raw operations do.
double evaluate(const Expression& expr, const Env& env);

/// Evaluates at many points at once. Bit-identical to calling evaluate per point.
std::vector<double> evaluate_batch(const Expression& expr, std::span<const Env> points);

// ---- canonical text ------------------------------------------------------

class ParseError : public ValidationError {
public:
    enum class Kind { Syntax, UnknownSymbol, Arity };

    ParseError(Kind kind, std::size_t position, const std::string& message);

    Kind kind() const noexcept { return kind_; }
    std::size_t position() const noexcept { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

/// Prefix s-expression, e.g. "(div x (add x z))".
std::string serialize(const Expression& expr);

Expression parse(std::string_view text);

/// Shortest round-trip decimal that always contains a decimal point.
std::string format_constant(double value);

} // namespace shaderevo
