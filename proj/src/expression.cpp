#include "shaderevo/expression.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace shaderevo {

std::string_view symbol_name(Symbol s) noexcept {
    switch (s) {
    case Symbol::Add: return "add";
    case Symbol::Sub: return "sub";
    case Symbol::Mul: return "mul";
    case Symbol::Div: return "div";
    case Symbol::Neg: return "neg";
    case Symbol::Ceil: return "ceil";
    case Symbol::Floor: return "floor";
    case Symbol::Sqrt: return "sqrt";
    case Symbol::Log: return "log";
    case Symbol::Sin: return "sin";
    case Symbol::Cos: return "cos";
    case Symbol::Constant: return "const";
    case Symbol::X: return "x";
    case Symbol::Y: return "y";
    case Symbol::Z: return "z";
    case Symbol::Time: return "time";
    }
    return "?";
}

namespace {

// Index one past the subtree starting at `i`, or npos if the sequence ends early.
std::size_t scan_subtree(std::span<const Node> nodes, std::size_t i) {
    std::size_t pending = 1;
    while (pending > 0) {
        if (i >= nodes.size()) {
            return std::string::npos;
        }
        pending += static_cast<std::size_t>(arity(nodes[i].symbol));
        --pending;
        ++i;
    }
    return i;
}

} // namespace

Expression::Expression(std::vector<Node> prefix) : nodes_(std::move(prefix)) {
    if (nodes_.empty()) {
        throw std::invalid_argument("expression has no nodes");
    }
    for (const auto& n : nodes_) {
        if (static_cast<unsigned>(n.symbol) > static_cast<unsigned>(Symbol::Time)) {
            throw std::invalid_argument("unknown node symbol");
        }
    }
    if (scan_subtree(nodes_, 0) != nodes_.size()) {
        throw std::invalid_argument("node sequence is not a single well-formed tree");
    }
}

Expression Expression::constant(double value) {
    return Expression(Trusted{}, {Node{Symbol::Constant, value}});
}

Expression Expression::variable(Symbol terminal) {
    if (is_operator(terminal) || terminal == Symbol::Constant) {
        throw std::invalid_argument("not a variable terminal");
    }
    return Expression(Trusted{}, {Node{terminal, 0.0}});
}

Expression Expression::unary(Symbol op, const Expression& operand) {
    if (arity(op) != 1) {
        throw std::invalid_argument("operator is not unary");
    }
    std::vector<Node> nodes;
    nodes.reserve(operand.size() + 1);
    nodes.push_back({op, 0.0});
    nodes.insert(nodes.end(), operand.nodes_.begin(), operand.nodes_.end());
    return Expression(Trusted{}, std::move(nodes));
}

Expression Expression::binary(Symbol op, const Expression& lhs, const Expression& rhs) {
    if (arity(op) != 2) {
        throw std::invalid_argument("operator is not binary");
    }
    std::vector<Node> nodes;
    nodes.reserve(lhs.size() + rhs.size() + 1);
    nodes.push_back({op, 0.0});
    nodes.insert(nodes.end(), lhs.nodes_.begin(), lhs.nodes_.end());
    nodes.insert(nodes.end(), rhs.nodes_.begin(), rhs.nodes_.end());
    return Expression(Trusted{}, std::move(nodes));
}

std::size_t Expression::subtree_end(std::size_t i) const {
    if (i >= nodes_.size()) {
        throw std::out_of_range("node index out of range");
    }
    return scan_subtree(nodes_, i);
}

Expression Expression::subtree(std::size_t i) const {
    const auto end = subtree_end(i);
    return Expression(Trusted{}, std::vector<Node>(nodes_.begin() + static_cast<std::ptrdiff_t>(i),
                                                   nodes_.begin() + static_cast<std::ptrdiff_t>(end)));
}

Expression Expression::replace_subtree(std::size_t i, const Expression& replacement) const {
    const auto end = subtree_end(i);
    std::vector<Node> nodes;
    nodes.reserve(nodes_.size() - (end - i) + replacement.size());
    nodes.insert(nodes.end(), nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(i));
    nodes.insert(nodes.end(), replacement.nodes_.begin(), replacement.nodes_.end());
    nodes.insert(nodes.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(end), nodes_.end());
    return Expression(Trusted{}, std::move(nodes));
}

int Expression::depth() const {
    // Walk right-to-left: every node's depth is 1 + max of its children's.
    std::vector<int> stack;
    stack.reserve(nodes_.size());
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
        int d = 0;
        for (int k = 0; k < arity(it->symbol); ++k) {
            d = std::max(d, stack.back());
            stack.pop_back();
        }
        stack.push_back(d + 1);
    }
    return stack.back();
}

bool operator==(const Expression& a, const Expression& b) noexcept {
    return std::equal(a.nodes_.begin(), a.nodes_.end(), b.nodes_.begin(), b.nodes_.end(),
                      [](const Node& l, const Node& r) {
                          if (l.symbol != r.symbol) {
                              return false;
                          }
                          return l.symbol != Symbol::Constant ||
                                 std::bit_cast<std::uint64_t>(l.value) == std::bit_cast<std::uint64_t>(r.value);
                      });
}

// ---- evaluation ------------------------------------------------------------

namespace {

double apply_unary(Symbol op, double a) {
    switch (op) {
    case Symbol::Neg: return -a;
    case Symbol::Ceil: return std::ceil(a);
    case Symbol::Floor: return std::floor(a);
    case Symbol::Sqrt: return std::sqrt(a);
    case Symbol::Log: return std::log(a);
    case Symbol::Sin: return std::sin(a);
    case Symbol::Cos: return std::cos(a);
    default: return std::nan("");
    }
}

double apply_binary(Symbol op, double a, double b) {
    switch (op) {
    case Symbol::Add: return a + b;
    case Symbol::Sub: return a - b;
    case Symbol::Mul: return a * b;
    case Symbol::Div: return a / b;
    default: return std::nan("");
    }
}

double terminal_value(const Node& n, const Env& env) {
    switch (n.symbol) {
    case Symbol::Constant: return n.value;
    case Symbol::X: return env.x;
    case Symbol::Y: return env.y;
    case Symbol::Z: return env.z;
    case Symbol::Time: return env.time;
    default: return std::nan("");
    }
}

double eval_at(std::span<const Node> nodes, std::size_t& cursor, const Env& env) {
    const Node& n = nodes[cursor++];
    switch (arity(n.symbol)) {
    case 0:
        return terminal_value(n, env);
    case 1:
        return apply_unary(n.symbol, eval_at(nodes, cursor, env));
    default: {
        const double lhs = eval_at(nodes, cursor, env);
        const double rhs = eval_at(nodes, cursor, env);
        return apply_binary(n.symbol, lhs, rhs);
    }
    }
}

std::vector<double> eval_batch_at(std::span<const Node> nodes, std::size_t& cursor, std::span<const Env> points) {
    const Node& n = nodes[cursor++];
    switch (arity(n.symbol)) {
    case 0: {
        std::vector<double> out(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            out[i] = terminal_value(n, points[i]);
        }
        return out;
    }
    case 1: {
        auto out = eval_batch_at(nodes, cursor, points);
        for (auto& v : out) {
            v = apply_unary(n.symbol, v);
        }
        return out;
    }
    default: {
        auto lhs = eval_batch_at(nodes, cursor, points);
        const auto rhs = eval_batch_at(nodes, cursor, points);
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            lhs[i] = apply_binary(n.symbol, lhs[i], rhs[i]);
        }
        return lhs;
    }
    }
}

} // namespace

double evaluate(const Expression& expr, const Env& env) {
    std::size_t cursor = 0;
    return eval_at(expr.nodes(), cursor, env);
}

std::vector<double> evaluate_batch(const Expression& expr, std::span<const Env> points) {
    std::size_t cursor = 0;
    return eval_batch_at(expr.nodes(), cursor, points);
}

} // namespace shaderevo
