#include "uvc/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace uvc {

enum class NodeKind { Constant, Variable, Unary, Binary };

struct Expression::Node {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;  // Constant
    int var = 0;         // Variable: 0=t 1=x 2=y 3=v
    char op = 0;         // Binary: + - * / ^ ; Unary: '-'
    int func = -1;       // Unary/Binary builtin: see eval_func
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

enum Func { F_EXP, F_LOG, F_ABS, F_SQRT, F_MIN, F_MAX };

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
        throw ParseError("syntax error at offset " + std::to_string(at) + ": " + msg, at);
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    NodePtr make(Expression::Node n) { return std::make_shared<Expression::Node>(std::move(n)); }

    // expr   := term (('+'|'-') term)*
    // term   := power (('*'|'/') power)*
    // power  := unary ('^' power)?          right-assoc
    // unary  := '-' unary | primary
    // primary:= number | ident | ident '(' args ')' | '(' expr ')'
    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (true) {
            skip_ws();
            if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
                const char op = s[pos++];
                NodePtr rhs = parse_term();
                lhs = make({NodeKind::Binary, 0.0, 0, op, -1, lhs, rhs});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_power();
        while (true) {
            skip_ws();
            if (pos < s.size() && (s[pos] == '*' || s[pos] == '/')) {
                const char op = s[pos++];
                NodePtr rhs = parse_power();
                lhs = make({NodeKind::Binary, 0.0, 0, op, -1, lhs, rhs});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_power() {
        NodePtr base = parse_unary();
        skip_ws();
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            NodePtr exp = parse_power();
            return make({NodeKind::Binary, 0.0, 0, '^', -1, base, exp});
        }
        return base;
    }

    NodePtr parse_unary() {
        skip_ws();
        if (pos < s.size() && s[pos] == '-') {
            ++pos;
            NodePtr operand = parse_unary();
            return make({NodeKind::Unary, 0.0, 0, '-', -1, operand, nullptr});
        }
        return parse_primary();
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input", pos);
        const char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!eat(')')) fail("expected ')'", pos);
            return inner;
        }
        fail(std::string("unexpected character '") + c + "'", pos);
    }

    NodePtr parse_number() {
        const char* begin = s.c_str() + pos;
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        if (end == begin) fail("malformed number", pos);
        pos += static_cast<std::size_t>(end - begin);
        return make({NodeKind::Constant, value, 0, 0, -1, nullptr, nullptr});
    }

    NodePtr parse_ident() {
        const std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        const std::string name = s.substr(start, pos - start);
        if (name == "t") return make({NodeKind::Variable, 0.0, 0, 0, -1, nullptr, nullptr});
        if (name == "x") return make({NodeKind::Variable, 0.0, 1, 0, -1, nullptr, nullptr});
        if (name == "y") return make({NodeKind::Variable, 0.0, 2, 0, -1, nullptr, nullptr});
        if (name == "v") return make({NodeKind::Variable, 0.0, 3, 0, -1, nullptr, nullptr});

        int func = -1;
        int arity = 1;
        if (name == "exp") func = F_EXP;
        else if (name == "log") func = F_LOG;
        else if (name == "abs") func = F_ABS;
        else if (name == "sqrt") func = F_SQRT;
        else if (name == "min") { func = F_MIN; arity = 2; }
        else if (name == "max") { func = F_MAX; arity = 2; }
        if (func < 0)
            throw ParseError("unknown identifier '" + name + "' at offset " +
                                 std::to_string(start),
                             start);

        if (!eat('(')) fail("expected '(' after function name", pos);
        NodePtr first = parse_expr();
        NodePtr second;
        if (arity == 2) {
            if (!eat(',')) fail("expected ',' in two-argument function", pos);
            second = parse_expr();
        }
        if (!eat(')')) fail("expected ')'", pos);
        return make({arity == 1 ? NodeKind::Unary : NodeKind::Binary, 0.0, 0, 0, func, first,
                     second});
    }
};

double eval_node(const Expression::Node& n, double t, double x, double y, double v) {
    switch (n.kind) {
        case NodeKind::Constant:
            return n.value;
        case NodeKind::Variable:
            switch (n.var) {
                case 0: return t;
                case 1: return x;
                case 2: return y;
                default: return v;
            }
        case NodeKind::Unary: {
            const double a = eval_node(*n.lhs, t, x, y, v);
            if (n.func < 0) return -a;  // unary minus
            switch (n.func) {
                case F_EXP: return std::exp(a);
                case F_LOG: return std::log(a);
                case F_ABS: return std::abs(a);
                default: return std::sqrt(a);
            }
        }
        case NodeKind::Binary: {
            const double a = eval_node(*n.lhs, t, x, y, v);
            const double b = eval_node(*n.rhs, t, x, y, v);
            if (n.func == F_MIN) return std::min(a, b);
            if (n.func == F_MAX) return std::max(a, b);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                default: return std::pow(a, b);
            }
        }
    }
    return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Parser parser(text);
    NodePtr root = parser.parse_expr();
    parser.skip_ws();
    if (parser.pos != text.size())
        throw ParseError("syntax error at offset " + std::to_string(parser.pos) +
                             ": trailing input",
                         parser.pos);
    Expression e;
    e.root_ = std::move(root);
    e.text_ = text;
    return e;
}

double Expression::eval(double t, double x, double y, double v) const {
    if (!root_) throw std::logic_error("Expression: eval on empty expression");
    return eval_node(*root_, t, x, y, v);
}

}  // namespace uvc
