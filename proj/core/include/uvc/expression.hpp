#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace uvc {

/// Parse failure, carrying the byte offset of the offending token.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t offset_)
        : std::runtime_error(what), offset(offset_) {}
    std::size_t offset;
};

/// Arithmetic expression in the variables t, x, y, v with operators
/// + - * / ^, functions exp, log, abs, sqrt, min, max and numeric
/// literals. Immutable after parse; eval is pure.
class Expression {
public:
    Expression() = default;

    /// Throws ParseError on malformed input or unknown identifiers.
    static Expression parse(const std::string& text);

    double eval(double t, double x, double y, double v) const;

    bool empty() const { return root_ == nullptr; }
    const std::string& text() const { return text_; }

private:
    struct Node;
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace uvc
