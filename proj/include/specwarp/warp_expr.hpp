#pragma once

#include <memory>
#include <string>

namespace specwarp {

namespace detail {
struct Expr;
}

/// A parsed frequency-warping expression over the single free variable `f`
/// (input frequency in Hz). Immutable; safe to share and evaluate from
/// multiple threads.
class WarpFunction {
public:
    const std::string& source_text() const noexcept { return source_; }

    /// Fully parenthesized form; parsing it back yields an equivalent tree.
    std::string canonical_text() const;

    double operator()(double f_hz) const;

private:
    friend WarpFunction parse(const std::string& text);

    WarpFunction(std::string source, std::shared_ptr<const detail::Expr> root)
        : source_(std::move(source)), root_(std::move(root)) {}

    std::string source_;
    std::shared_ptr<const detail::Expr> root_;
};

/// Parses an expression with numeric literals (decimal or scientific),
/// binary + - * / ^, unary minus, parentheses, and the functions
/// min(a,b), max(a,b), abs(x), log(x), exp(x), pow(x,y), clamp(x,lo,hi).
/// Precedence: ^  >  unary minus  >  * /  >  + -, left-associative within
/// each tier. Throws ParseError with the character position on syntax
/// errors, unknown identifiers, arity mismatches, and trailing tokens.
WarpFunction parse(const std::string& text);

/// Evaluates with f bound to f_hz, in double precision. Throws EvalError on
/// division by zero, log of a non-positive value, or any non-finite result.
double evaluate(const WarpFunction& w, double f_hz);

}  // namespace specwarp
