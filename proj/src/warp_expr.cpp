#include "specwarp/warp_expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

#include "specwarp/errors.hpp"

namespace specwarp {

namespace detail {

struct Expr {
    enum class Op {
        Constant,
        Variable,
        Neg,
        Add,
        Sub,
        Mul,
        Div,
        Pow,
        Min,
        Max,
        Abs,
        Log,
        Exp,
        Clamp,
    };

    Op op = Op::Constant;
    double value = 0.0;       // Constant only
    std::vector<Expr> args;   // operands, in order
};

namespace {

double eval_node(const Expr& e, double f) {
    using Op = Expr::Op;
    switch (e.op) {
        case Op::Constant:
            return e.value;
        case Op::Variable:
            return f;
        case Op::Neg:
            return -eval_node(e.args[0], f);
        case Op::Add:
            return eval_node(e.args[0], f) + eval_node(e.args[1], f);
        case Op::Sub:
            return eval_node(e.args[0], f) - eval_node(e.args[1], f);
        case Op::Mul:
            return eval_node(e.args[0], f) * eval_node(e.args[1], f);
        case Op::Div: {
            const double num = eval_node(e.args[0], f);
            const double den = eval_node(e.args[1], f);
            if (den == 0.0) throw EvalError("division by zero", f);
            return num / den;
        }
        case Op::Pow: {
            const double base = eval_node(e.args[0], f);
            const double exponent = eval_node(e.args[1], f);
            const double r = std::pow(base, exponent);
            if (!std::isfinite(r)) throw EvalError("pow produced a non-finite value", f);
            return r;
        }
        case Op::Min:
            return std::min(eval_node(e.args[0], f), eval_node(e.args[1], f));
        case Op::Max:
            return std::max(eval_node(e.args[0], f), eval_node(e.args[1], f));
        case Op::Abs:
            return std::abs(eval_node(e.args[0], f));
        case Op::Log: {
            const double v = eval_node(e.args[0], f);
            if (v <= 0.0) throw EvalError("log of a non-positive value", f);
            return std::log(v);
        }
        case Op::Exp: {
            const double r = std::exp(eval_node(e.args[0], f));
            if (!std::isfinite(r)) throw EvalError("exp overflowed", f);
            return r;
        }
        case Op::Clamp: {
            const double v = eval_node(e.args[0], f);
            const double lo = eval_node(e.args[1], f);
            const double hi = eval_node(e.args[2], f);
            if (lo > hi) throw EvalError("clamp bounds out of order", f);
            return std::clamp(v, lo, hi);
        }
    }
    throw EvalError("corrupt expression tree", f);
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void print_node(const Expr& e, std::string& out) {
    using Op = Expr::Op;
    auto binary = [&](const char* sym) {
        out += '(';
        print_node(e.args[0], out);
        out += sym;
        print_node(e.args[1], out);
        out += ')';
    };
    auto call = [&](const char* name) {
        out += name;
        out += '(';
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i > 0) out += ',';
            print_node(e.args[i], out);
        }
        out += ')';
    };
    switch (e.op) {
        case Op::Constant: out += format_number(e.value); return;
        case Op::Variable: out += 'f'; return;
        case Op::Neg:
            out += "(-";
            print_node(e.args[0], out);
            out += ')';
            return;
        case Op::Add: binary("+"); return;
        case Op::Sub: binary("-"); return;
        case Op::Mul: binary("*"); return;
        case Op::Div: binary("/"); return;
        case Op::Pow: binary("^"); return;
        case Op::Min: call("min"); return;
        case Op::Max: call("max"); return;
        case Op::Abs: call("abs"); return;
        case Op::Log: call("log"); return;
        case Op::Exp: call("exp"); return;
        case Op::Clamp: call("clamp"); return;
    }
}

struct FunctionInfo {
    const char* name;
    Expr::Op op;
    std::size_t arity;
};

constexpr std::array<FunctionInfo, 7> kFunctions{{
    {"min", Expr::Op::Min, 2},
    {"max", Expr::Op::Max, 2},
    {"abs", Expr::Op::Abs, 1},
    {"log", Expr::Op::Log, 1},
    {"exp", Expr::Op::Exp, 1},
    {"pow", Expr::Op::Pow, 2},
    {"clamp", Expr::Op::Clamp, 3},
}};

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
    Kind kind = Kind::End;
    double number = 0.0;
    std::string ident;
    std::size_t position = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        Token tok;
        tok.position = pos_;
        if (pos_ >= text_.size()) return tok;

        const char c = text_[pos_];
        switch (c) {
            case '+': tok.kind = Token::Kind::Plus; ++pos_; return tok;
            case '-': tok.kind = Token::Kind::Minus; ++pos_; return tok;
            case '*': tok.kind = Token::Kind::Star; ++pos_; return tok;
            case '/': tok.kind = Token::Kind::Slash; ++pos_; return tok;
            case '^': tok.kind = Token::Kind::Caret; ++pos_; return tok;
            case '(': tok.kind = Token::Kind::LParen; ++pos_; return tok;
            case ')': tok.kind = Token::Kind::RParen; ++pos_; return tok;
            case ',': tok.kind = Token::Kind::Comma; ++pos_; return tok;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double value = 0.0;
            const char* begin = text_.data() + pos_;
            const char* end = text_.data() + text_.size();
            auto [ptr, ec] = std::from_chars(begin, end, value, std::chars_format::general);
            if (ec != std::errc{} || ptr == begin) {
                throw ParseError("malformed number", pos_);
            }
            tok.kind = Token::Kind::Number;
            tok.number = value;
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            return tok;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            tok.kind = Token::Kind::Ident;
            tok.ident = text_.substr(start, pos_ - start);
            return tok;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
};

// Recursive-descent parser. Tiers, loosest to tightest:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := primary ('^' exponent)*      left-associative chain
//   exponent := '-' exponent | primary     so 2^-1 works without giving '^'
//                                          right associativity
class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { advance(); }

    Expr parse() {
        Expr e = parse_expr();
        if (current_.kind != Token::Kind::End) {
            throw ParseError("unexpected trailing input", current_.position);
        }
        return e;
    }

private:
    void advance() { current_ = lexer_.next(); }

    bool accept(Token::Kind kind) {
        if (current_.kind != kind) return false;
        advance();
        return true;
    }

    void expect(Token::Kind kind, const char* what) {
        if (current_.kind != kind) {
            throw ParseError(std::string("expected ") + what, current_.position);
        }
        advance();
    }

    static Expr make(Expr::Op op, std::vector<Expr> args) {
        Expr e;
        e.op = op;
        e.args = std::move(args);
        return e;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        while (true) {
            if (accept(Token::Kind::Plus)) {
                Expr rhs = parse_term();
                lhs = make(Expr::Op::Add, {std::move(lhs), std::move(rhs)});
            } else if (accept(Token::Kind::Minus)) {
                Expr rhs = parse_term();
                lhs = make(Expr::Op::Sub, {std::move(lhs), std::move(rhs)});
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        while (true) {
            if (accept(Token::Kind::Star)) {
                Expr rhs = parse_unary();
                lhs = make(Expr::Op::Mul, {std::move(lhs), std::move(rhs)});
            } else if (accept(Token::Kind::Slash)) {
                Expr rhs = parse_unary();
                lhs = make(Expr::Op::Div, {std::move(lhs), std::move(rhs)});
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept(Token::Kind::Minus)) {
            return make(Expr::Op::Neg, {parse_unary()});
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr lhs = parse_primary();
        while (accept(Token::Kind::Caret)) {
            Expr rhs = parse_exponent();
            lhs = make(Expr::Op::Pow, {std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    Expr parse_exponent() {
        if (accept(Token::Kind::Minus)) {
            return make(Expr::Op::Neg, {parse_exponent()});
        }
        return parse_primary();
    }

    Expr parse_primary() {
        const Token tok = current_;
        if (accept(Token::Kind::Number)) {
            Expr e;
            e.op = Expr::Op::Constant;
            e.value = tok.number;
            return e;
        }
        if (accept(Token::Kind::LParen)) {
            Expr e = parse_expr();
            expect(Token::Kind::RParen, "')'");
            return e;
        }
        if (accept(Token::Kind::Ident)) {
            if (tok.ident == "f") {
                Expr e;
                e.op = Expr::Op::Variable;
                return e;
            }
            const auto* fn = std::find_if(kFunctions.begin(), kFunctions.end(),
                                          [&](const FunctionInfo& info) {
                                              return tok.ident == info.name;
                                          });
            if (fn == kFunctions.end()) {
                throw ParseError("unknown identifier '" + tok.ident + "'", tok.position);
            }
            expect(Token::Kind::LParen, "'(' after function name");
            std::vector<Expr> args;
            args.push_back(parse_expr());
            while (accept(Token::Kind::Comma)) args.push_back(parse_expr());
            expect(Token::Kind::RParen, "')'");
            if (args.size() != fn->arity) {
                throw ParseError(std::string(fn->name) + " takes " +
                                     std::to_string(fn->arity) + " argument(s), got " +
                                     std::to_string(args.size()),
                                 tok.position);
            }
            return make(fn->op, std::move(args));
        }
        throw ParseError("expected a number, 'f', a function call, or '('", tok.position);
    }

    Lexer lexer_;
    Token current_;
};

}  // namespace

}  // namespace detail

WarpFunction parse(const std::string& text) {
    detail::Parser parser(text);
    auto root = std::make_shared<const detail::Expr>(parser.parse());
    return WarpFunction(text, std::move(root));
}

double WarpFunction::operator()(double f_hz) const {
    if (!std::isfinite(f_hz)) throw EvalError("input frequency is not finite", f_hz);
    const double r = detail::eval_node(*root_, f_hz);
    if (!std::isfinite(r)) throw EvalError("expression produced a non-finite value", f_hz);
    return r;
}

double evaluate(const WarpFunction& w, double f_hz) { return w(f_hz); }

std::string WarpFunction::canonical_text() const {
    std::string out;
    detail::print_node(*root_, out);
    return out;
}

}  // namespace specwarp
