#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "utimage/errors.hpp"
#include "utimage/rational.hpp"

namespace utimage {

// Surface syntax for noncommutative polynomial expressions:
//
//   expr   := term (('+'|'-') term)*
//   term   := (rational '*'?)? factor ('*'? factor)*
//   factor := variable | commutator | '(' expr ')'
//   commutator := '[' expr (',' expr)+ ']'        left-normed: [a,b,c] = [[a,b],c]
//   variable := 'x' digit+      rational := '-'? digit+ ('/' digit+)?
//
// Whitespace may separate tokens anywhere.
struct Expr {
    enum class Kind { Variable, Scalar, Sum, Product, Commutator };

    Kind kind = Kind::Variable;
    int var = 0;             // Variable
    Rat scalar;              // Scalar
    std::vector<Expr> args;  // Sum / Product / Commutator (>= 2 children)

    static Expr variable(int index) {
        Expr e;
        e.kind = Kind::Variable;
        e.var = index;
        return e;
    }
    static Expr scalar_value(Rat c) {
        Expr e;
        e.kind = Kind::Scalar;
        e.scalar = std::move(c);
        return e;
    }
    static Expr sum(std::vector<Expr> parts) {
        Expr e;
        e.kind = Kind::Sum;
        e.args = std::move(parts);
        return e;
    }
    static Expr product(std::vector<Expr> parts) {
        Expr e;
        e.kind = Kind::Product;
        e.args = std::move(parts);
        return e;
    }
    static Expr commutator_of(std::vector<Expr> parts) {
        Expr e;
        e.kind = Kind::Commutator;
        e.args = std::move(parts);
        return e;
    }
};

namespace detail {

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool digit_at(std::size_t p) const {
        return p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]));
    }

    Expr expr() {
        std::vector<Expr> parts;
        parts.push_back(term());
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                parts.push_back(term());
            } else if (c == '-') {
                ++pos_;
                Expr t = term();
                parts.push_back(
                    Expr::product({Expr::scalar_value(Rat(-1)), std::move(t)}));
            } else {
                break;
            }
        }
        if (parts.size() == 1) return std::move(parts.front());
        return Expr::sum(std::move(parts));
    }

    bool at_rational() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
        return c == '-' && digit_at(pos_ + 1);
    }

    bool at_factor() {
        char c = peek();
        return c == 'x' || c == '[' || c == '(';
    }

    Expr term() {
        std::vector<Expr> parts;
        if (at_rational()) {
            parts.push_back(Expr::scalar_value(rational()));
            eat('*');
        }
        if (!at_factor()) fail("expected a factor (variable, commutator or parenthesis)");
        parts.push_back(factor());
        for (;;) {
            bool starred = eat('*');
            if (at_factor()) {
                parts.push_back(factor());
                continue;
            }
            if (starred) fail("expected a factor after '*'");
            break;
        }
        if (parts.size() == 1) return std::move(parts.front());
        return Expr::product(std::move(parts));
    }

    Expr factor() {
        char c = peek();
        if (c == 'x') {
            ++pos_;
            return Expr::variable(var_index());
        }
        if (c == '[') {
            ++pos_;
            std::vector<Expr> parts;
            parts.push_back(expr());
            if (!eat(',')) fail("a commutator needs at least two comma-separated entries");
            parts.push_back(expr());
            while (eat(',')) parts.push_back(expr());
            if (!eat(']')) fail("expected ',' or ']' in commutator");
            return Expr::commutator_of(std::move(parts));
        }
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        fail("expected a factor (variable, commutator or parenthesis)");
    }

    int var_index() {
        if (!digit_at(pos_)) fail("expected digits after 'x'");
        std::size_t start = pos_;
        while (digit_at(pos_)) ++pos_;
        long idx = 0;
        for (std::size_t p = start; p < pos_; ++p) {
            idx = idx * 10 + (text_[p] - '0');
            if (idx > 1'000'000) fail("variable index out of range");
        }
        if (idx < 1) fail("variable indices start at x1");
        return static_cast<int>(idx);
    }

    Rat rational() {
        skip_ws();
        std::size_t start = pos_;
        if (text_[pos_] == '-') ++pos_;
        while (digit_at(pos_)) ++pos_;
        std::string num(text_.substr(start, pos_ - start));
        std::string den = "1";
        if (pos_ < text_.size() && text_[pos_] == '/' && digit_at(pos_ + 1)) {
            ++pos_;
            std::size_t dstart = pos_;
            while (digit_at(pos_)) ++pos_;
            den.assign(text_.substr(dstart, pos_ - dstart));
        }
        Int d{den};
        if (d == 0) fail("zero denominator");
        return Rat(Int{num}) / Rat(d);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace utimage
