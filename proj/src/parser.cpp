#include "mage/parser.hpp"

#include <cctype>

#include "mage/errors.hpp"

namespace mage {

namespace {

enum class Tok { Int, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek(int ahead = 0) {
        while ((int)buf_.size() <= ahead) buf_.push_back(lex());
        return buf_[ahead];
    }
    Token next() {
        Token t = peek();
        buf_.erase(buf_.begin());
        return t;
    }

private:
    void advance() {}

    Token lex() {
        while (pos_ < src_.size() &&
               (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                src_[pos_] == '\r')) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
        int line = line_, col = col_;
        if (pos_ >= src_.size()) return {Tok::End, "", line, col};
        char c = src_[pos_];
        auto one = [&](Tok k) {
            ++pos_;
            ++col_;
            return Token{k, std::string(1, c), line, col};
        };
        switch (c) {
            case '+': return one(Tok::Plus);
            case '-': return one(Tok::Minus);
            case '*': return one(Tok::Star);
            case '/': return one(Tok::Slash);
            case '^': return one(Tok::Caret);
            case '(': return one(Tok::LParen);
            case ')': return one(Tok::RParen);
            default: break;
        }
        if (std::isdigit((unsigned char)c)) {
            std::string s;
            while (pos_ < src_.size() && std::isdigit((unsigned char)src_[pos_])) {
                s += src_[pos_++];
                ++col_;
            }
            return {Tok::Int, s, line, col};
        }
        if (std::isalpha((unsigned char)c)) {
            std::string s;
            while (pos_ < src_.size() && std::isalpha((unsigned char)src_[pos_])) {
                s += src_[pos_++];
                ++col_;
            }
            while (pos_ < src_.size() && std::isdigit((unsigned char)src_[pos_])) {
                s += src_[pos_++];
                ++col_;
            }
            return {Tok::Name, s, line, col};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    std::vector<Token> buf_;
};

struct NameInfo {
    bool is_cov = false; // dqN / dpN
    bool is_p = false;
    int index = 0; // 1-based
};

NameInfo classify_name(const Token& t, int n) {
    NameInfo info;
    const std::string& s = t.text;
    size_t dp = 0;
    if (s.rfind("dq", 0) == 0 || s.rfind("dp", 0) == 0) {
        info.is_cov = true;
        info.is_p = s[1] == 'p';
        dp = 2;
    } else if (s[0] == 'q' || s[0] == 'p') {
        info.is_p = s[0] == 'p';
        dp = 1;
    } else {
        throw ParseError("unknown variable '" + s + "'", t.line, t.col);
    }
    if (dp >= s.size())
        throw ParseError("variable '" + s + "' is missing its index", t.line, t.col);
    info.index = 0;
    for (size_t i = dp; i < s.size(); ++i) {
        if (!std::isdigit((unsigned char)s[i]))
            throw ParseError("unknown variable '" + s + "'", t.line, t.col);
        info.index = info.index * 10 + (s[i] - '0');
    }
    if (info.index < 1 || info.index > n)
        throw ParseError("index out of range 1.." + std::to_string(n) + " in '" + s + "'",
                         t.line, t.col);
    return info;
}

class Parser {
public:
    Parser(const std::string& src, int n) : lex_(src), n_(n) {}

    struct TermData {
        Poly coeff;
        std::vector<int> covs;
    };

    Form parse_form_expr() {
        std::vector<TermData> terms;
        bool negate = false;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.next();
            negate = true;
        } else if (lex_.peek().kind == Tok::Plus) {
            lex_.next();
        }
        while (true) {
            TermData td = parse_term();
            if (negate) td.coeff = -td.coeff;
            terms.push_back(std::move(td));
            Tok k = lex_.peek().kind;
            if (k == Tok::Plus || k == Tok::Minus) {
                negate = k == Tok::Minus;
                lex_.next();
                continue;
            }
            break;
        }
        expect(Tok::End, "end of input");
        int degree = -1;
        for (const auto& t : terms) {
            int d = (int)t.covs.size();
            if (degree < 0)
                degree = d;
            else if (degree != d)
                throw ParseError("mixed degrees in form expression", 1, 1);
        }
        Form out = form_zero(n_, degree < 0 ? 0 : degree);
        for (const auto& t : terms) {
            std::vector<int> covs = t.covs;
            out = out + basis_form(n_, covs, t.coeff);
        }
        return out;
    }

    Poly parse_poly_expr_top() {
        Poly p = parse_poly_expr(false);
        expect(Tok::End, "end of input");
        return p;
    }

private:
    bool peek_is_cov(int ahead = 0) {
        const Token& t = lex_.peek(ahead);
        return t.kind == Tok::Name &&
               (t.text.rfind("dq", 0) == 0 || t.text.rfind("dp", 0) == 0);
    }

    // One summand of a form expression. The coefficient slot is a product
    // (sums go in parentheses); '+'/'-' at term level separate summands.
    TermData parse_term() {
        TermData td;
        td.coeff = Poly::constant(2 * n_, 1);
        if (peek_is_cov()) {
            td.covs = parse_wedge();
            return td;
        }
        td.coeff = parse_poly_mul(true);
        if (lex_.peek().kind == Tok::Star && peek_is_cov(1)) {
            lex_.next();
            td.covs = parse_wedge();
        }
        return td;
    }

    std::vector<int> parse_wedge() {
        std::vector<int> covs;
        covs.push_back(parse_cov());
        while (lex_.peek().kind == Tok::Caret) {
            lex_.next();
            covs.push_back(parse_cov());
        }
        return covs;
    }

    int parse_cov() {
        Token t = lex_.peek();
        if (t.kind != Tok::Name || !peek_is_cov())
            throw ParseError("expected a covector dqN or dpN", t.line, t.col);
        lex_.next();
        NameInfo info = classify_name(t, n_);
        return info.is_p ? n_ + info.index : info.index;
    }

    // stop_at_wedge: inside a form term, '*' followed by a covector finishes
    // the coefficient
    Poly parse_poly_expr(bool stop_at_wedge) {
        Poly p = parse_poly_mul(stop_at_wedge);
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Plus || k == Tok::Minus) {
                lex_.next();
                Poly rhs = parse_poly_mul(stop_at_wedge);
                p = k == Tok::Plus ? p + rhs : p - rhs;
                continue;
            }
            break;
        }
        return p;
    }

    Poly parse_poly_mul(bool stop_at_wedge) {
        Poly p = parse_poly_unary(stop_at_wedge);
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Star) {
                if (stop_at_wedge && peek_is_cov(1)) break;
                lex_.next();
                p = p * parse_poly_unary(stop_at_wedge);
                continue;
            }
            if (k == Tok::Slash) {
                Token slash = lex_.next();
                Poly d = parse_poly_unary(stop_at_wedge);
                if (!d.is_constant())
                    throw ParseError("division by a non-constant polynomial", slash.line,
                                     slash.col);
                Rational dv = d.constant_value();
                if (dv.is_zero())
                    throw ParseError("division by zero", slash.line, slash.col);
                p = p.scaled(dv.inverse());
                continue;
            }
            break;
        }
        return p;
    }

    Poly parse_poly_unary(bool stop_at_wedge) {
        Tok k = lex_.peek().kind;
        if (k == Tok::Minus) {
            lex_.next();
            return -parse_poly_unary(stop_at_wedge);
        }
        if (k == Tok::Plus) {
            lex_.next();
            return parse_poly_unary(stop_at_wedge);
        }
        return parse_poly_atom(stop_at_wedge);
    }

    Poly parse_poly_atom(bool) {
        Token t = lex_.peek();
        Poly base(2 * n_);
        if (t.kind == Tok::Int) {
            lex_.next();
            base = Poly::constant(2 * n_, Rational::from_string(t.text));
        } else if (t.kind == Tok::LParen) {
            lex_.next();
            base = parse_poly_expr(false);
            expect(Tok::RParen, "')'");
        } else if (t.kind == Tok::Name) {
            if (peek_is_cov())
                throw ParseError("covector '" + t.text + "' cannot appear inside a coefficient",
                                 t.line, t.col);
            lex_.next();
            NameInfo info = classify_name(t, n_);
            int var = info.is_p ? n_ + info.index - 1 : info.index - 1;
            base = Poly::variable(2 * n_, var);
        } else {
            throw ParseError("expected a number, variable or '('", t.line, t.col);
        }
        if (lex_.peek().kind == Tok::Caret) {
            Token caret = lex_.next();
            Token e = lex_.peek();
            if (e.kind != Tok::Int)
                throw ParseError("expected an integer exponent after '^'", e.line, e.col);
            lex_.next();
            long exp = std::stol(e.text);
            if (exp < 1)
                throw ParseError("exponent must be a positive integer", caret.line, caret.col);
            base = base.pow((unsigned)exp);
        }
        return base;
    }

    void expect(Tok k, const std::string& what) {
        Token t = lex_.peek();
        if (t.kind != k)
            throw ParseError("expected " + what + (t.text.empty() ? "" : ", got '" + t.text + "'"),
                             t.line, t.col);
        if (k != Tok::End) lex_.next();
    }

    Lexer lex_;
    int n_;
};

} // namespace

Form parse_form(const std::string& src, int n) {
    if (n < 1) throw DomainError("parse_form: dimension must be at least 1");
    return Parser(src, n).parse_form_expr();
}

Poly parse_poly(const std::string& src, int n) {
    if (n < 1) throw DomainError("parse_poly: dimension must be at least 1");
    return Parser(src, n).parse_poly_expr_top();
}

std::vector<Rational> parse_point(const std::string& src) {
    std::vector<Rational> out;
    size_t start = 0;
    while (start <= src.size()) {
        size_t comma = src.find(',', start);
        std::string piece = src.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        size_t a = piece.find_first_not_of(" \t");
        size_t b = piece.find_last_not_of(" \t");
        if (a == std::string::npos)
            throw ParseError("empty coordinate in point", 1, (int)start + 1);
        out.push_back(Rational::from_string(piece.substr(a, b - a + 1)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace mage
