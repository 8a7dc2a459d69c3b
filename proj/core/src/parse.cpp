#include "powerarith/formula.hpp"

#include <cctype>

namespace powerarith {

ParseError::ParseError(std::size_t offset, const std::string& message)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

namespace {

struct Token {
    enum Kind { Open, Close, Atom, End } kind;
    std::string text;
    std::size_t offset;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ >= src_.size()) {
            cur_ = {Token::End, "", pos_};
            return;
        }
        char c = src_[pos_];
        if (c == '(' || c == ')') {
            cur_ = {c == '(' ? Token::Open : Token::Close, std::string(1, c), pos_};
            ++pos_;
            return;
        }
        std::size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != '(' && src_[pos_] != ')' &&
               !std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
        cur_ = {Token::Atom, std::string(src_.substr(start, pos_ - start)), start};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token cur_{Token::End, "", 0};
};

bool is_integer(const std::string& s) {
    std::size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

bool is_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    }
    return s != "true" && s != "false";
}

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    Formula formula() {
        Token t = lex_.next();
        if (t.kind == Token::Atom) {
            if (t.text == "true") return fm::truth();
            if (t.text == "false") return fm::falsity();
            throw ParseError(t.offset, "expected formula, got '" + t.text + "'");
        }
        if (t.kind != Token::Open) throw ParseError(t.offset, "expected formula");
        Token head = expect_atom("operator");
        const std::string& op = head.text;
        Formula out;
        if (op == "=" || op == "<") {
            Term a = term();
            Term b = term();
            out = op == "=" ? fm::eq(std::move(a), std::move(b)) : fm::lt(std::move(a), std::move(b));
        } else if (op == "U" || op == "D") {
            Token p = expect_atom("integer");
            if (!is_integer(p.text)) throw ParseError(p.offset, "expected integer literal");
            Int v = parse_int(p.text);
            if (op == "U" && v < 2) throw ParseError(p.offset, "U base must be >= 2");
            if (op == "D" && v < 2) throw ParseError(p.offset, "D modulus must be >= 2");
            Term t = term();
            out = op == "U" ? fm::U(v, std::move(t)) : fm::D(v, std::move(t));
        } else if (op == "not") {
            out = fm::neg(formula());
        } else if (op == "and" || op == "or") {
            std::vector<Formula> parts;
            while (lex_.peek().kind != Token::Close && lex_.peek().kind != Token::End) {
                parts.push_back(formula());
            }
            out = op == "and" ? fm::conj(std::move(parts)) : fm::disj(std::move(parts));
        } else if (op == "->" || op == "<->") {
            Formula a = formula();
            Formula b = formula();
            out = op == "->" ? fm::implies(std::move(a), std::move(b)) : fm::iff(std::move(a), std::move(b));
        } else if (op == "forall" || op == "exists") {
            Token v = expect_atom("variable");
            if (!is_identifier(v.text)) throw ParseError(v.offset, "bad variable name '" + v.text + "'");
            Formula body = formula();
            out = op == "forall" ? fm::forall(v.text, std::move(body)) : fm::exists(v.text, std::move(body));
        } else {
            throw ParseError(head.offset, "unknown formula operator '" + op + "'");
        }
        expect_close();
        return out;
    }

    Term term() {
        Token t = lex_.next();
        if (t.kind == Token::Atom) {
            if (is_integer(t.text)) return Term(parse_int(t.text));
            if (is_identifier(t.text)) return Term::var(t.text);
            throw ParseError(t.offset, "expected term, got '" + t.text + "'");
        }
        if (t.kind != Token::Open) throw ParseError(t.offset, "expected term");
        Token head = expect_atom("term operator");
        const std::string& op = head.text;
        Term out;
        if (op == "+") {
            while (lex_.peek().kind != Token::Close && lex_.peek().kind != Token::End) out += term();
        } else if (op == "-") {
            out = term();
            if (lex_.peek().kind == Token::Close) {
                out = -out;
            } else {
                while (lex_.peek().kind != Token::Close && lex_.peek().kind != Token::End) out -= term();
            }
        } else if (op == "scale") {
            Token c = expect_atom("integer");
            if (!is_integer(c.text)) throw ParseError(c.offset, "scale expects an integer literal");
            Int f = parse_int(c.text);
            out = f * term();
        } else if (op == "const") {
            Token c = expect_atom("integer");
            if (!is_integer(c.text)) throw ParseError(c.offset, "const expects an integer literal");
            out = Term(parse_int(c.text));
        } else {
            throw ParseError(head.offset, "unknown term operator '" + op + "'");
        }
        expect_close();
        return out;
    }

    void finish() {
        const Token& t = lex_.peek();
        if (t.kind != Token::End) throw ParseError(t.offset, "trailing input");
    }

private:
    Token expect_atom(const char* what) {
        Token t = lex_.next();
        if (t.kind != Token::Atom) throw ParseError(t.offset, std::string("expected ") + what);
        return t;
    }

    void expect_close() {
        Token t = lex_.next();
        if (t.kind != Token::Close) throw ParseError(t.offset, "expected ')'");
    }

    Lexer lex_;
};

}  // namespace

Formula parse_formula(std::string_view text) {
    Parser p(text);
    Formula f = p.formula();
    p.finish();
    return f;
}

Term parse_term(std::string_view text) {
    Parser p(text);
    Term t = p.term();
    p.finish();
    return t;
}

}  // namespace powerarith
