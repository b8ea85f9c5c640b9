#include "lexer.hpp"

#include <cctype>

namespace mvl::detail {

namespace {

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

const char* tok_name(Tok k)
{
    switch (k) {
    case Tok::ident: return "identifier";
    case Tok::var: return "variable";
    case Tok::quoted: return "quoted atom";
    case Tok::integer: return "integer";
    case Tok::string: return "string";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::comma: return "','";
    case Tok::dot: return "'.'";
    case Tok::colon: return "':'";
    case Tok::if_: return "':-'";
    case Tok::defeasible_arrow: return "'~>'";
    case Tok::implies_arrow: return "'=>'";
    case Tok::neq: return "'\\='";
    case Tok::eq: return "'='";
    case Tok::end: return "end of input";
    }
    return "token";
}

} // namespace

std::vector<Token> tokenize(std::string_view src)
{
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto error = [&](const std::string& msg) { throw ParseError(msg, line, col); };

    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        if (c == '%') {
            while (i < src.size() && src[i] != '\n')
                advance();
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        auto two = [&](const char* s) { return src.substr(i, 2) == s; };
        if (std::islower(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j]))
                ++j;
            t.kind = Tok::ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j]))
                ++j;
            t.kind = Tok::var;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            t.kind = Tok::integer;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (c == '\'' || c == '"') {
            const char quote = c;
            t.kind = quote == '\'' ? Tok::quoted : Tok::string;
            advance();
            for (;;) {
                if (i >= src.size())
                    error("unterminated quoted text");
                char d = src[i];
                if (d == '\\' && i + 1 < src.size()) {
                    char e = src[i + 1];
                    t.text += e == 'n' ? '\n' : e;
                    advance(2);
                } else if (d == quote) {
                    if (i + 1 < src.size() && src[i + 1] == quote) {
                        t.text += quote;
                        advance(2);
                    } else {
                        advance();
                        break;
                    }
                } else {
                    t.text += d;
                    advance();
                }
            }
        } else if (two(":-")) {
            t.kind = Tok::if_;
            advance(2);
        } else if (two("~>")) {
            t.kind = Tok::defeasible_arrow;
            advance(2);
        } else if (two("=>")) {
            t.kind = Tok::implies_arrow;
            advance(2);
        } else if (two("\\=")) {
            t.kind = Tok::neq;
            advance(2);
        } else {
            switch (c) {
            case '(': t.kind = Tok::lparen; break;
            case ')': t.kind = Tok::rparen; break;
            case '[': t.kind = Tok::lbracket; break;
            case ']': t.kind = Tok::rbracket; break;
            case '{': t.kind = Tok::lbrace; break;
            case '}': t.kind = Tok::rbrace; break;
            case ',': t.kind = Tok::comma; break;
            case '.': t.kind = Tok::dot; break;
            case ':': t.kind = Tok::colon; break;
            case '=': t.kind = Tok::eq; break;
            default:
                error(std::string("unexpected character '") + c + "'");
            }
            advance();
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

const Token& Reader::peek(std::size_t ahead) const
{
    std::size_t p = pos_ + ahead;
    return p < toks_.size() ? toks_[p] : toks_.back();
}

Token Reader::next()
{
    Token t = peek();
    if (pos_ < toks_.size() - 1)
        ++pos_;
    return t;
}

bool Reader::at_ident(std::string_view text, std::size_t ahead) const
{
    const auto& t = peek(ahead);
    return t.kind == Tok::ident && t.text == text;
}

bool Reader::accept(Tok k)
{
    if (!at(k))
        return false;
    next();
    return true;
}

Token Reader::expect(Tok k, std::string_view what)
{
    if (!at(k))
        fail("expected " + std::string(what) + " (" + tok_name(k) + "), found " +
             (peek().text.empty() ? std::string(tok_name(peek().kind)) : "'" + peek().text + "'"));
    return next();
}

void Reader::fail(const Token& t, const std::string& msg) const
{
    throw ParseError(msg, t.line, t.column);
}

Term Reader::atom()
{
    const Token& t = peek();
    if (t.kind != Tok::ident && t.kind != Tok::quoted)
        fail("expected an atom");
    std::string name = next().text;
    if (!accept(Tok::lparen))
        return Term::constant(std::move(name));
    auto args = term_list(Tok::rparen);
    if (args.empty())
        fail(t, "compound term '" + name + "' needs at least one argument");
    return Term::compound(std::move(name), std::move(args));
}

Term Reader::term()
{
    const Token& t = peek();
    switch (t.kind) {
    case Tok::var: {
        std::string name = next().text;
        if (name == "_")
            name = "_#" + std::to_string(++anon_);
        return Term::variable(std::move(name));
    }
    case Tok::integer:
        return Term::constant(next().text);
    case Tok::ident:
    case Tok::quoted:
        return atom();
    default:
        fail("expected a term");
    }
}

std::vector<Term> Reader::term_list(Tok close)
{
    std::vector<Term> out;
    if (accept(close))
        return out;
    do {
        out.push_back(term());
    } while (accept(Tok::comma));
    expect(close, "closing bracket");
    return out;
}

Literal Reader::literal()
{
    if (at_ident("not") && !at(Tok::lparen, 1) && !at(Tok::comma, 1) && !at(Tok::dot, 1)) {
        next();
        return Literal::naf(atom());
    }
    if (at_ident("neg") && !at(Tok::lparen, 1) && !at(Tok::comma, 1) && !at(Tok::dot, 1)) {
        next();
        return Literal::neg(atom());
    }
    // Builtin comparisons start with a variable or constant on the left.
    if (at(Tok::var) || at(Tok::integer) ||
        ((at(Tok::ident) || at(Tok::quoted)) && (at(Tok::neq, 1) || at(Tok::eq, 1)))) {
        Term lhs = term();
        if (accept(Tok::neq))
            return Literal::pos(Term::compound("\\=", {lhs, term()}));
        if (accept(Tok::eq))
            return Literal::pos(Term::compound("=", {lhs, term()}));
        fail("a variable cannot stand as a literal");
    }
    return Literal::pos(atom());
}

std::vector<Literal> Reader::literal_list()
{
    std::vector<Literal> out;
    do {
        out.push_back(literal());
    } while (accept(Tok::comma));
    return out;
}

} // namespace mvl::detail
