#pragma once

#include "mvlogic/document.hpp"
#include "mvlogic/term.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mvl::detail {

enum class Tok {
    ident,   // lowercase atom
    var,     // Variable or _
    quoted,  // 'quoted atom'
    integer,
    string,  // "text"
    lparen, rparen, lbracket, rbracket, lbrace, rbrace,
    comma, dot, colon, if_, defeasible_arrow, implies_arrow, neq, eq,
    end,
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    int line = 1;
    int column = 1;
};

std::vector<Token> tokenize(std::string_view source);

/// Recursive-descent reader over a token vector. Anonymous variables are
/// numbered per statement; call `begin_statement()` to reset.
class Reader {
public:
    explicit Reader(std::string_view source) : toks_(tokenize(source)) {}

    const Token& peek(std::size_t ahead = 0) const;
    Token next();
    bool at(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
    bool at_ident(std::string_view text, std::size_t ahead = 0) const;
    bool accept(Tok k);
    Token expect(Tok k, std::string_view what);
    [[noreturn]] void fail(const Token& at, const std::string& msg) const;
    [[noreturn]] void fail(const std::string& msg) const { fail(peek(), msg); }

    void begin_statement() { anon_ = 0; }

    Term term();
    /// Atom position: identifier / quoted name with optional args.
    Term atom();
    Literal literal();
    std::vector<Literal> literal_list();
    /// Comma separated terms inside already-consumed brackets until `close`.
    std::vector<Term> term_list(Tok close);

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int anon_ = 0;
};

/// Prefix-syntax modal formula starting at the reader's position.
ModalFormula read_formula(Reader& r);

} // namespace mvl::detail
