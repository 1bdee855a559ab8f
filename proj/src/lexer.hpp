#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace txmev::detail {

enum class Tok {
    Ident,
    Number,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Question,
    Bang,
    Assign, // :=
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Hash,
    Dot,
    At,
    End,
};

const char* describe(Tok t);

struct Lexeme {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

/// `#` starts a comment only outside braces, where it cannot mean a balance.
/// `//` starts a comment anywhere.
std::vector<Lexeme> lex(std::string_view src);

} // namespace txmev::detail
