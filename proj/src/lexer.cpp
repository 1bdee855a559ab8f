#include "lexer.hpp"

#include "txmev/lang.hpp"

#include <cctype>

namespace txmev::detail {

const char* describe(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Question: return "'?'";
    case Tok::Bang: return "'!'";
    case Tok::Assign: return "':='";
    case Tok::Eq: return "'='";
    case Tok::Neq: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Hash: return "'#'";
    case Tok::Dot: return "'.'";
    case Tok::At: return "'@'";
    case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Lexeme> lex(std::string_view src) {
    std::vector<Lexeme> out;
    std::size_t i = 0, line = 1, col = 1;
    int depth = 0;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto skip_line = [&] {
        while (i < src.size() && src[i] != '\n')
            advance(1);
    };

    while (i < src.size()) {
        char ch = src[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            advance(1);
            continue;
        }
        if (ch == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            skip_line();
            continue;
        }
        if (ch == '#' && depth == 0) {
            skip_line();
            continue;
        }

        std::size_t l = line, c = col;
        auto push = [&](Tok k, std::size_t len) {
            out.push_back({k, std::string(src.substr(i, len)), l, c});
            advance(len);
        };

        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            push(Tok::Ident, j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            push(Tok::Number, j - i);
            continue;
        }

        char next = i + 1 < src.size() ? src[i + 1] : '\0';
        switch (ch) {
        case '{': ++depth; push(Tok::LBrace, 1); break;
        case '}': --depth; push(Tok::RBrace, 1); break;
        case '(': push(Tok::LParen, 1); break;
        case ')': push(Tok::RParen, 1); break;
        case '[': push(Tok::LBracket, 1); break;
        case ']': push(Tok::RBracket, 1); break;
        case ',': push(Tok::Comma, 1); break;
        case ';': push(Tok::Semi, 1); break;
        case '?': push(Tok::Question, 1); break;
        case '+': push(Tok::Plus, 1); break;
        case '-': push(Tok::Minus, 1); break;
        case '*': push(Tok::Star, 1); break;
        case '/': push(Tok::Slash, 1); break;
        case '#': push(Tok::Hash, 1); break;
        case '.': push(Tok::Dot, 1); break;
        case '@': push(Tok::At, 1); break;
        case '=': push(Tok::Eq, 1); break;
        case ':':
            if (next == '=')
                push(Tok::Assign, 2);
            else
                push(Tok::Colon, 1);
            break;
        case '!':
            if (next == '=')
                push(Tok::Neq, 2);
            else
                push(Tok::Bang, 1);
            break;
        case '<':
            if (next == '=')
                push(Tok::Le, 2);
            else
                push(Tok::Lt, 1);
            break;
        case '>':
            if (next == '=')
                push(Tok::Ge, 2);
            else
                push(Tok::Gt, 1);
            break;
        default:
            throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

} // namespace txmev::detail
