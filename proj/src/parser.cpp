#include "txmev/lang.hpp"

#include "lexer.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <optional>

namespace txmev {

using detail::Lexeme;
using detail::Tok;

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

bool is_upper_ident(const std::string& s) { return !s.empty() && s[0] >= 'A' && s[0] <= 'Z'; }

bool is_keyword(const std::string& s) {
    static const char* const words[] = {"contract", "pre",  "tokens", "skip", "if",  "then", "else", "null", "true",
                                        "false",    "and",  "or",     "not",  "sec", "ver",  "cmt",  "rvl"};
    for (const char* w : words)
        if (s == w)
            return true;
    return false;
}

class Parser {
public:
    Parser(std::string_view src, std::set<Token> tokens) : toks_(detail::lex(src)), tokens_(std::move(tokens)) {}

    ContractDef contract(std::vector<std::pair<std::size_t, std::size_t>>& clause_pos) {
        ContractDef def;
        pragma();
        expect_word("contract");
        def.name = expect(Tok::Ident, "contract name").text;
        expect(Tok::LBrace, "'{'");
        pragma();
        while (!at(Tok::RBrace)) {
            if (at(Tok::End))
                fail("unterminated contract body");
            clause_pos.emplace_back(peek().line, peek().column);
            def.clauses.push_back(clause());
        }
        expect(Tok::RBrace, "'}'");
        if (!at(Tok::End))
            fail("unexpected input after contract");
        def.declared_tokens = tokens_;
        return def;
    }

    Transaction transaction(NonceCounter& counter) {
        Transaction tx;
        const Lexeme& name = expect(Tok::Ident, "procedure name");
        if (is_upper_ident(name.text) || is_keyword(name.text))
            fail_at(name, "invalid procedure name '" + name.text + "'");
        tx.proc_name = name.text;
        expect(Tok::LParen, "'('");
        if (!at(Tok::RParen)) {
            tx.args.push_back(tx_arg());
            while (accept(Tok::Comma))
                tx.args.push_back(tx_arg());
        }
        expect(Tok::RParen, "')'");
        if (accept(Tok::At)) {
            tx.nonce = number("transaction nonce");
            counter.observe(tx.nonce);
        } else {
            tx.nonce = counter.take();
        }
        return tx;
    }

    bool at(Tok k) const { return peek().kind == k; }
    bool accept(Tok k) {
        if (!at(k))
            return false;
        ++pos_;
        return true;
    }
    const Lexeme& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }
    [[noreturn]] void fail_at(const Lexeme& at, const std::string& msg) const {
        throw ParseError(at.line, at.column, msg);
    }

private:
    const Lexeme& expect(Tok k, const char* what) {
        if (!at(k)) {
            std::string found = at(Tok::End) ? "end of input" : "'" + peek().text + "'";
            fail(std::string("expected ") + what + ", found " + found);
        }
        return toks_[pos_++];
    }
    bool at_word(const char* w) const { return at(Tok::Ident) && peek().text == w; }
    bool accept_word(const char* w) {
        if (!at_word(w))
            return false;
        ++pos_;
        return true;
    }
    void expect_word(const char* w) {
        if (!accept_word(w))
            fail(std::string("expected '") + w + "'");
    }

    Amount number(const char* what) {
        if (at(Tok::Minus))
            fail("negative literals are not allowed");
        const Lexeme& t = expect(Tok::Number, what);
        Amount v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || p != t.text.data() + t.text.size())
            fail_at(t, "number out of range");
        return v;
    }

    void pragma() {
        while (accept_word("tokens")) {
            while (at(Tok::Ident)) {
                const Lexeme& t = toks_[pos_++];
                if (!is_upper_ident(t.text))
                    fail_at(t, "token names must start with an uppercase letter");
                tokens_.insert(Token{t.text});
            }
            expect(Tok::Semi, "';' after token list");
        }
    }

    // -- clauses --------------------------------------------------------------

    Clause clause() {
        Clause c;
        if (accept_word("pre"))
            c.precondition = expr();
        const Lexeme& name = expect(Tok::Ident, "procedure name");
        if (is_upper_ident(name.text) || is_keyword(name.text))
            fail_at(name, "invalid procedure name '" + name.text + "'");
        c.proc_name = name.text;
        expect(Tok::LParen, "'('");
        if (!at(Tok::RParen)) {
            c.params.push_back(param());
            while (accept(Tok::Comma))
                c.params.push_back(param());
        }
        expect(Tok::RParen, "')'");
        expect(Tok::LBrace, "'{'");
        c.body = stmts();
        expect(Tok::RBrace, "'}'");
        return c;
    }

    ParamSlot slot(bool token_position) {
        if (at(Tok::Number))
            return ParamSlot{ParamConst{NatLit{number("constant")}}};
        if (at(Tok::Minus))
            fail("negative literals are not allowed");
        const Lexeme& t = expect(Tok::Ident, "parameter");
        if (is_keyword(t.text))
            fail_at(t, "keyword '" + t.text + "' cannot be a parameter");
        if (is_upper_ident(t.text)) {
            if (token_position || tokens_.count(Token{t.text}))
                return ParamSlot{ParamConst{TokenLit{Token{t.text}}}};
            return ParamSlot{ParamConst{ActorLit{Actor{t.text}}}};
        }
        return ParamSlot{t.text};
    }

    Param param() {
        ParamSlot first = slot(false);
        if (!accept(Tok::Question))
            return PlainParam{std::move(first)};
        TokenInputParam p;
        p.actor = std::move(first);
        p.amount = slot(false);
        expect(Tok::Colon, "':' in token input");
        p.token = slot(true);
        return p;
    }

    // -- statements -----------------------------------------------------------

    Stmt stmts() {
        std::vector<Stmt> list;
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            list.push_back(stmt());
            if (!accept(Tok::Semi))
                break;
        }
        if (list.empty())
            return Stmt{Skip{}};
        Stmt out = list.back();
        for (std::size_t i = list.size() - 1; i-- > 0;)
            out = Stmt{Seq{list[i], out}};
        return out;
    }

    Stmt branch() { return stmt(); }

    Stmt stmt() {
        if (accept(Tok::LBrace)) {
            Stmt inner = stmts();
            expect(Tok::RBrace, "'}'");
            return inner;
        }
        if (accept_word("skip"))
            return Stmt{Skip{}};
        if (accept_word("if")) {
            Expr cond = expr();
            expect_word("then");
            Stmt then_branch = branch();
            Stmt else_branch{Skip{}};
            if (accept_word("else"))
                else_branch = branch();
            return Stmt{If{std::move(cond), then_branch, else_branch}};
        }

        const Lexeme& start = peek();
        Expr lhs = expr();
        if (accept(Tok::Assign)) {
            Expr rhs = expr();
            if (auto* v = std::get_if<VarRef>(&lhs.node))
                return Stmt{Assign{v->name, std::move(rhs)}};
            if (auto* m = std::get_if<MapLookup>(&lhs.node)) {
                if (auto* base = std::get_if<VarRef>(&m->map->node))
                    return Stmt{MapAssign{base->name, *m->key, std::move(rhs)}};
            }
            fail_at(start, "left side of ':=' must be a variable or x[e]");
        }
        if (accept(Tok::Bang)) {
            Expr amount = expr();
            expect(Tok::Colon, "':' in token output");
            Expr token = expr();
            return Stmt{TokenOutput{std::move(lhs), std::move(amount), std::move(token)}};
        }
        fail("expected ':=' or '!' after expression");
    }

    // -- expressions ----------------------------------------------------------

    Expr expr() { return or_expr(); }

    Expr or_expr() {
        Expr e = and_expr();
        while (accept_word("or"))
            e = make_binary(BinaryOp::Or, std::move(e), and_expr());
        return e;
    }

    Expr and_expr() {
        Expr e = cmp_expr();
        while (accept_word("and"))
            e = make_binary(BinaryOp::And, std::move(e), cmp_expr());
        return e;
    }

    std::optional<BinaryOp> cmp_op() const {
        switch (peek().kind) {
        case Tok::Eq: return BinaryOp::Eq;
        case Tok::Neq: return BinaryOp::Neq;
        case Tok::Lt: return BinaryOp::Lt;
        case Tok::Le: return BinaryOp::Le;
        case Tok::Gt: return BinaryOp::Gt;
        case Tok::Ge: return BinaryOp::Ge;
        default: return std::nullopt;
        }
    }

    Expr cmp_expr() {
        Expr e = add_expr();
        if (auto op = cmp_op()) {
            ++pos_;
            e = make_binary(*op, std::move(e), add_expr());
            if (cmp_op())
                fail("comparisons do not associate; add parentheses");
        }
        return e;
    }

    Expr add_expr() {
        Expr e = mul_expr();
        for (;;) {
            if (accept(Tok::Plus))
                e = make_binary(BinaryOp::Add, std::move(e), mul_expr());
            else if (accept(Tok::Minus))
                e = make_binary(BinaryOp::Sub, std::move(e), mul_expr());
            else
                return e;
        }
    }

    Expr mul_expr() {
        Expr e = unary();
        for (;;) {
            if (accept(Tok::Star))
                e = make_binary(BinaryOp::Mul, std::move(e), unary());
            else if (accept(Tok::Slash))
                e = make_binary(BinaryOp::Div, std::move(e), unary());
            else
                return e;
        }
    }

    Expr unary() {
        if (accept_word("not"))
            return Expr{Not{unary()}};
        return postfix();
    }

    Expr postfix() {
        Expr e = primary();
        while (accept(Tok::LBracket)) {
            Expr key = expr();
            expect(Tok::RBracket, "']'");
            e = Expr{MapLookup{std::move(e), std::move(key)}};
        }
        return e;
    }

    Expr primary() {
        if (at(Tok::Number))
            return Expr{NatLit{number("number")}};
        if (at(Tok::Minus))
            fail("negative literals are not allowed");
        if (accept(Tok::LParen)) {
            Expr e = expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (accept(Tok::Hash))
            return Expr{Balance{postfix()}};
        const Lexeme& t = expect(Tok::Ident, "expression");
        const std::string& w = t.text;
        if (w == "null")
            return Expr{NullLit{}};
        if (w == "true")
            return Expr{BoolLit{true}};
        if (w == "false")
            return Expr{BoolLit{false}};
        if (w == "sec") {
            expect(Tok::LParen, "'('");
            Expr r = expr();
            expect(Tok::RParen, "')'");
            return Expr{SecretOf{std::move(r)}};
        }
        if (w == "ver") {
            expect(Tok::LParen, "'('");
            Expr r = expr();
            expect(Tok::Comma, "','");
            Expr k = expr();
            expect(Tok::RParen, "')'");
            return Expr{Verify{std::move(r), std::move(k)}};
        }
        if (is_keyword(w))
            fail_at(t, "unexpected keyword '" + w + "'");
        if (is_upper_ident(w)) {
            if (tokens_.count(Token{w}))
                return Expr{TokenLit{Token{w}}};
            return Expr{ActorLit{Actor{w}}};
        }
        return make_var(w);
    }

    // -- transaction arguments ------------------------------------------------

    NonceId nonce_literal() {
        const Lexeme& owner = expect(Tok::Ident, "nonce owner");
        if (!is_upper_ident(owner.text))
            fail_at(owner, "nonce owner must be an actor");
        expect(Tok::Dot, "'.' in nonce");
        return NonceId{Actor{owner.text}, number("nonce index")};
    }

    TxArg tx_arg() {
        if (at(Tok::Number))
            return NatArg{number("argument")};
        if (at(Tok::Minus))
            fail("negative literals are not allowed");
        const Lexeme& t = expect(Tok::Ident, "argument");
        if (t.text == "cmt" || t.text == "rvl") {
            expect(Tok::LParen, "'('");
            NonceId n = nonce_literal();
            expect(Tok::Comma, "','");
            Amount v = number("secret");
            expect(Tok::RParen, "')'");
            if (t.text == "cmt")
                return CommitArg{n, v};
            return RevealArg{n, v};
        }
        if (!is_upper_ident(t.text))
            fail_at(t, "transaction arguments must be constants, got '" + t.text + "'");
        if (accept(Tok::Question)) {
            Amount n = number("token amount");
            expect(Tok::Colon, "':' in token input");
            const Lexeme& tok = expect(Tok::Ident, "token");
            if (!is_upper_ident(tok.text))
                fail_at(tok, "token names must start with an uppercase letter");
            return TokenInputArg{Actor{t.text}, n, Token{tok.text}};
        }
        if (tokens_.count(Token{t.text}))
            return TokenArg{Token{t.text}};
        return ActorArg{Actor{t.text}};
    }

    std::vector<Lexeme> toks_;
    std::size_t pos_ = 0;
    std::set<Token> tokens_;
};

// -- static facts collected after parsing ----------------------------------

void expr_actors(const Expr& e, std::set<Actor>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ActorLit>)
                out.insert(n.actor);
            else if constexpr (std::is_same_v<T, MapLookup>) {
                expr_actors(*n.map, out);
                expr_actors(*n.key, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                expr_actors(*n.lhs, out);
                expr_actors(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, Not>)
                expr_actors(*n.operand, out);
            else if constexpr (std::is_same_v<T, Balance>)
                expr_actors(*n.token, out);
            else if constexpr (std::is_same_v<T, SecretOf>)
                expr_actors(*n.reveal, out);
            else if constexpr (std::is_same_v<T, Verify>) {
                expr_actors(*n.reveal, out);
                expr_actors(*n.commit, out);
            }
        },
        e.node);
}

void stmt_actors(const Stmt& s, std::set<Actor>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Assign>)
                expr_actors(n.value, out);
            else if constexpr (std::is_same_v<T, MapAssign>) {
                expr_actors(n.key, out);
                expr_actors(n.value, out);
            } else if constexpr (std::is_same_v<T, TokenOutput>) {
                expr_actors(n.recipient, out);
                expr_actors(n.amount, out);
                expr_actors(n.token, out);
            } else if constexpr (std::is_same_v<T, Seq>) {
                stmt_actors(*n.first, out);
                stmt_actors(*n.second, out);
            } else if constexpr (std::is_same_v<T, If>) {
                expr_actors(n.cond, out);
                stmt_actors(*n.then_branch, out);
                stmt_actors(*n.else_branch, out);
            }
        },
        s.node);
}

void slot_actors(const ParamSlot& slot, std::set<Actor>& out) {
    if (slot.is_var())
        return;
    if (auto* a = std::get_if<ActorLit>(&std::get<ParamConst>(slot.value)))
        out.insert(a->actor);
}

void expr_map_vars(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, MapLookup>) {
                if (auto* v = std::get_if<VarRef>(&n.map->node))
                    out.insert(v->name);
                expr_map_vars(*n.map, out);
                expr_map_vars(*n.key, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                expr_map_vars(*n.lhs, out);
                expr_map_vars(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, Not>)
                expr_map_vars(*n.operand, out);
            else if constexpr (std::is_same_v<T, Balance>)
                expr_map_vars(*n.token, out);
            else if constexpr (std::is_same_v<T, SecretOf>)
                expr_map_vars(*n.reveal, out);
            else if constexpr (std::is_same_v<T, Verify>) {
                expr_map_vars(*n.reveal, out);
                expr_map_vars(*n.commit, out);
            }
        },
        e.node);
}

void stmt_map_vars(const Stmt& s, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Assign>)
                expr_map_vars(n.value, out);
            else if constexpr (std::is_same_v<T, MapAssign>) {
                out.insert(n.var);
                expr_map_vars(n.key, out);
                expr_map_vars(n.value, out);
            } else if constexpr (std::is_same_v<T, TokenOutput>) {
                expr_map_vars(n.recipient, out);
                expr_map_vars(n.amount, out);
                expr_map_vars(n.token, out);
            } else if constexpr (std::is_same_v<T, Seq>) {
                stmt_map_vars(*n.first, out);
                stmt_map_vars(*n.second, out);
            } else if constexpr (std::is_same_v<T, If>) {
                expr_map_vars(n.cond, out);
                stmt_map_vars(*n.then_branch, out);
                stmt_map_vars(*n.else_branch, out);
            }
        },
        s.node);
}

} // namespace

namespace detail {

void compute_static_facts(ContractDef& def) {
    def.hardcoded_actors.clear();
    def.map_vars.clear();
    for (const auto& c : def.clauses) {
        expr_actors(c.precondition, def.hardcoded_actors);
        stmt_actors(c.body, def.hardcoded_actors);
        for (const auto& p : c.params) {
            if (auto* pp = std::get_if<PlainParam>(&p)) {
                slot_actors(pp->slot, def.hardcoded_actors);
            } else {
                const auto& ti = std::get<TokenInputParam>(p);
                slot_actors(ti.actor, def.hardcoded_actors);
                slot_actors(ti.amount, def.hardcoded_actors);
                slot_actors(ti.token, def.hardcoded_actors);
            }
        }
        std::set<std::string> maps;
        expr_map_vars(c.precondition, maps);
        stmt_map_vars(c.body, maps);
        std::vector<std::string> formals = param_vars(c);
        for (const auto& m : maps)
            if (std::find(formals.begin(), formals.end(), m) == formals.end())
                def.map_vars.insert(m);
    }
}

} // namespace detail

ContractDef parse_contract(std::string_view text, const std::set<Token>& known_tokens, ParseMode mode) {
    Parser p(text, known_tokens);
    std::vector<std::pair<std::size_t, std::size_t>> positions;
    ContractDef def = p.contract(positions);
    detail::compute_static_facts(def);
    if (mode == ParseMode::Strict) {
        for (const auto& d : check_wellformed(def)) {
            if (!d.is_error())
                continue;
            auto [line, col] = d.clauses.empty() ? std::pair<std::size_t, std::size_t>{1, 1}
                                                 : positions.at(d.clauses.front());
            throw ParseError(line, col, d.message);
        }
    }
    return def;
}

ContractDef load_contract(std::string_view text, const std::set<Token>& known_tokens) {
    return desugar_constants(parse_contract(text, known_tokens));
}

Transaction parse_transaction(std::string_view text, const std::set<Token>& known_tokens, NonceCounter& counter) {
    Parser p(text, known_tokens);
    Transaction tx = p.transaction(counter);
    if (!p.at(Tok::End))
        p.fail("unexpected input after transaction");
    return tx;
}

std::vector<Transaction> parse_transaction_list(std::string_view text, const std::set<Token>& known_tokens,
                                                NonceCounter& counter) {
    Parser p(text, known_tokens);
    std::vector<Transaction> out;
    while (!p.at(Tok::End)) {
        out.push_back(p.transaction(counter));
        if (!p.accept(Tok::Comma) && !p.at(Tok::End) && !p.at(Tok::Ident))
            p.fail("expected ',' between transactions");
    }
    return out;
}

} // namespace txmev
