#include "txmev/lang.hpp"

#include <sstream>

namespace txmev {

const char* to_string(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Neq: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    }
    return "?";
}

Expr make_binary(BinaryOp op, Expr lhs, Expr rhs) { return Expr{Binary{op, std::move(lhs), std::move(rhs)}}; }

Expr make_var(std::string name) { return Expr{VarRef{std::move(name)}}; }

namespace {

// Binding strength, loosest first. Atoms (literals, variables, lookups,
// balances, calls) bind tightest.
enum Level { LOr = 1, LAnd, LCmp, LAdd, LMul, LNot, LAtom };

int level(const Expr& e) {
    if (auto* b = std::get_if<Binary>(&e.node)) {
        switch (b->op) {
        case BinaryOp::Or: return LOr;
        case BinaryOp::And: return LAnd;
        case BinaryOp::Add:
        case BinaryOp::Sub: return LAdd;
        case BinaryOp::Mul:
        case BinaryOp::Div: return LMul;
        default: return LCmp;
        }
    }
    if (std::holds_alternative<Not>(e.node))
        return LNot;
    return LAtom;
}

void print(std::ostream& os, const Expr& e);

void print_at(std::ostream& os, const Expr& e, bool parens) {
    if (parens)
        os << '(';
    print(os, e);
    if (parens)
        os << ')';
}

void print(std::ostream& os, const Expr& e) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, NullLit>)
                os << "null";
            else if constexpr (std::is_same_v<T, BoolLit>)
                os << (n.value ? "true" : "false");
            else if constexpr (std::is_same_v<T, NatLit>)
                os << n.value;
            else if constexpr (std::is_same_v<T, ActorLit>)
                os << n.actor.name;
            else if constexpr (std::is_same_v<T, TokenLit>)
                os << n.token.name;
            else if constexpr (std::is_same_v<T, VarRef>)
                os << n.name;
            else if constexpr (std::is_same_v<T, MapLookup>) {
                print_at(os, *n.map, level(*n.map) < LAtom || std::holds_alternative<Balance>(n.map->node));
                os << '[';
                print(os, *n.key);
                os << ']';
            } else if constexpr (std::is_same_v<T, Binary>) {
                int me = level(e);
                int l = level(*n.lhs), r = level(*n.rhs);
                // Left-associative, except comparisons which do not chain.
                print_at(os, *n.lhs, me == LCmp ? l <= me : l < me);
                os << ' ' << to_string(n.op) << ' ';
                print_at(os, *n.rhs, r <= me);
            } else if constexpr (std::is_same_v<T, Not>) {
                os << "not ";
                print_at(os, *n.operand, level(*n.operand) < LNot);
            } else if constexpr (std::is_same_v<T, Balance>) {
                os << '#';
                print_at(os, *n.token, level(*n.token) < LAtom);
            } else if constexpr (std::is_same_v<T, SecretOf>) {
                os << "sec(";
                print(os, *n.reveal);
                os << ')';
            } else if constexpr (std::is_same_v<T, Verify>) {
                os << "ver(";
                print(os, *n.reveal);
                os << ", ";
                print(os, *n.commit);
                os << ')';
            }
        },
        e.node);
}

void print(std::ostream& os, const Stmt& s);

void print_branch(std::ostream& os, const Stmt& s, bool brace) {
    if (brace) {
        os << "{ ";
        print(os, s);
        os << " }";
    } else {
        print(os, s);
    }
}

void print(std::ostream& os, const Stmt& s) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>)
                os << "skip";
            else if constexpr (std::is_same_v<T, Assign>) {
                os << n.var << " := ";
                print(os, n.value);
            } else if constexpr (std::is_same_v<T, MapAssign>) {
                os << n.var << '[';
                print(os, n.key);
                os << "] := ";
                print(os, n.value);
            } else if constexpr (std::is_same_v<T, TokenOutput>) {
                print_at(os, n.recipient, level(n.recipient) < LAtom);
                os << '!';
                print(os, n.amount);
                os << ':';
                print(os, n.token);
            } else if constexpr (std::is_same_v<T, Seq>) {
                print_branch(os, *n.first, std::holds_alternative<Seq>(n.first->node) ||
                                               std::holds_alternative<If>(n.first->node));
                os << "; ";
                print(os, *n.second);
            } else if constexpr (std::is_same_v<T, If>) {
                os << "if ";
                print(os, n.cond);
                os << " then ";
                bool has_else = !std::holds_alternative<Skip>(n.else_branch->node);
                print_branch(os, *n.then_branch, std::holds_alternative<Seq>(n.then_branch->node) ||
                                                     std::holds_alternative<If>(n.then_branch->node));
                if (has_else) {
                    os << " else ";
                    print_branch(os, *n.else_branch, std::holds_alternative<Seq>(n.else_branch->node));
                }
            }
        },
        s.node);
}

void print_slot(std::ostream& os, const ParamSlot& s) {
    if (s.is_var()) {
        os << s.var();
        return;
    }
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, NatLit>)
                os << k.value;
            else if constexpr (std::is_same_v<T, ActorLit>)
                os << k.actor.name;
            else
                os << k.token.name;
        },
        std::get<ParamConst>(s.value));
}

} // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e);
    return os.str();
}

std::string to_string(const Stmt& s) {
    std::ostringstream os;
    print(os, s);
    return os.str();
}

std::string to_string(const Param& p) {
    std::ostringstream os;
    if (auto* pp = std::get_if<PlainParam>(&p)) {
        print_slot(os, pp->slot);
    } else {
        const auto& ti = std::get<TokenInputParam>(p);
        print_slot(os, ti.actor);
        os << '?';
        print_slot(os, ti.amount);
        os << ':';
        print_slot(os, ti.token);
    }
    return os.str();
}

std::string to_string(const Clause& c) {
    std::ostringstream os;
    bool default_pre = c.precondition == Expr{BoolLit{true}};
    if (!default_pre)
        os << "pre " << to_string(c.precondition) << '\n';
    os << c.proc_name << '(';
    for (std::size_t i = 0; i < c.params.size(); ++i)
        os << (i ? ", " : "") << to_string(c.params[i]);
    os << ") { ";
    if (!std::holds_alternative<Skip>(c.body.node))
        os << to_string(c.body) << ' ';
    os << '}';
    return os.str();
}

std::string to_string(const ContractDef& c) {
    std::ostringstream os;
    os << "contract " << c.name << " {\n";
    if (!c.declared_tokens.empty()) {
        os << "  tokens";
        for (const auto& t : c.declared_tokens)
            os << ' ' << t.name;
        os << ";\n";
    }
    for (const auto& cl : c.clauses) {
        os << '\n';
        std::istringstream lines(to_string(cl));
        for (std::string line; std::getline(lines, line);)
            os << "  " << line << '\n';
    }
    os << "}\n";
    return os.str();
}

std::string to_string(const TxArg& a) {
    std::ostringstream os;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NatArg>)
                os << x.value;
            else if constexpr (std::is_same_v<T, ActorArg>)
                os << x.actor.name;
            else if constexpr (std::is_same_v<T, TokenArg>)
                os << x.token.name;
            else if constexpr (std::is_same_v<T, TokenInputArg>)
                os << x.actor.name << '?' << x.amount << ':' << x.token.name;
            else if constexpr (std::is_same_v<T, CommitArg>)
                os << "cmt(" << x.nonce << ", " << x.secret << ')';
            else
                os << "rvl(" << x.nonce << ", " << x.secret << ')';
        },
        a);
    return os.str();
}

std::string to_string(const Transaction& tx, bool with_nonce) {
    std::ostringstream os;
    os << tx.proc_name << '(';
    for (std::size_t i = 0; i < tx.args.size(); ++i)
        os << (i ? ", " : "") << to_string(tx.args[i]);
    os << ')';
    if (with_nonce)
        os << '@' << tx.nonce;
    return os.str();
}

std::vector<std::string> param_vars(const Clause& c) {
    std::vector<std::string> out;
    auto add = [&](const ParamSlot& s) {
        if (s.is_var())
            out.push_back(s.var());
    };
    for (const auto& p : c.params) {
        if (auto* pp = std::get_if<PlainParam>(&p)) {
            add(pp->slot);
        } else {
            const auto& ti = std::get<TokenInputParam>(p);
            add(ti.actor);
            add(ti.amount);
            add(ti.token);
        }
    }
    return out;
}

} // namespace txmev
