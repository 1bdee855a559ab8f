#include "txmev/lang.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace txmev {

namespace detail {
void compute_static_facts(ContractDef& def);
}

namespace {

void expr_vars(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, VarRef>)
                out.insert(n.name);
            else if constexpr (std::is_same_v<T, MapLookup>) {
                expr_vars(*n.map, out);
                expr_vars(*n.key, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                expr_vars(*n.lhs, out);
                expr_vars(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, Not>)
                expr_vars(*n.operand, out);
            else if constexpr (std::is_same_v<T, Balance>)
                expr_vars(*n.token, out);
            else if constexpr (std::is_same_v<T, SecretOf>)
                expr_vars(*n.reveal, out);
            else if constexpr (std::is_same_v<T, Verify>) {
                expr_vars(*n.reveal, out);
                expr_vars(*n.commit, out);
            }
        },
        e.node);
}

void stmt_vars(const Stmt& s, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Assign>) {
                out.insert(n.var);
                expr_vars(n.value, out);
            } else if constexpr (std::is_same_v<T, MapAssign>) {
                out.insert(n.var);
                expr_vars(n.key, out);
                expr_vars(n.value, out);
            } else if constexpr (std::is_same_v<T, TokenOutput>) {
                expr_vars(n.recipient, out);
                expr_vars(n.amount, out);
                expr_vars(n.token, out);
            } else if constexpr (std::is_same_v<T, Seq>) {
                stmt_vars(*n.first, out);
                stmt_vars(*n.second, out);
            } else if constexpr (std::is_same_v<T, If>) {
                expr_vars(n.cond, out);
                stmt_vars(*n.then_branch, out);
                stmt_vars(*n.else_branch, out);
            }
        },
        s.node);
}

Expr const_expr(const ParamConst& k) {
    return std::visit([](const auto& lit) { return Expr{lit}; }, k);
}

/// Assignment targets, split by kind.
void targets(const Stmt& s, std::set<std::string>& base, std::set<std::string>& maps) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Assign>)
                base.insert(n.var);
            else if constexpr (std::is_same_v<T, MapAssign>)
                maps.insert(n.var);
            else if constexpr (std::is_same_v<T, Seq>) {
                targets(*n.first, base, maps);
                targets(*n.second, base, maps);
            } else if constexpr (std::is_same_v<T, If>) {
                targets(*n.then_branch, base, maps);
                targets(*n.else_branch, base, maps);
            }
        },
        s.node);
}

// Variables read in base position (not as the map of a lookup).
void base_reads(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, VarRef>)
                out.insert(n.name);
            else if constexpr (std::is_same_v<T, MapLookup>) {
                if (!std::holds_alternative<VarRef>(n.map->node))
                    base_reads(*n.map, out);
                base_reads(*n.key, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                base_reads(*n.lhs, out);
                base_reads(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, Not>)
                base_reads(*n.operand, out);
            else if constexpr (std::is_same_v<T, Balance>)
                base_reads(*n.token, out);
            else if constexpr (std::is_same_v<T, SecretOf>)
                base_reads(*n.reveal, out);
            else if constexpr (std::is_same_v<T, Verify>) {
                base_reads(*n.reveal, out);
                base_reads(*n.commit, out);
            }
        },
        e.node);
}

void stmt_base_reads(const Stmt& s, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Assign>)
                base_reads(n.value, out);
            else if constexpr (std::is_same_v<T, MapAssign>) {
                base_reads(n.key, out);
                base_reads(n.value, out);
            } else if constexpr (std::is_same_v<T, TokenOutput>) {
                base_reads(n.recipient, out);
                base_reads(n.amount, out);
                base_reads(n.token, out);
            } else if constexpr (std::is_same_v<T, Seq>) {
                stmt_base_reads(*n.first, out);
                stmt_base_reads(*n.second, out);
            } else if constexpr (std::is_same_v<T, If>) {
                base_reads(n.cond, out);
                stmt_base_reads(*n.then_branch, out);
                stmt_base_reads(*n.else_branch, out);
            }
        },
        s.node);
}

void map_reads(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, MapLookup>) {
                if (auto* v = std::get_if<VarRef>(&n.map->node))
                    out.insert(v->name);
                else
                    map_reads(*n.map, out);
                map_reads(*n.key, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                map_reads(*n.lhs, out);
                map_reads(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, Not>)
                map_reads(*n.operand, out);
            else if constexpr (std::is_same_v<T, Balance>)
                map_reads(*n.token, out);
            else if constexpr (std::is_same_v<T, SecretOf>)
                map_reads(*n.reveal, out);
            else if constexpr (std::is_same_v<T, Verify>) {
                map_reads(*n.reveal, out);
                map_reads(*n.commit, out);
            }
        },
        e.node);
}

void stmt_map_reads(const Stmt& s, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Assign>)
                map_reads(n.value, out);
            else if constexpr (std::is_same_v<T, MapAssign>) {
                map_reads(n.key, out);
                map_reads(n.value, out);
            } else if constexpr (std::is_same_v<T, TokenOutput>) {
                map_reads(n.recipient, out);
                map_reads(n.amount, out);
                map_reads(n.token, out);
            } else if constexpr (std::is_same_v<T, Seq>) {
                stmt_map_reads(*n.first, out);
                stmt_map_reads(*n.second, out);
            } else if constexpr (std::is_same_v<T, If>) {
                map_reads(n.cond, out);
                stmt_map_reads(*n.then_branch, out);
                stmt_map_reads(*n.else_branch, out);
            }
        },
        s.node);
}

// -- overlap lint -----------------------------------------------------------

void conjuncts(const Expr& e, std::vector<Expr>& out) {
    if (auto* b = std::get_if<Binary>(&e.node); b && b->op == BinaryOp::And) {
        conjuncts(*b->lhs, out);
        conjuncts(*b->rhs, out);
        return;
    }
    if (e == Expr{BoolLit{true}})
        return;
    out.push_back(e);
}

bool is_literal(const Expr& e) {
    return std::holds_alternative<NullLit>(e.node) || std::holds_alternative<BoolLit>(e.node) ||
           std::holds_alternative<NatLit>(e.node) || std::holds_alternative<ActorLit>(e.node) ||
           std::holds_alternative<TokenLit>(e.node);
}

Expr rename_vars(const Expr& e, const std::map<std::string, std::string>& ren) {
    return std::visit(
        [&](const auto& n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, VarRef>) {
                auto it = ren.find(n.name);
                return it == ren.end() ? Expr{n} : make_var(it->second);
            } else if constexpr (std::is_same_v<T, MapLookup>)
                return Expr{MapLookup{rename_vars(*n.map, ren), rename_vars(*n.key, ren)}};
            else if constexpr (std::is_same_v<T, Binary>)
                return make_binary(n.op, rename_vars(*n.lhs, ren), rename_vars(*n.rhs, ren));
            else if constexpr (std::is_same_v<T, Not>)
                return Expr{Not{rename_vars(*n.operand, ren)}};
            else if constexpr (std::is_same_v<T, Balance>)
                return Expr{Balance{rename_vars(*n.token, ren)}};
            else if constexpr (std::is_same_v<T, SecretOf>)
                return Expr{SecretOf{rename_vars(*n.reveal, ren)}};
            else if constexpr (std::is_same_v<T, Verify>)
                return Expr{Verify{rename_vars(*n.reveal, ren), rename_vars(*n.commit, ren)}};
            else
                return Expr{n};
        },
        e.node);
}

struct Equation {
    BinaryOp op;
    Expr subject;
    Expr constant;
};

std::optional<Equation> as_equation(const Expr& e) {
    auto* b = std::get_if<Binary>(&e.node);
    if (!b || (b->op != BinaryOp::Eq && b->op != BinaryOp::Neq))
        return std::nullopt;
    if (is_literal(*b->rhs) && !is_literal(*b->lhs))
        return Equation{b->op, *b->lhs, *b->rhs};
    if (is_literal(*b->lhs) && !is_literal(*b->rhs))
        return Equation{b->op, *b->rhs, *b->lhs};
    return std::nullopt;
}

bool contradicts(const Expr& p, const Expr& q) {
    if (auto* n = std::get_if<Not>(&p.node); n && *n->operand == q)
        return true;
    if (auto* n = std::get_if<Not>(&q.node); n && *n->operand == p)
        return true;
    auto ep = as_equation(p), eq = as_equation(q);
    if (!ep || !eq || !(ep->subject == eq->subject))
        return false;
    if (ep->op == BinaryOp::Eq && eq->op == BinaryOp::Eq)
        return !(ep->constant == eq->constant);
    if (ep->op != eq->op)
        return ep->constant == eq->constant;
    return false;
}

bool same_shape(const Clause& a, const Clause& b) {
    if (a.proc_name != b.proc_name || a.params.size() != b.params.size())
        return false;
    for (std::size_t i = 0; i < a.params.size(); ++i)
        if (a.params[i].index() != b.params[i].index())
            return false;
    return true;
}

bool syntactically_disjoint(const Clause& a, const Clause& b) {
    std::vector<Expr> ca, cb;
    conjuncts(a.precondition, ca);
    conjuncts(b.precondition, cb);
    // Align the second clause's formals with the first, slot by slot. Two
    // different constants in one slot already separate the clauses.
    std::map<std::string, std::string> ren;
    bool distinct_constants = false;
    auto align = [&](const ParamSlot& x, const ParamSlot& y) {
        if (x.is_var() && y.is_var())
            ren[y.var()] = x.var();
        else if (!x.is_var() && !y.is_var() && !(x == y))
            distinct_constants = true;
    };
    for (std::size_t i = 0; i < a.params.size(); ++i) {
        if (auto* pa = std::get_if<PlainParam>(&a.params[i])) {
            align(pa->slot, std::get<PlainParam>(b.params[i]).slot);
        } else {
            const auto& ta = std::get<TokenInputParam>(a.params[i]);
            const auto& tb = std::get<TokenInputParam>(b.params[i]);
            align(ta.actor, tb.actor);
            align(ta.amount, tb.amount);
            align(ta.token, tb.token);
        }
    }
    if (distinct_constants)
        return true;
    for (auto& e : cb)
        e = rename_vars(e, ren);
    for (const auto& p : ca)
        for (const auto& q : cb)
            if (contradicts(p, q))
                return true;
    return false;
}

} // namespace

ContractDef desugar_constants(const ContractDef& contract) {
    ContractDef out = contract;
    for (auto& c : out.clauses) {
        std::set<std::string> used;
        expr_vars(c.precondition, used);
        stmt_vars(c.body, used);
        for (const auto& v : param_vars(c))
            used.insert(v);

        std::vector<Expr> eqs;
        auto fresh = [&](const std::string& stem) {
            std::string name = stem;
            for (int k = 1; used.count(name); ++k)
                name = stem + std::to_string(k);
            used.insert(name);
            return name;
        };
        auto lift = [&](ParamSlot& slot, const char* stem) {
            if (slot.is_var())
                return;
            Expr k = const_expr(std::get<ParamConst>(slot.value));
            std::string v = fresh(stem);
            eqs.push_back(make_binary(BinaryOp::Eq, make_var(v), std::move(k)));
            slot.value = v;
        };
        for (auto& p : c.params) {
            if (auto* pp = std::get_if<PlainParam>(&p)) {
                lift(pp->slot, "p");
            } else {
                auto& ti = std::get<TokenInputParam>(p);
                lift(ti.actor, "a");
                lift(ti.amount, "x");
                lift(ti.token, "t");
            }
        }
        if (eqs.empty())
            continue;
        Expr pre = eqs.front();
        for (std::size_t i = 1; i < eqs.size(); ++i)
            pre = make_binary(BinaryOp::And, std::move(pre), eqs[i]);
        if (!(c.precondition == Expr{BoolLit{true}}))
            pre = make_binary(BinaryOp::And, std::move(pre), c.precondition);
        c.precondition = std::move(pre);
    }
    detail::compute_static_facts(out);
    return out;
}

std::vector<Diagnostic> check_wellformed(const ContractDef& contract) {
    std::vector<Diagnostic> out;
    std::set<std::string> base_vars, map_vars;

    for (std::size_t i = 0; i < contract.clauses.size(); ++i) {
        const Clause& c = contract.clauses[i];
        std::vector<std::string> formals = param_vars(c);
        std::set<std::string> seen;
        for (const auto& f : formals) {
            if (!seen.insert(f).second)
                out.push_back({Diagnostic::Severity::Error,
                               "parameter '" + f + "' repeated in " + c.proc_name, {i}});
        }

        std::set<std::string> assigned, map_assigned;
        targets(c.body, assigned, map_assigned);
        for (const auto& t : assigned)
            if (seen.count(t))
                out.push_back({Diagnostic::Severity::Error,
                               "assignment to parameter '" + t + "' in " + c.proc_name, {i}});
        for (const auto& t : map_assigned)
            if (seen.count(t))
                out.push_back({Diagnostic::Severity::Error,
                               "map update of parameter '" + t + "' in " + c.proc_name, {i}});

        std::set<std::string> reads, maps;
        base_reads(c.precondition, reads);
        stmt_base_reads(c.body, reads);
        map_reads(c.precondition, maps);
        stmt_map_reads(c.body, maps);
        for (const auto& r : reads)
            if (!seen.count(r))
                base_vars.insert(r);
        for (const auto& t : assigned)
            if (!seen.count(t))
                base_vars.insert(t);
        for (const auto& m : maps)
            if (!seen.count(m))
                map_vars.insert(m);
        for (const auto& t : map_assigned)
            if (!seen.count(t))
                map_vars.insert(t);
    }

    for (const auto& v : base_vars) {
        if (!map_vars.count(v))
            continue;
        std::vector<std::size_t> where;
        for (std::size_t i = 0; i < contract.clauses.size(); ++i) {
            std::set<std::string> all;
            expr_vars(contract.clauses[i].precondition, all);
            stmt_vars(contract.clauses[i].body, all);
            if (all.count(v))
                where.push_back(i);
        }
        out.push_back({Diagnostic::Severity::Error, "state variable '" + v + "' used both as a value and as a map",
                       where});
    }

    for (std::size_t i = 0; i < contract.clauses.size(); ++i) {
        for (std::size_t j = i + 1; j < contract.clauses.size(); ++j) {
            const Clause& a = contract.clauses[i];
            const Clause& b = contract.clauses[j];
            if (!same_shape(a, b) || syntactically_disjoint(a, b))
                continue;
            out.push_back({Diagnostic::Severity::Warning,
                           "preconditions of " + a.proc_name + " clauses " + std::to_string(i + 1) + " and " +
                               std::to_string(j + 1) + " may overlap",
                           {i, j}});
        }
    }
    return out;
}

} // namespace txmev
