#include "txmev/semantics.hpp"

#include "txmev/lang.hpp"

#include <limits>
#include <sstream>

namespace txmev {

namespace {

// Internal failure signal; converted to EvalError at the API boundary.
struct Failure {
    std::string reason;
};

[[noreturn]] void fail(std::string reason) { throw Failure{std::move(reason)}; }

Amount as_nat(const Value& v, const char* what) {
    if (!v.is_nat())
        fail(std::string(what) + " expects a natural, got " + to_string(v));
    return v.nat();
}

bool as_bool(const Value& v, const char* what) {
    if (!v.is_bool())
        fail(std::string(what) + " expects 0 or 1, got " + to_string(v));
    return v.nat() == 1;
}

Value eval(const Expr& e, const Env& rho, const ContractState& sigma);

Value eval_binary(const Binary& b, const Env& rho, const ContractState& sigma) {
    // Both operands are always evaluated; `and`/`or` do not short-circuit.
    Value l = eval(*b.lhs, rho, sigma);
    Value r = eval(*b.rhs, rho, sigma);
    const char* op = to_string(b.op);
    switch (b.op) {
    case BinaryOp::Add: {
        Amount x = as_nat(l, op), y = as_nat(r, op);
        if (x > std::numeric_limits<Amount>::max() - y)
            fail("overflow in +");
        return Value(x + y);
    }
    case BinaryOp::Sub: {
        Amount x = as_nat(l, op), y = as_nat(r, op);
        if (y > x)
            fail("subtraction below zero");
        return Value(x - y);
    }
    case BinaryOp::Mul: {
        Amount x = as_nat(l, op), y = as_nat(r, op);
        if (x != 0 && y > std::numeric_limits<Amount>::max() / x)
            fail("overflow in *");
        return Value(x * y);
    }
    case BinaryOp::Div: {
        Amount x = as_nat(l, op), y = as_nat(r, op);
        if (y == 0)
            fail("division by zero");
        if (x % y != 0)
            fail("inexact division");
        return Value(x / y);
    }
    case BinaryOp::Eq:
    case BinaryOp::Neq: {
        if (l.is_map() || r.is_map())
            fail(std::string(op) + " on a map");
        bool eq = l == r;
        return Value::boolean(b.op == BinaryOp::Eq ? eq : !eq);
    }
    case BinaryOp::Lt: return Value::boolean(as_nat(l, op) < as_nat(r, op));
    case BinaryOp::Le: return Value::boolean(as_nat(l, op) <= as_nat(r, op));
    case BinaryOp::Gt: return Value::boolean(as_nat(l, op) > as_nat(r, op));
    case BinaryOp::Ge: return Value::boolean(as_nat(l, op) >= as_nat(r, op));
    case BinaryOp::And: {
        bool x = as_bool(l, op), y = as_bool(r, op);
        return Value::boolean(x && y);
    }
    case BinaryOp::Or: {
        bool x = as_bool(l, op), y = as_bool(r, op);
        return Value::boolean(x || y);
    }
    }
    fail("unknown operator");
}

Value eval(const Expr& e, const Env& rho, const ContractState& sigma) {
    return std::visit(
        [&](const auto& n) -> Value {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, NullLit>)
                return Value{};
            else if constexpr (std::is_same_v<T, BoolLit>)
                return Value::boolean(n.value);
            else if constexpr (std::is_same_v<T, NatLit>)
                return Value(n.value);
            else if constexpr (std::is_same_v<T, ActorLit>)
                return Value(n.actor);
            else if constexpr (std::is_same_v<T, TokenLit>)
                return Value(n.token);
            else if constexpr (std::is_same_v<T, VarRef>) {
                if (const Value* v = lookup(rho, n.name))
                    return *v;
                return sigma.var(n.name);
            } else if constexpr (std::is_same_v<T, MapLookup>) {
                Value m = eval(*n.map, rho, sigma);
                Value k = eval(*n.key, rho, sigma);
                if (k.is_map())
                    fail("map key must be a base value");
                if (m.is_null()) // an unset map variable
                    return Value{};
                if (!m.is_map())
                    fail("lookup on " + to_string(m) + ", which is not a map");
                return m.map().get(k);
            } else if constexpr (std::is_same_v<T, Binary>)
                return eval_binary(n, rho, sigma);
            else if constexpr (std::is_same_v<T, Not>)
                return Value::boolean(!as_bool(eval(*n.operand, rho, sigma), "not"));
            else if constexpr (std::is_same_v<T, Balance>) {
                Value t = eval(*n.token, rho, sigma);
                auto* tok = std::get_if<Token>(&t.node);
                if (!tok)
                    fail("# expects a token, got " + to_string(t));
                return Value(sigma.balance(*tok));
            } else if constexpr (std::is_same_v<T, SecretOf>) {
                Value r = eval(*n.reveal, rho, sigma);
                auto* rv = std::get_if<RevealValue>(&r.node);
                if (!rv)
                    fail("sec expects a reveal, got " + to_string(r));
                return Value(rv->secret);
            } else {
                Value r = eval(*n.reveal, rho, sigma);
                Value k = eval(*n.commit, rho, sigma);
                auto* rv = std::get_if<RevealValue>(&r.node);
                auto* cv = std::get_if<CommitValue>(&k.node);
                if (!rv || !cv)
                    fail("ver expects a reveal and a commit, got " + to_string(r) + " and " + to_string(k));
                return Value::boolean(rv->nonce == cv->nonce && rv->secret == cv->secret);
            }
        },
        e.node);
}

void exec(const Stmt& s, const Env& rho, BlockchainState& st) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>) {
            } else if constexpr (std::is_same_v<T, Assign>) {
                st.contract.set_var(n.var, eval(n.value, rho, st.contract));
            } else if constexpr (std::is_same_v<T, MapAssign>) {
                Value k = eval(n.key, rho, st.contract);
                Value v = eval(n.value, rho, st.contract);
                if (k.is_map())
                    fail("map key must be a base value");
                Value cur = st.contract.var(n.var);
                if (!cur.is_null() && !cur.is_map())
                    fail("'" + n.var + "' is not a map");
                MapValue m = cur.is_map() ? cur.map() : MapValue{};
                st.contract.set_var(n.var, Value(m.set(k, v)));
            } else if constexpr (std::is_same_v<T, TokenOutput>) {
                Value who = eval(n.recipient, rho, st.contract);
                Value amt = eval(n.amount, rho, st.contract);
                Value tok = eval(n.token, rho, st.contract);
                auto* a = std::get_if<Actor>(&who.node);
                auto* t = std::get_if<Token>(&tok.node);
                if (!a)
                    fail("token output recipient is not an actor: " + to_string(who));
                if (!t)
                    fail("token output expects a token, got " + to_string(tok));
                Amount k = as_nat(amt, "token output");
                if (!st.contract.debit(*t, k))
                    fail("insufficient contract balance of " + t->name);
                st.wallets.credit(*a, *t, k);
            } else if constexpr (std::is_same_v<T, Seq>) {
                exec(*n.first, rho, st);
                exec(*n.second, rho, st);
            } else {
                bool c = as_bool(eval(n.cond, rho, st.contract), "if");
                exec(c ? *n.then_branch : *n.else_branch, rho, st);
            }
        },
        s.node);
}

void deposit(const std::vector<TxArg>& args, BlockchainState& st) {
    for (const auto& a : args) {
        auto* ti = std::get_if<TokenInputArg>(&a);
        if (!ti)
            continue;
        if (!st.wallets.debit(ti->actor, ti->token, ti->amount))
            fail(ti->actor.name + " cannot pay " + std::to_string(ti->amount) + ":" + ti->token.name);
        st.contract.credit(ti->token, ti->amount);
    }
}

bool bind_slot(const ParamSlot& slot, Value v, Env& rho) {
    if (slot.is_var()) {
        rho.emplace_back(slot.var(), std::move(v));
        return true;
    }
    // A constant left in place (contract not desugared) must match exactly.
    Value k = std::visit(
        [](const auto& lit) -> Value {
            using T = std::decay_t<decltype(lit)>;
            if constexpr (std::is_same_v<T, NatLit>)
                return Value(lit.value);
            else if constexpr (std::is_same_v<T, ActorLit>)
                return Value(lit.actor);
            else
                return Value(lit.token);
        },
        std::get<ParamConst>(slot.value));
    return k == v;
}

/// Structural match of formals against actuals.
bool bind(const Clause& c, const Transaction& tx, Env& rho) {
    if (c.proc_name != tx.proc_name || c.params.size() != tx.args.size())
        return false;
    rho.clear();
    for (std::size_t i = 0; i < c.params.size(); ++i) {
        const TxArg& a = tx.args[i];
        if (auto* tp = std::get_if<TokenInputParam>(&c.params[i])) {
            auto* ta = std::get_if<TokenInputArg>(&a);
            if (!ta || !bind_slot(tp->actor, Value(ta->actor), rho) || !bind_slot(tp->amount, Value(ta->amount), rho) ||
                !bind_slot(tp->token, Value(ta->token), rho))
                return false;
        } else {
            if (std::holds_alternative<TokenInputArg>(a))
                return false;
            if (!bind_slot(std::get<PlainParam>(c.params[i]).slot, arg_value(a), rho))
                return false;
        }
    }
    return true;
}

} // namespace

const Value* lookup(const Env& rho, const std::string& name) {
    for (const auto& [k, v] : rho)
        if (k == name)
            return &v;
    return nullptr;
}

Result<Value> eval_expr(const Expr& e, const Env& rho, const ContractState& sigma) {
    try {
        return eval(e, rho, sigma);
    } catch (const Failure& f) {
        return EvalError{f.reason};
    }
}

Result<BlockchainState> exec_stmt(const Stmt& s, const Env& rho, BlockchainState state) {
    try {
        exec(s, rho, state);
        return state;
    } catch (const Failure& f) {
        return EvalError{f.reason};
    }
}

Result<BlockchainState> eval_txargs(const std::vector<TxArg>& args, BlockchainState state) {
    try {
        deposit(args, state);
        return state;
    } catch (const Failure& f) {
        return EvalError{f.reason};
    }
}

Value arg_value(const TxArg& a) {
    return std::visit(
        [](const auto& x) -> Value {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NatArg>)
                return Value(x.value);
            else if constexpr (std::is_same_v<T, ActorArg>)
                return Value(x.actor);
            else if constexpr (std::is_same_v<T, TokenArg>)
                return Value(x.token);
            else if constexpr (std::is_same_v<T, CommitArg>)
                return Value(CommitValue{x.nonce, x.secret});
            else if constexpr (std::is_same_v<T, RevealArg>)
                return Value(RevealValue{x.nonce, x.secret});
            else
                return Value{}; // token inputs bind componentwise
        },
        a);
}

MatchResult match_clause(const ContractDef& c, const Transaction& tx, const ContractState& sigma) {
    MatchResult out;
    Env rho;
    bool shaped = false;
    for (std::size_t i = 0; i < c.clauses.size(); ++i) {
        const Clause& cl = c.clauses[i];
        if (!bind(cl, tx, rho))
            continue;
        shaped = true;
        bool applies = false;
        try {
            applies = as_bool(eval(cl.precondition, rho, sigma), "precondition");
        } catch (const Failure&) {
            applies = false; // an error in a precondition means "does not apply"
        }
        if (!applies)
            continue;
        out.applicable.push_back(i);
        if (!out.clause) {
            out.clause = i;
            out.rho = rho;
        }
    }
    if (!out.clause) {
        out.status = MatchResult::Status::NoMatch;
        out.reason = shaped ? "no precondition holds" : "no clause for " + tx.proc_name + "/" +
                                                            std::to_string(tx.args.size()) + " with these arguments";
    } else {
        out.status = out.applicable.size() > 1 ? MatchResult::Status::Ambiguous : MatchResult::Status::Matched;
    }
    return out;
}

const char* to_string(FireStage stage) {
    switch (stage) {
    case FireStage::None: return "none";
    case FireStage::Replay: return "replay";
    case FireStage::NoMatch: return "no-match";
    case FireStage::Deposit: return "deposit";
    case FireStage::Body: return "body";
    }
    return "?";
}

namespace {

// Shared by fire and try_fire. On success `next` holds the new state.
FireStage step(const BlockchainState& state, const ContractDef& c, const Transaction& tx, BlockchainState& next,
               std::string* reason, MatchResult* match) {
    if (state.contract.executed.count(tx)) {
        if (reason)
            *reason = "transaction already executed";
        return FireStage::Replay;
    }
    MatchResult m = match_clause(c, tx, state.contract);
    if (!m.clause) {
        if (reason)
            *reason = m.reason;
        if (match)
            *match = std::move(m);
        return FireStage::NoMatch;
    }
    if (match)
        *match = m;
    next = state;
    try {
        deposit(tx.args, next);
    } catch (const Failure& f) {
        if (reason)
            *reason = f.reason;
        return FireStage::Deposit;
    }
    try {
        exec(c.clauses[*m.clause].body, m.rho, next);
    } catch (const Failure& f) {
        if (reason)
            *reason = f.reason;
        return FireStage::Body;
    }
    next.contract.executed.insert(tx);
    return FireStage::None;
}

} // namespace

FireResult fire(const BlockchainState& state, const ContractDef& c, const Transaction& tx) {
    FireResult out;
    MatchResult m;
    BlockchainState next;
    out.stage = step(state, c, tx, next, &out.reason, &m);
    out.valid = out.stage == FireStage::None;
    out.state = out.valid ? std::move(next) : state;
    out.clause = m.clause;
    out.ambiguous = m.applicable.size() > 1;
    return out;
}

std::optional<BlockchainState> try_fire(const BlockchainState& state, const ContractDef& c, const Transaction& tx) {
    BlockchainState next;
    if (step(state, c, tx, next, nullptr, nullptr) != FireStage::None)
        return std::nullopt;
    return next;
}

std::size_t ExecTrace::applied_count() const {
    std::size_t n = 0;
    for (const auto& s : steps)
        n += s.applied;
    return n;
}

bool ExecTrace::any_ambiguous() const {
    for (const auto& s : steps)
        if (s.ambiguous)
            return true;
    return false;
}

std::pair<BlockchainState, ExecTrace> exec_sequence(const BlockchainState& state, const ContractDef& c,
                                                    const std::vector<Transaction>& seq) {
    BlockchainState cur = state;
    ExecTrace trace;
    for (const auto& tx : seq) {
        FireResult r = fire(cur, c, tx);
        TraceStep st;
        st.tx = tx;
        st.applied = r.valid;
        st.stage = r.stage;
        st.reason = r.reason;
        st.clause = r.clause;
        st.ambiguous = r.ambiguous;
        if (r.valid)
            cur = std::move(r.state);
        st.post = cur;
        trace.steps.push_back(std::move(st));
    }
    return {std::move(cur), std::move(trace)};
}

BlockchainState run_sequence(const BlockchainState& state, const ContractDef& c, const std::vector<Transaction>& seq) {
    BlockchainState cur = state;
    for (const auto& tx : seq)
        if (auto next = try_fire(cur, c, tx))
            cur = std::move(*next);
    return cur;
}

std::string to_string(const BlockchainState& s) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [actor, w] : s.wallets.by_actor) {
        os << (first ? "" : " | ") << actor.name << "[";
        bool f2 = true;
        for (const auto& [t, n] : w) {
            os << (f2 ? "" : ", ") << n << ':' << t.name;
            f2 = false;
        }
        os << "]";
        first = false;
    }
    os << (first ? "" : " | ") << "contract[";
    bool f3 = true;
    for (const auto& [t, n] : s.contract.balances) {
        os << (f3 ? "" : ", ") << n << ':' << t.name;
        f3 = false;
    }
    for (const auto& [k, v] : s.contract.vars) {
        os << (f3 ? "" : ", ") << k << '=' << to_string(v);
        f3 = false;
    }
    os << "]";
    return os.str();
}

} // namespace txmev
