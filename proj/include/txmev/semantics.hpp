#pragma once

#include "txmev/ast.hpp"
#include "txmev/state.hpp"
#include "txmev/value.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace txmev {

/// Dynamic failure while evaluating an expression, statement or argument list.
struct EvalError {
    std::string reason;
};

/// Value or EvalError.
template <class T>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(EvalError e) : v_(std::move(e)) {}

    bool ok() const { return v_.index() == 0; }
    explicit operator bool() const { return ok(); }
    const T& value() const& { return std::get<0>(v_); }
    T&& value() && { return std::get<0>(std::move(v_)); }
    const EvalError& error() const { return std::get<1>(v_); }

private:
    std::variant<T, EvalError> v_;
};

/// Bindings of formal parameters. Small, so a flat vector.
using Env = std::vector<std::pair<std::string, Value>>;

const Value* lookup(const Env& rho, const std::string& name);

Result<Value> eval_expr(const Expr& e, const Env& rho, const ContractState& sigma);
Result<BlockchainState> exec_stmt(const Stmt& s, const Env& rho, BlockchainState state);
/// Deposit every token input, left to right.
Result<BlockchainState> eval_txargs(const std::vector<TxArg>& args, BlockchainState state);

Value arg_value(const TxArg& a);

struct MatchResult {
    enum class Status { Matched, NoMatch, Ambiguous };

    Status status = Status::NoMatch;
    /// The clause that fires: the first applicable one.
    std::optional<std::size_t> clause;
    Env rho;
    /// All applicable clauses, in source order.
    std::vector<std::size_t> applicable;
    std::string reason;

    bool matched() const { return clause.has_value(); }
};

/// Select the clause a transaction fires, evaluating preconditions in `sigma`.
MatchResult match_clause(const ContractDef& c, const Transaction& tx, const ContractState& sigma);

enum class FireStage { None, Replay, NoMatch, Deposit, Body };

const char* to_string(FireStage stage);

struct FireResult {
    BlockchainState state;
    bool valid = false;
    FireStage stage = FireStage::None;
    std::string reason;
    std::optional<std::size_t> clause;
    /// Several clauses were applicable; the first one fired.
    bool ambiguous = false;
};

/// One transition. When the transaction is invalid the returned state equals
/// the input.
FireResult fire(const BlockchainState& state, const ContractDef& c, const Transaction& tx);

/// Like fire, but returns nothing on failure and skips the copy.
std::optional<BlockchainState> try_fire(const BlockchainState& state, const ContractDef& c, const Transaction& tx);

struct TraceStep {
    Transaction tx;
    bool applied = false;
    FireStage stage = FireStage::None;
    std::string reason;
    std::optional<std::size_t> clause;
    bool ambiguous = false;
    BlockchainState post;
};

struct ExecTrace {
    std::vector<TraceStep> steps;

    std::size_t applied_count() const;
    bool any_ambiguous() const;
};

/// Fold fire over `seq`; invalid transactions leave the state unchanged.
std::pair<BlockchainState, ExecTrace> exec_sequence(const BlockchainState& state, const ContractDef& c,
                                                    const std::vector<Transaction>& seq);

/// The final state only, without recording a trace.
BlockchainState run_sequence(const BlockchainState& state, const ContractDef& c,
                             const std::vector<Transaction>& seq);

std::string to_string(const BlockchainState& s);

} // namespace txmev
