#pragma once

#include "txmev/names.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace txmev {

/// Immutable shared node with value equality. Copies are cheap.
template <class T>
class Box {
public:
    Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}

    const T& operator*() const { return *ptr_; }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_; }

private:
    std::shared_ptr<const T> ptr_;
};

// ---------------------------------------------------------------------------
// Expressions

enum class BinaryOp { Add, Sub, Mul, Div, Eq, Neq, Lt, Le, Gt, Ge, And, Or };

const char* to_string(BinaryOp op);

struct Expr;

struct NullLit {
    bool operator==(const NullLit&) const = default;
};
struct BoolLit {
    bool value = false;
    bool operator==(const BoolLit&) const = default;
};
struct NatLit {
    Amount value = 0;
    bool operator==(const NatLit&) const = default;
};
struct ActorLit {
    Actor actor;
    bool operator==(const ActorLit&) const = default;
};
struct TokenLit {
    Token token;
    bool operator==(const TokenLit&) const = default;
};
struct VarRef {
    std::string name;
    bool operator==(const VarRef&) const = default;
};
struct MapLookup {
    Box<Expr> map;
    Box<Expr> key;
    bool operator==(const MapLookup&) const = default;
};
struct Binary {
    BinaryOp op;
    Box<Expr> lhs;
    Box<Expr> rhs;
    bool operator==(const Binary&) const = default;
};
struct Not {
    Box<Expr> operand;
    bool operator==(const Not&) const = default;
};
/// `#e`: the contract's balance of the token `e` evaluates to.
struct Balance {
    Box<Expr> token;
    bool operator==(const Balance&) const = default;
};
struct SecretOf {
    Box<Expr> reveal;
    bool operator==(const SecretOf&) const = default;
};
struct Verify {
    Box<Expr> reveal;
    Box<Expr> commit;
    bool operator==(const Verify&) const = default;
};

struct Expr {
    using Node = std::variant<NullLit, BoolLit, NatLit, ActorLit, TokenLit, VarRef, MapLookup, Binary, Not,
                              Balance, SecretOf, Verify>;
    Node node;

    bool operator==(const Expr&) const = default;
};

Expr make_binary(BinaryOp op, Expr lhs, Expr rhs);
Expr make_var(std::string name);

// ---------------------------------------------------------------------------
// Statements

struct Stmt;

struct Skip {
    bool operator==(const Skip&) const = default;
};
struct Assign {
    std::string var;
    Expr value;
    bool operator==(const Assign&) const = default;
};
struct MapAssign {
    std::string var;
    Expr key;
    Expr value;
    bool operator==(const MapAssign&) const = default;
};
/// `e1!e2:e3`: pay `e2` units of token `e3` from the contract to actor `e1`.
struct TokenOutput {
    Expr recipient;
    Expr amount;
    Expr token;
    bool operator==(const TokenOutput&) const = default;
};
struct Seq {
    Box<Stmt> first;
    Box<Stmt> second;
    bool operator==(const Seq&) const = default;
};
struct If {
    Expr cond;
    Box<Stmt> then_branch;
    Box<Stmt> else_branch;
    bool operator==(const If&) const = default;
};

struct Stmt {
    using Node = std::variant<Skip, Assign, MapAssign, TokenOutput, Seq, If>;
    Node node;

    bool operator==(const Stmt&) const = default;
};

// ---------------------------------------------------------------------------
// Procedure parameters

/// A constant written in a formal-parameter position (removed by desugaring).
using ParamConst = std::variant<NatLit, ActorLit, TokenLit>;

/// One component of a formal parameter: a variable name or a hard-coded constant.
struct ParamSlot {
    std::variant<std::string, ParamConst> value;

    bool is_var() const { return std::holds_alternative<std::string>(value); }
    const std::string& var() const { return std::get<std::string>(value); }
    bool operator==(const ParamSlot&) const = default;
};

struct PlainParam {
    ParamSlot slot;
    bool operator==(const PlainParam&) const = default;
};

/// Formal token input `a?x:t`.
struct TokenInputParam {
    ParamSlot actor;
    ParamSlot amount;
    ParamSlot token;
    bool operator==(const TokenInputParam&) const = default;
};

using Param = std::variant<PlainParam, TokenInputParam>;

struct Clause {
    Expr precondition{BoolLit{true}};
    std::string proc_name;
    std::vector<Param> params;
    Stmt body{Skip{}};

    bool operator==(const Clause&) const = default;
};

struct ContractDef {
    std::string name;
    std::vector<Clause> clauses;
    std::set<Token> declared_tokens;
    std::set<Actor> hardcoded_actors;
    /// State variables used as maps (`x[e]`); they read as the empty map when unset.
    std::set<std::string> map_vars;

    bool operator==(const ContractDef&) const = default;
};

// ---------------------------------------------------------------------------
// Transactions

struct NatArg {
    Amount value = 0;
    friend auto operator<=>(const NatArg&, const NatArg&) = default;
};
struct ActorArg {
    Actor actor;
    friend auto operator<=>(const ActorArg&, const ActorArg&) = default;
};
struct TokenArg {
    Token token;
    friend auto operator<=>(const TokenArg&, const TokenArg&) = default;
};
/// Actual token input `A?n:T`.
struct TokenInputArg {
    Actor actor;
    Amount amount = 0;
    Token token;
    friend auto operator<=>(const TokenInputArg&, const TokenInputArg&) = default;
};
struct CommitArg {
    NonceId nonce;
    Amount secret = 0;
    friend auto operator<=>(const CommitArg&, const CommitArg&) = default;
};
struct RevealArg {
    NonceId nonce;
    Amount secret = 0;
    friend auto operator<=>(const RevealArg&, const RevealArg&) = default;
};

using TxArg = std::variant<NatArg, ActorArg, TokenArg, TokenInputArg, CommitArg, RevealArg>;

struct Transaction {
    std::string proc_name;
    std::vector<TxArg> args;
    std::uint64_t nonce = 0;

    friend auto operator<=>(const Transaction&, const Transaction&) = default;
    friend bool operator==(const Transaction&, const Transaction&) = default;

    /// Equality that ignores the replay nonce.
    bool same_call(const Transaction& other) const {
        return proc_name == other.proc_name && args == other.args;
    }
};

} // namespace txmev
