#pragma once

#include "txmev/ast.hpp"
#include "txmev/value.hpp"

#include <map>
#include <set>
#include <string>

namespace txmev {

/// Token amounts of one actor. Zero balances are not stored.
using Wallet = std::map<Token, Amount>;

struct WalletState {
    std::map<Actor, Wallet> by_actor;

    Amount balance(const Actor& a, const Token& t) const;
    const Wallet& wallet(const Actor& a) const;
    void credit(const Actor& a, const Token& t, Amount n);
    /// Returns false (and changes nothing) when the balance is short.
    bool debit(const Actor& a, const Token& t, Amount n);
    void set_wallet(const Actor& a, Wallet w);

    friend bool operator==(const WalletState&, const WalletState&) = default;
};

struct ContractState {
    /// State variables. Null bindings and empty maps are not stored.
    std::map<std::string, Value> vars;
    /// Contract balances. Zero balances are not stored.
    std::map<Token, Amount> balances;
    std::set<Transaction> executed;

    Value var(const std::string& name) const;
    void set_var(const std::string& name, Value v);
    Amount balance(const Token& t) const;
    void credit(const Token& t, Amount n);
    bool debit(const Token& t, Amount n);

    friend bool operator==(const ContractState&, const ContractState&) = default;
};

struct BlockchainState {
    WalletState wallets;
    ContractState contract;

    friend bool operator==(const BlockchainState&, const BlockchainState&) = default;
};

/// Sum of a token over all wallets plus the contract balance.
Amount token_supply(const BlockchainState& s, const Token& t);

/// Every token present in a wallet or the contract.
std::set<Token> tokens_in(const BlockchainState& s);

} // namespace txmev
