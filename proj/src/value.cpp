#include "txmev/value.hpp"
#include "txmev/state.hpp"

#include <algorithm>
#include <sstream>

namespace txmev {

namespace {

const std::shared_ptr<const std::vector<MapEntry>>& empty_entries() {
    static const auto empty = std::make_shared<const std::vector<MapEntry>>();
    return empty;
}

} // namespace

MapValue::MapValue() : data_(empty_entries()) {}

bool MapValue::empty() const { return data_->empty(); }
std::size_t MapValue::size() const { return data_->size(); }

Value MapValue::get(const Value& key) const {
    auto it = std::lower_bound(data_->begin(), data_->end(), key,
                               [](const MapEntry& e, const Value& k) { return e.key < k; });
    if (it != data_->end() && it->key == key)
        return it->value;
    return Value{};
}

MapValue MapValue::set(const Value& key, const Value& value) const {
    auto next = std::make_shared<std::vector<MapEntry>>(*data_);
    auto it = std::lower_bound(next->begin(), next->end(), key,
                               [](const MapEntry& e, const Value& k) { return e.key < k; });
    bool present = it != next->end() && it->key == key;
    if (value.is_null()) {
        if (present)
            next->erase(it);
    } else if (present) {
        it->value = value;
    } else {
        next->insert(it, MapEntry{key, value});
    }
    MapValue out;
    out.data_ = std::move(next);
    return out;
}

bool operator==(const MapValue& a, const MapValue& b) { return a.data_ == b.data_ || *a.data_ == *b.data_; }

std::strong_ordering operator<=>(const MapValue& a, const MapValue& b) {
    const auto& x = *a.data_;
    const auto& y = *b.data_;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (auto c = x[i].key <=> y[i].key; c != 0)
            return c;
        if (auto c = x[i].value <=> y[i].value; c != 0)
            return c;
    }
    return x.size() <=> y.size();
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.node.index() != b.node.index())
        return a.node.index() <=> b.node.index();
    return std::visit(
        [&](const auto& x) -> std::strong_ordering {
            using T = std::decay_t<decltype(x)>;
            return x <=> std::get<T>(b.node);
        },
        a.node);
}

std::string to_string(const Value& v) {
    std::ostringstream os;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NullValue>)
                os << "null";
            else if constexpr (std::is_same_v<T, Amount>)
                os << x;
            else if constexpr (std::is_same_v<T, Actor> || std::is_same_v<T, Token>)
                os << x.name;
            else if constexpr (std::is_same_v<T, CommitValue>)
                os << "cmt(" << x.nonce << ", " << x.secret << ")";
            else if constexpr (std::is_same_v<T, RevealValue>)
                os << "rvl(" << x.nonce << ", " << x.secret << ")";
            else {
                os << '{';
                bool first = true;
                for (const auto& e : x.entries()) {
                    os << (first ? "" : ", ") << to_string(e.key) << " -> " << to_string(e.value);
                    first = false;
                }
                os << '}';
            }
        },
        v.node);
    return os.str();
}

void collect_actors(const Value& v, std::vector<Actor>& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Actor>)
                out.push_back(x);
            else if constexpr (std::is_same_v<T, CommitValue> || std::is_same_v<T, RevealValue>)
                out.push_back(x.nonce.owner);
            else if constexpr (std::is_same_v<T, MapValue>) {
                for (const auto& e : x.entries()) {
                    collect_actors(e.key, out);
                    collect_actors(e.value, out);
                }
            }
        },
        v.node);
}

// ---------------------------------------------------------------------------

Amount WalletState::balance(const Actor& a, const Token& t) const {
    auto it = by_actor.find(a);
    if (it == by_actor.end())
        return 0;
    auto jt = it->second.find(t);
    return jt == it->second.end() ? 0 : jt->second;
}

const Wallet& WalletState::wallet(const Actor& a) const {
    static const Wallet empty;
    auto it = by_actor.find(a);
    return it == by_actor.end() ? empty : it->second;
}

void WalletState::credit(const Actor& a, const Token& t, Amount n) {
    if (n == 0)
        return;
    by_actor[a][t] += n;
}

bool WalletState::debit(const Actor& a, const Token& t, Amount n) {
    if (n == 0)
        return true;
    auto it = by_actor.find(a);
    if (it == by_actor.end())
        return false;
    auto jt = it->second.find(t);
    if (jt == it->second.end() || jt->second < n)
        return false;
    jt->second -= n;
    if (jt->second == 0) {
        it->second.erase(jt);
        if (it->second.empty())
            by_actor.erase(it);
    }
    return true;
}

void WalletState::set_wallet(const Actor& a, Wallet w) {
    for (auto it = w.begin(); it != w.end();)
        it = it->second == 0 ? w.erase(it) : std::next(it);
    if (w.empty())
        by_actor.erase(a);
    else
        by_actor[a] = std::move(w);
}

Value ContractState::var(const std::string& name) const {
    auto it = vars.find(name);
    return it == vars.end() ? Value{} : it->second;
}

void ContractState::set_var(const std::string& name, Value v) {
    if (v.is_null() || (v.is_map() && v.map().empty()))
        vars.erase(name);
    else
        vars[name] = std::move(v);
}

Amount ContractState::balance(const Token& t) const {
    auto it = balances.find(t);
    return it == balances.end() ? 0 : it->second;
}

void ContractState::credit(const Token& t, Amount n) {
    if (n != 0)
        balances[t] += n;
}

bool ContractState::debit(const Token& t, Amount n) {
    if (n == 0)
        return true;
    auto it = balances.find(t);
    if (it == balances.end() || it->second < n)
        return false;
    it->second -= n;
    if (it->second == 0)
        balances.erase(it);
    return true;
}

Amount token_supply(const BlockchainState& s, const Token& t) {
    Amount total = s.contract.balance(t);
    for (const auto& [actor, w] : s.wallets.by_actor) {
        auto it = w.find(t);
        if (it != w.end())
            total += it->second;
    }
    return total;
}

std::set<Token> tokens_in(const BlockchainState& s) {
    std::set<Token> out;
    for (const auto& [t, n] : s.contract.balances)
        out.insert(t);
    for (const auto& [a, w] : s.wallets.by_actor)
        for (const auto& [t, n] : w)
            out.insert(t);
    return out;
}

} // namespace txmev
