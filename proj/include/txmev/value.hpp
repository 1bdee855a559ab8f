#pragma once

#include "txmev/names.hpp"

#include <compare>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace txmev {

struct Value;
struct MapEntry;

/// Finite map from base values to values, default null. Entries are kept
/// sorted by key and never hold a null value, so equal maps compare equal.
class MapValue {
public:
    MapValue();

    const std::vector<MapEntry>& entries() const { return *data_; }
    bool empty() const;
    std::size_t size() const;

    Value get(const Value& key) const;
    /// Copy with `key` bound to `value`; binding null removes the entry.
    MapValue set(const Value& key, const Value& value) const;

    friend bool operator==(const MapValue& a, const MapValue& b);
    friend std::strong_ordering operator<=>(const MapValue& a, const MapValue& b);

private:
    std::shared_ptr<const std::vector<MapEntry>> data_;
};

struct NullValue {
    friend auto operator<=>(const NullValue&, const NullValue&) = default;
};
struct CommitValue {
    NonceId nonce;
    Amount secret = 0;
    friend auto operator<=>(const CommitValue&, const CommitValue&) = default;
};
struct RevealValue {
    NonceId nonce;
    Amount secret = 0;
    friend auto operator<=>(const RevealValue&, const RevealValue&) = default;
};

struct Value {
    using Node = std::variant<NullValue, Amount, Actor, Token, CommitValue, RevealValue, MapValue>;
    Node node;

    Value() = default;
    Value(NullValue v) : node(v) {}
    Value(Amount n) : node(n) {}
    Value(Actor a) : node(std::move(a)) {}
    Value(Token t) : node(std::move(t)) {}
    Value(CommitValue c) : node(std::move(c)) {}
    Value(RevealValue r) : node(std::move(r)) {}
    Value(MapValue m) : node(std::move(m)) {}

    static Value boolean(bool b) { return Value(Amount{b ? 1u : 0u}); }

    bool is_null() const { return std::holds_alternative<NullValue>(node); }
    bool is_nat() const { return std::holds_alternative<Amount>(node); }
    bool is_map() const { return std::holds_alternative<MapValue>(node); }
    /// True for 0 and 1, the two naturals that double as booleans.
    bool is_bool() const { return is_nat() && nat() <= 1; }

    Amount nat() const { return std::get<Amount>(node); }
    const MapValue& map() const { return std::get<MapValue>(node); }

    friend bool operator==(const Value& a, const Value& b) { return a.node == b.node; }
    friend std::strong_ordering operator<=>(const Value& a, const Value& b);
};

struct MapEntry {
    Value key;
    Value value;

    friend bool operator==(const MapEntry&, const MapEntry&) = default;
};

std::string to_string(const Value& v);

/// Every actor occurring in `v`, including inside maps and as nonce owners.
void collect_actors(const Value& v, std::vector<Actor>& out);

} // namespace txmev
