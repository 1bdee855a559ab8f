#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace txmev {

using Amount = std::uint64_t;

struct Actor {
    std::string name;

    friend auto operator<=>(const Actor&, const Actor&) = default;
    friend bool operator==(const Actor&, const Actor&) = default;
};

struct Token {
    std::string name;

    friend auto operator<=>(const Token&, const Token&) = default;
    friend bool operator==(const Token&, const Token&) = default;
};

/// A commitment nonce. The owner is part of the identity, so the nonce sets
/// of distinct actors are disjoint.
struct NonceId {
    Actor owner;
    std::uint64_t index = 0;

    friend auto operator<=>(const NonceId&, const NonceId&) = default;
    friend bool operator==(const NonceId&, const NonceId&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Actor& a) { return os << a.name; }
inline std::ostream& operator<<(std::ostream& os, const Token& t) { return os << t.name; }
inline std::ostream& operator<<(std::ostream& os, const NonceId& n) {
    return os << n.owner.name << '.' << n.index;
}

} // namespace txmev
