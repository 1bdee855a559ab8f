#pragma once

#include "txmev/economics.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace txmev {

struct MevReport {
    /// Extracted value: best gain with the mempool minus unrealized gain.
    Gain value = 0;
    std::vector<Transaction> witness;
    std::uint64_t states_explored = 0;
    GainReport with_mempool;
    GainReport unrealized;
};

MevReport mev(const ActorSet& actors, const BlockchainState& s, const ContractDef& c,
              const std::vector<Transaction>& mempool, const Bounds& bounds, const PriceTable& prices,
              const SearchOptions& opts = {});

/// Actors that can be swapped for one another without the contract noticing:
/// everyone except those in the mempool, the contract state, or the code.
ActorSet cluster_of(const BlockchainState& s, const std::vector<Transaction>& mempool, const ContractDef& c);

/// A finite permutation of actors.
class Renaming {
public:
    Renaming() = default;
    /// Throws std::invalid_argument unless the map is a bijection on its domain.
    explicit Renaming(std::map<Actor, Actor> mapping);

    Actor apply(const Actor& a) const;
    Renaming inverse() const;
    const std::map<Actor, Actor>& mapping() const { return mapping_; }

private:
    std::map<Actor, Actor> mapping_;
};

BlockchainState rename_state(const BlockchainState& s, const Renaming& rho);

class RedistributionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Move every token owned by members of `from` onto `representative`.
BlockchainState redistribute(const BlockchainState& s, const ActorSet& from, const ActorSet& to,
                             const Actor& representative);

bool check_redistribution(const BlockchainState& s, const BlockchainState& s2, const ActorSet& from,
                          const ActorSet& to);

struct Verdict {
    enum class Kind { AttackFound, NoAttackWithinBounds };

    Kind kind = Kind::NoAttackWithinBounds;
    ActorSet cluster = ActorSet::universe();
    std::vector<Actor> representatives;
    BlockchainState redistributed;
    Gain value = 0;
    std::vector<Transaction> witness;
    std::uint64_t states_explored = 0;
    Bounds bounds;

    bool attack() const { return kind == Kind::AttackFound; }
};

/// Utility whose positive value makes an attacker, by default mev.
using Utility = std::function<MevReport(const ActorSet&, const BlockchainState&, const ContractDef&,
                                        const std::vector<Transaction>&, const Bounds&, const PriceTable&,
                                        const SearchOptions&)>;

Verdict mev_freedom_check(const BlockchainState& s, const ContractDef& c, const std::vector<Transaction>& mempool,
                          const Bounds& bounds, const PriceTable& prices, const SearchOptions& opts = {},
                          const Utility& utility = {});

} // namespace txmev
