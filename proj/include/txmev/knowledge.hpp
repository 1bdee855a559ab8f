#pragma once

#include "txmev/ast.hpp"
#include "txmev/state.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace txmev {

/// A finite or cofinite set of actors.
class ActorSet {
public:
    static ActorSet finite(std::set<Actor> members);
    static ActorSet cofinite(std::set<Actor> excluded);
    static ActorSet empty() { return finite({}); }
    static ActorSet universe() { return cofinite({}); }

    bool is_finite() const { return !cofinite_; }
    /// Members of a finite set, excluded actors of a cofinite one.
    const std::set<Actor>& listed() const { return listed_; }

    bool contains(const Actor& a) const;
    ActorSet complement() const;
    ActorSet intersect(const ActorSet& other) const;
    ActorSet unite(const ActorSet& other) const;
    ActorSet minus(const ActorSet& other) const;
    bool subset_of(const ActorSet& other) const;

    friend bool operator==(const ActorSet&, const ActorSet&) = default;

private:
    ActorSet(bool cofinite, std::set<Actor> listed) : cofinite_(cofinite), listed_(std::move(listed)) {}

    bool cofinite_ = false;
    std::set<Actor> listed_;
};

std::string to_string(const ActorSet& s);

/// Parse `A,B` (finite) or `~A,B` (everyone except A and B).
ActorSet parse_actor_set(const std::string& text);

/// Mempool index shared by deducibility queries.
struct KnowledgeBase {
    ActorSet actors;
    std::vector<Transaction> mempool;
    std::set<NonceId> rev_nonces;
    /// Mempool arguments other than token inputs.
    std::set<TxArg> reusable;

    KnowledgeBase(ActorSet actors, std::vector<Transaction> mempool);
};

bool can_deduce(const KnowledgeBase& kb, const Transaction& tx);
bool can_deduce(const ActorSet& actors, const std::vector<Transaction>& mempool, const Transaction& tx);

/// Owners of token inputs and of commit/reveal nonces.
std::set<Actor> authorisers(const Transaction& tx);
std::set<Actor> authorisers_set(const std::vector<Transaction>& txs);

/// Search window. Large enough to hold every worked example, small enough to
/// enumerate.
struct Bounds {
    unsigned max_depth = 2;
    Amount max_amount = 2;
    std::vector<Amount> secret_values{0, 1};
    unsigned nonces_per_actor = 1;
    std::vector<Actor> candidate_actors;
    /// Fresh identities used by the freedom check.
    unsigned representatives = 1;

    friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Finite argument universe for one deducibility window.
struct Domain {
    std::vector<Actor> actors;
    std::vector<Actor> signers;
    std::vector<TxArg> plain_args;
    std::vector<TxArg> token_inputs;
    /// First tx nonce not used by any executed or mempool transaction.
    std::uint64_t fresh_nonce = 0;
};

/// Actor constants: candidate actors, plus the actors appearing in `hint`
/// (typically the mempool), in the state and hard-coded in the contract.
Domain make_domain(const KnowledgeBase& kb, const ContractDef& c, const BlockchainState& s, const Bounds& bounds,
                   const std::vector<Transaction>& hint);

/// Mempool transactions first, verbatim; then every crafted transaction over
/// the domain, grouped by procedure signature in source order and sorted by
/// arguments. Crafted transactions carry `dom.fresh_nonce`.
std::vector<Transaction> enumerate_deducible(const KnowledgeBase& kb, const ContractDef& c, const Domain& dom);

/// Convenience overload building the domain from the state and knowledge.
std::vector<Transaction> enumerate_deducible(const ActorSet& actors, const std::vector<Transaction>& mempool,
                                             const ContractDef& c, const BlockchainState& s, const Bounds& bounds);

} // namespace txmev
