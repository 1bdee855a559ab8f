#include "txmev/mev.hpp"

#include <algorithm>

namespace txmev {

MevReport mev(const ActorSet& actors, const BlockchainState& s, const ContractDef& c,
              const std::vector<Transaction>& mempool, const Bounds& bounds, const PriceTable& prices,
              const SearchOptions& opts) {
    MevReport r;
    r.unrealized = unrealized_gain(actors, s, c, bounds, prices, opts, mempool);
    r.with_mempool = max_gain(s, c, KnowledgeBase(actors, mempool), bounds, prices, opts, mempool);
    r.states_explored = r.unrealized.states_explored + r.with_mempool.states_explored;
    // The private sequences are deducible with the mempool too, so the best
    // of the two searches is a lower bound for the mempool optimum.
    if (r.with_mempool.value >= r.unrealized.value) {
        r.value = r.with_mempool.value - r.unrealized.value;
        r.witness = r.with_mempool.witness;
    } else {
        r.value = 0;
        r.witness = r.unrealized.witness;
    }
    return r;
}

namespace {

void tx_actors(const Transaction& tx, std::set<Actor>& out) {
    for (const auto& a : tx.args) {
        if (auto* x = std::get_if<ActorArg>(&a))
            out.insert(x->actor);
        else if (auto* ti = std::get_if<TokenInputArg>(&a))
            out.insert(ti->actor);
        else if (auto* cm = std::get_if<CommitArg>(&a))
            out.insert(cm->nonce.owner);
        else if (auto* rv = std::get_if<RevealArg>(&a))
            out.insert(rv->nonce.owner);
    }
}

} // namespace

ActorSet cluster_of(const BlockchainState& s, const std::vector<Transaction>& mempool, const ContractDef& c) {
    std::set<Actor> excluded = c.hardcoded_actors;
    for (const auto& tx : mempool)
        tx_actors(tx, excluded);
    std::vector<Actor> in_state;
    for (const auto& [k, v] : s.contract.vars)
        collect_actors(v, in_state);
    excluded.insert(in_state.begin(), in_state.end());
    return ActorSet::cofinite(std::move(excluded));
}

Renaming::Renaming(std::map<Actor, Actor> mapping) : mapping_(std::move(mapping)) {
    std::set<Actor> image;
    for (const auto& [from, to] : mapping_) {
        if (!image.insert(to).second)
            throw std::invalid_argument("renaming is not injective: two actors map to " + to.name);
    }
    for (const auto& a : image)
        if (!mapping_.count(a))
            throw std::invalid_argument("renaming is not a permutation: " + a.name + " has no preimage");
}

Actor Renaming::apply(const Actor& a) const {
    auto it = mapping_.find(a);
    return it == mapping_.end() ? a : it->second;
}

Renaming Renaming::inverse() const {
    std::map<Actor, Actor> inv;
    for (const auto& [from, to] : mapping_)
        inv[to] = from;
    return Renaming(std::move(inv));
}

BlockchainState rename_state(const BlockchainState& s, const Renaming& rho) {
    BlockchainState out;
    out.contract = s.contract;
    for (const auto& [a, w] : s.wallets.by_actor)
        out.wallets.set_wallet(rho.apply(a), w);
    return out;
}

BlockchainState redistribute(const BlockchainState& s, const ActorSet& from, const ActorSet& to,
                             const Actor& representative) {
    if (!to.contains(representative))
        throw RedistributionError("representative " + representative.name + " is not in the target set");
    for (const auto& [a, w] : s.wallets.by_actor)
        if (to.contains(a) && !from.contains(a) && !w.empty())
            throw RedistributionError(a.name + " is a target outside the source set but already owns tokens");

    BlockchainState out;
    out.contract = s.contract;
    Wallet pooled;
    for (const auto& [a, w] : s.wallets.by_actor) {
        if (from.contains(a)) {
            for (const auto& [t, n] : w)
                pooled[t] += n;
        } else {
            out.wallets.by_actor[a] = w;
        }
    }
    if (!pooled.empty()) {
        Wallet& dst = out.wallets.by_actor[representative];
        for (const auto& [t, n] : pooled)
            dst[t] += n;
    }
    return out;
}

bool check_redistribution(const BlockchainState& s, const BlockchainState& s2, const ActorSet& from,
                          const ActorSet& to) {
    if (!(s.contract == s2.contract))
        return false;
    std::set<Actor> everyone;
    for (const auto& [a, w] : s.wallets.by_actor)
        everyone.insert(a);
    for (const auto& [a, w] : s2.wallets.by_actor)
        everyone.insert(a);
    std::map<Token, Amount> before, after;
    for (const auto& a : everyone) {
        bool in_from = from.contains(a), in_to = to.contains(a);
        const Wallet& w = s.wallets.wallet(a);
        const Wallet& w2 = s2.wallets.wallet(a);
        if (!in_from && !in_to && w != w2)
            return false;
        if (in_to && !in_from && !w.empty())
            return false;
        if (in_from && !in_to && !w2.empty())
            return false;
        if (in_from)
            for (const auto& [t, n] : w)
                before[t] += n;
        if (in_to)
            for (const auto& [t, n] : w2)
                after[t] += n;
    }
    return before == after;
}

namespace {

std::vector<Actor> pick_representatives(const ActorSet& cluster, const BlockchainState& s, const Bounds& bounds) {
    std::vector<Actor> reps;
    unsigned k = std::max(1u, bounds.representatives);
    for (const auto& a : bounds.candidate_actors) {
        if (reps.size() == k)
            break;
        if (cluster.contains(a) && std::find(reps.begin(), reps.end(), a) == reps.end())
            reps.push_back(a);
    }
    for (unsigned i = 0; reps.size() < k; ++i) {
        Actor a{"R" + std::to_string(i)};
        bool taken = !cluster.contains(a) || s.wallets.by_actor.count(a) ||
                     std::find(reps.begin(), reps.end(), a) != reps.end() ||
                     std::find(bounds.candidate_actors.begin(), bounds.candidate_actors.end(), a) !=
                         bounds.candidate_actors.end();
        if (!taken)
            reps.push_back(a);
    }
    return reps;
}

} // namespace

Verdict mev_freedom_check(const BlockchainState& s, const ContractDef& c, const std::vector<Transaction>& mempool,
                          const Bounds& bounds, const PriceTable& prices, const SearchOptions& opts,
                          const Utility& utility) {
    Verdict v;
    v.bounds = bounds;
    v.cluster = cluster_of(s, mempool, c);
    v.representatives = pick_representatives(v.cluster, s, bounds);
    ActorSet attackers = ActorSet::finite({v.representatives.begin(), v.representatives.end()});
    v.redistributed = redistribute(s, v.cluster, attackers, v.representatives.front());

    Bounds search = bounds;
    search.candidate_actors = v.representatives;
    MevReport r = utility ? utility(attackers, v.redistributed, c, mempool, search, prices, opts)
                          : mev(attackers, v.redistributed, c, mempool, search, prices, opts);
    v.value = r.value;
    v.witness = r.witness;
    v.states_explored = r.states_explored;
    v.kind = r.value > 0 ? Verdict::Kind::AttackFound : Verdict::Kind::NoAttackWithinBounds;
    return v;
}

} // namespace txmev
