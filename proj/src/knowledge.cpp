#include "txmev/knowledge.hpp"

#include "txmev/lang.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace txmev {

// -- ActorSet ---------------------------------------------------------------

ActorSet ActorSet::finite(std::set<Actor> members) { return ActorSet(false, std::move(members)); }
ActorSet ActorSet::cofinite(std::set<Actor> excluded) { return ActorSet(true, std::move(excluded)); }

bool ActorSet::contains(const Actor& a) const { return cofinite_ != (listed_.count(a) > 0); }

ActorSet ActorSet::complement() const { return ActorSet(!cofinite_, listed_); }

namespace {

std::set<Actor> set_union(const std::set<Actor>& a, const std::set<Actor>& b) {
    std::set<Actor> out = a;
    out.insert(b.begin(), b.end());
    return out;
}

std::set<Actor> set_inter(const std::set<Actor>& a, const std::set<Actor>& b) {
    std::set<Actor> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

std::set<Actor> set_diff(const std::set<Actor>& a, const std::set<Actor>& b) {
    std::set<Actor> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

} // namespace

ActorSet ActorSet::intersect(const ActorSet& o) const {
    if (!cofinite_ && !o.cofinite_)
        return finite(set_inter(listed_, o.listed_));
    if (cofinite_ && o.cofinite_)
        return cofinite(set_union(listed_, o.listed_));
    if (!cofinite_)
        return finite(set_diff(listed_, o.listed_));
    return finite(set_diff(o.listed_, listed_));
}

ActorSet ActorSet::unite(const ActorSet& o) const { return complement().intersect(o.complement()).complement(); }

ActorSet ActorSet::minus(const ActorSet& o) const { return intersect(o.complement()); }

bool ActorSet::subset_of(const ActorSet& o) const {
    if (!cofinite_ && !o.cofinite_)
        return std::includes(o.listed_.begin(), o.listed_.end(), listed_.begin(), listed_.end());
    if (!cofinite_)
        return set_inter(listed_, o.listed_).empty();
    if (!o.cofinite_)
        return false; // an infinite set never fits in a finite one
    return std::includes(listed_.begin(), listed_.end(), o.listed_.begin(), o.listed_.end());
}

std::string to_string(const ActorSet& s) {
    std::ostringstream os;
    if (!s.is_finite())
        os << '~';
    bool first = true;
    for (const auto& a : s.listed()) {
        os << (first ? "" : ",") << a.name;
        first = false;
    }
    if (s.is_finite() && s.listed().empty())
        os << "{}";
    return os.str();
}

ActorSet parse_actor_set(const std::string& text) {
    std::string body = text;
    bool co = !body.empty() && body[0] == '~';
    if (co)
        body.erase(0, 1);
    std::set<Actor> names;
    std::stringstream ss(body);
    for (std::string item; std::getline(ss, item, ',');) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty() || item == "{}")
            continue;
        if (!(item[0] >= 'A' && item[0] <= 'Z'))
            throw std::invalid_argument("actor names start with an uppercase letter: '" + item + "'");
        names.insert(Actor{item});
    }
    return co ? ActorSet::cofinite(std::move(names)) : ActorSet::finite(std::move(names));
}

// -- deducibility -----------------------------------------------------------

KnowledgeBase::KnowledgeBase(ActorSet a, std::vector<Transaction> m) : actors(std::move(a)), mempool(std::move(m)) {
    for (const auto& tx : mempool) {
        for (const auto& arg : tx.args) {
            if (auto* r = std::get_if<RevealArg>(&arg))
                rev_nonces.insert(r->nonce);
            if (!std::holds_alternative<TokenInputArg>(arg))
                reusable.insert(arg);
        }
    }
}

namespace {

bool arg_deducible(const KnowledgeBase& kb, const TxArg& arg) {
    if (kb.reusable.count(arg))
        return true;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TokenInputArg>)
                return kb.actors.contains(x.actor);
            else if constexpr (std::is_same_v<T, CommitArg> || std::is_same_v<T, RevealArg>)
                return kb.actors.contains(x.nonce.owner) || kb.rev_nonces.count(x.nonce) > 0;
            else
                return true; // constants
        },
        arg);
}

} // namespace

bool can_deduce(const KnowledgeBase& kb, const Transaction& tx) {
    for (const auto& m : kb.mempool)
        if (m.same_call(tx))
            return true;
    for (const auto& a : tx.args)
        if (!arg_deducible(kb, a))
            return false;
    return true;
}

bool can_deduce(const ActorSet& actors, const std::vector<Transaction>& mempool, const Transaction& tx) {
    return can_deduce(KnowledgeBase(actors, mempool), tx);
}

std::set<Actor> authorisers(const Transaction& tx) {
    std::set<Actor> out;
    for (const auto& a : tx.args) {
        if (auto* ti = std::get_if<TokenInputArg>(&a))
            out.insert(ti->actor);
        else if (auto* c = std::get_if<CommitArg>(&a))
            out.insert(c->nonce.owner);
        else if (auto* r = std::get_if<RevealArg>(&a))
            out.insert(r->nonce.owner);
    }
    return out;
}

std::set<Actor> authorisers_set(const std::vector<Transaction>& txs) {
    std::set<Actor> out;
    for (const auto& tx : txs) {
        auto a = authorisers(tx);
        out.insert(a.begin(), a.end());
    }
    return out;
}

// -- bounded enumeration ----------------------------------------------------

namespace {

void tx_actors(const Transaction& tx, std::set<Actor>& out) {
    for (const auto& a : tx.args) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, ActorArg> || std::is_same_v<T, TokenInputArg>)
                    out.insert(x.actor);
                else if constexpr (std::is_same_v<T, CommitArg> || std::is_same_v<T, RevealArg>)
                    out.insert(x.nonce.owner);
            },
            a);
    }
}

template <class T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

Domain make_domain(const KnowledgeBase& kb, const ContractDef& c, const BlockchainState& s, const Bounds& bounds,
                   const std::vector<Transaction>& hint) {
    Domain d;
    std::set<Actor> actors(bounds.candidate_actors.begin(), bounds.candidate_actors.end());
    for (const auto& tx : kb.mempool)
        tx_actors(tx, actors);
    for (const auto& tx : hint)
        tx_actors(tx, actors);
    for (const auto& [a, w] : s.wallets.by_actor)
        actors.insert(a);
    std::vector<Actor> in_state;
    for (const auto& [k, v] : s.contract.vars)
        collect_actors(v, in_state);
    actors.insert(in_state.begin(), in_state.end());
    actors.insert(c.hardcoded_actors.begin(), c.hardcoded_actors.end());
    d.actors.assign(actors.begin(), actors.end());
    for (const auto& a : d.actors)
        if (kb.actors.contains(a))
            d.signers.push_back(a);

    std::set<Token> tokens = c.declared_tokens;
    for (const auto& t : tokens_in(s))
        tokens.insert(t);

    for (Amount n = 0; n <= bounds.max_amount; ++n)
        d.plain_args.push_back(NatArg{n});
    for (const auto& a : d.actors)
        d.plain_args.push_back(ActorArg{a});
    for (const auto& t : tokens)
        d.plain_args.push_back(TokenArg{t});

    std::set<NonceId> nonces(kb.rev_nonces.begin(), kb.rev_nonces.end());
    for (const auto& a : d.signers)
        for (unsigned i = 0; i < bounds.nonces_per_actor; ++i)
            nonces.insert(NonceId{a, i});
    for (const auto& n : nonces) {
        for (Amount v : bounds.secret_values) {
            d.plain_args.push_back(CommitArg{n, v});
            d.plain_args.push_back(RevealArg{n, v});
        }
    }
    d.plain_args.insert(d.plain_args.end(), kb.reusable.begin(), kb.reusable.end());

    for (const auto& a : d.signers)
        for (Amount n = 0; n <= bounds.max_amount; ++n)
            for (const auto& t : tokens)
                d.token_inputs.push_back(TokenInputArg{a, n, t});

    // Arguments of the hint and the mempool that the actors could write
    // themselves join the window even when they fall outside the bounds, so
    // a private search can craft every privately deducible mempool call.
    for (const auto* list : {&kb.mempool, &hint}) {
        for (const auto& tx : *list) {
            for (const auto& arg : tx.args) {
                if (auto* ti = std::get_if<TokenInputArg>(&arg)) {
                    if (kb.actors.contains(ti->actor))
                        d.token_inputs.push_back(*ti);
                } else if (arg_deducible(kb, arg)) {
                    d.plain_args.push_back(arg);
                }
            }
        }
    }
    sort_unique(d.plain_args);
    sort_unique(d.token_inputs);

    std::uint64_t top = 0;
    bool any = false;
    for (const auto& tx : s.contract.executed) {
        top = std::max(top, tx.nonce);
        any = true;
    }
    for (const auto* list : {&kb.mempool, &hint}) {
        for (const auto& tx : *list) {
            top = std::max(top, tx.nonce);
            any = true;
        }
    }
    d.fresh_nonce = any ? top + 1 : 0;
    return d;
}

std::vector<Transaction> enumerate_deducible(const KnowledgeBase& kb, const ContractDef& c, const Domain& dom) {
    std::vector<Transaction> out;
    std::vector<Transaction> mem = kb.mempool;
    std::sort(mem.begin(), mem.end());
    mem.erase(std::unique(mem.begin(), mem.end()), mem.end());
    out.insert(out.end(), mem.begin(), mem.end());

    // One enumeration per (name, parameter shape), in order of first clause.
    std::vector<std::pair<std::string, std::vector<bool>>> seen;
    for (const auto& cl : c.clauses) {
        std::vector<bool> shape;
        for (const auto& p : cl.params)
            shape.push_back(std::holds_alternative<TokenInputParam>(p));
        std::pair<std::string, std::vector<bool>> sig{cl.proc_name, shape};
        if (std::find(seen.begin(), seen.end(), sig) != seen.end())
            continue;
        seen.push_back(sig);

        std::vector<const std::vector<TxArg>*> pools;
        bool empty = false;
        for (bool ti : shape) {
            pools.push_back(ti ? &dom.token_inputs : &dom.plain_args);
            empty = empty || pools.back()->empty();
        }
        if (empty)
            continue;

        // Odometer over the argument pools, first position most significant,
        // which yields lexicographic argument order.
        std::vector<std::size_t> idx(shape.size(), 0);
        for (;;) {
            Transaction tx;
            tx.proc_name = cl.proc_name;
            tx.nonce = dom.fresh_nonce;
            for (std::size_t i = 0; i < idx.size(); ++i)
                tx.args.push_back((*pools[i])[idx[i]]);
            if (can_deduce(kb, tx))
                out.push_back(std::move(tx));
            std::size_t k = idx.size();
            while (k > 0) {
                --k;
                if (++idx[k] < pools[k]->size())
                    break;
                idx[k] = 0;
                if (k == 0) {
                    k = static_cast<std::size_t>(-1);
                    break;
                }
            }
            if (idx.empty() || k == static_cast<std::size_t>(-1))
                break;
        }
    }
    return out;
}

std::vector<Transaction> enumerate_deducible(const ActorSet& actors, const std::vector<Transaction>& mempool,
                                             const ContractDef& c, const BlockchainState& s, const Bounds& bounds) {
    KnowledgeBase kb(actors, mempool);
    return enumerate_deducible(kb, c, make_domain(kb, c, s, bounds, {}));
}

} // namespace txmev
