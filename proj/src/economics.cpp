#include "txmev/economics.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <unordered_map>

namespace txmev {

UnpricedToken::UnpricedToken(const Token& t) : std::runtime_error("token " + t.name + " has no price") {}

Gain wealth(const Wallet& w, const PriceTable& prices) {
    Gain total = 0;
    for (const auto& [t, n] : w) {
        auto it = prices.find(t);
        if (it == prices.end())
            throw UnpricedToken(t);
        total += static_cast<Gain>(n) * static_cast<Gain>(it->second);
    }
    return total;
}

Gain wealth_of(const ActorSet& actors, const WalletState& w, const PriceTable& prices) {
    Gain total = 0;
    for (const auto& [a, wallet] : w.by_actor)
        if (actors.contains(a))
            total += wealth(wallet, prices);
    return total;
}

Gain gain(const ActorSet& actors, const BlockchainState& s, const ContractDef& c,
          const std::vector<Transaction>& seq, const PriceTable& prices) {
    BlockchainState end = run_sequence(s, c, seq);
    return wealth_of(actors, end.wallets, prices) - wealth_of(actors, s.wallets, prices);
}

namespace {

struct Best {
    Gain value = 0;
    std::vector<Transaction> seq;
};

void put(std::string& out, const std::string& s) {
    out += s;
    out += '\x1f';
}

void put_num(std::string& out, std::uint64_t n) {
    out += std::to_string(n);
    out += '\x1f';
}

void encode_value(std::string& out, const Value& v) {
    out += static_cast<char>('0' + v.node.index());
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Amount>)
                put_num(out, x);
            else if constexpr (std::is_same_v<T, Actor> || std::is_same_v<T, Token>)
                put(out, x.name);
            else if constexpr (std::is_same_v<T, CommitValue> || std::is_same_v<T, RevealValue>) {
                put(out, x.nonce.owner.name);
                put_num(out, x.nonce.index);
                put_num(out, x.secret);
            } else if constexpr (std::is_same_v<T, MapValue>) {
                put_num(out, x.size());
                for (const auto& e : x.entries()) {
                    encode_value(out, e.key);
                    encode_value(out, e.value);
                }
            }
        },
        v.node);
}

class Searcher {
public:
    Searcher(const ContractDef& c, const ActorSet& actors, const PriceTable& prices,
             std::vector<Transaction> candidates, std::size_t mempool_count, std::uint64_t base, unsigned depth)
        : c_(c),
          actors_(actors),
          prices_(prices),
          cands_(std::move(candidates)),
          mempool_count_(mempool_count),
          base_(base),
          depth_(depth) {}

    std::uint64_t explored() const { return explored_; }

    /// Valid first moves from `s`, in candidate order, with their successor states.
    std::vector<std::pair<Transaction, BlockchainState>> children(const BlockchainState& s, unsigned pos) {
        std::vector<std::pair<Transaction, BlockchainState>> out;
        for (std::size_t i = 0; i < cands_.size(); ++i) {
            Transaction& tx = cands_[i];
            if (i >= mempool_count_)
                tx.nonce = base_ + pos;
            if (auto next = try_fire(s, c_, tx))
                out.emplace_back(tx, std::move(*next));
        }
        return out;
    }

    Best explore(const BlockchainState& s, Gain w, unsigned pos) {
        if (pos >= depth_)
            return {};
        std::string key = encode(s, depth_ - pos);
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        ++explored_;

        Best best;
        for (std::size_t i = 0; i < cands_.size(); ++i) {
            if (i >= mempool_count_)
                cands_[i].nonce = base_ + pos;
            auto next = try_fire(s, c_, cands_[i]);
            if (!next)
                continue;
            Transaction tx = cands_[i];
            Gain w2 = wealth_of(actors_, next->wallets, prices_);
            Best sub = explore(*next, w2, pos + 1);
            offer(best, w2 - w + sub.value, tx, sub.seq);
        }
        memo_.emplace(std::move(key), best);
        return best;
    }

    /// Replace `best` by tx·suffix when that is strictly preferable.
    static void offer(Best& best, Gain value, const Transaction& tx, const std::vector<Transaction>& suffix) {
        if (!prefer(value, tx, suffix, best))
            return;
        best.value = value;
        best.seq.clear();
        best.seq.push_back(tx);
        best.seq.insert(best.seq.end(), suffix.begin(), suffix.end());
    }

private:
    // Higher gain, then shorter, then lexicographically smaller.
    static bool prefer(Gain value, const Transaction& tx, const std::vector<Transaction>& suffix, const Best& best) {
        if (value != best.value)
            return value > best.value;
        std::size_t len = suffix.size() + 1;
        if (len != best.seq.size())
            return len < best.seq.size();
        if (tx != best.seq[0])
            return tx < best.seq[0];
        return std::lexicographical_compare(suffix.begin(), suffix.end(), best.seq.begin() + 1, best.seq.end());
    }

    std::string encode(const BlockchainState& s, unsigned remaining) const {
        std::string out;
        put_num(out, remaining);
        for (const auto& [a, w] : s.wallets.by_actor) {
            put(out, a.name);
            for (const auto& [t, n] : w) {
                put(out, t.name);
                put_num(out, n);
            }
            out += '\x1e';
        }
        out += '\x1d';
        for (const auto& [k, v] : s.contract.vars) {
            put(out, k);
            encode_value(out, v);
        }
        out += '\x1d';
        for (const auto& [t, n] : s.contract.balances) {
            put(out, t.name);
            put_num(out, n);
        }
        out += '\x1d';
        // Crafted transactions carry fresh nonces, so only executed mempool
        // transactions can affect what is valid later.
        for (std::size_t i = 0; i < mempool_count_; ++i)
            out += s.contract.executed.count(cands_[i]) ? '1' : '0';
        return out;
    }

    const ContractDef& c_;
    const ActorSet& actors_;
    const PriceTable& prices_;
    std::vector<Transaction> cands_;
    std::size_t mempool_count_;
    std::uint64_t base_;
    unsigned depth_;
    std::unordered_map<std::string, Best> memo_;
    std::uint64_t explored_ = 0;
};

} // namespace

GainReport max_gain(const BlockchainState& s, const ContractDef& c, const KnowledgeBase& kb, const Bounds& bounds,
                    const PriceTable& prices, const SearchOptions& opts, const std::vector<Transaction>& hint) {
    Domain dom = make_domain(kb, c, s, bounds, hint);
    std::vector<Transaction> cands = enumerate_deducible(kb, c, dom);
    std::vector<Transaction> mem = kb.mempool;
    std::sort(mem.begin(), mem.end());
    std::size_t mempool_count = std::unique(mem.begin(), mem.end()) - mem.begin();

    GainReport report;
    report.states_explored = 1;
    if (bounds.max_depth == 0)
        return report;

    Gain w0 = wealth_of(kb.actors, s.wallets, prices);
    Searcher root(c, kb.actors, prices, cands, mempool_count, dom.fresh_nonce, bounds.max_depth);
    auto kids = root.children(s, 0);

    // Each root subtree gets its own searcher and memo table, so the result
    // and the explored count are the same for any number of workers.
    std::vector<Best> results(kids.size());
    std::vector<std::uint64_t> explored(kids.size(), 0);
    auto work = [&](std::size_t i) {
        Searcher sub(c, kb.actors, prices, cands, mempool_count, dom.fresh_nonce, bounds.max_depth);
        Gain w1 = wealth_of(kb.actors, kids[i].second.wallets, prices);
        Best b = sub.explore(kids[i].second, w1, 1);
        results[i].value = w1 - w0 + b.value;
        results[i].seq = std::move(b.seq);
        explored[i] = sub.explored();
    };

    unsigned workers = std::max(1u, opts.workers);
    if (workers == 1 || kids.size() < 2) {
        for (std::size_t i = 0; i < kids.size(); ++i)
            work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers && t < kids.size(); ++t) {
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < kids.size();)
                    work(i);
            });
        }
        for (auto& th : pool)
            th.join();
    }

    Best best;
    for (std::size_t i = 0; i < kids.size(); ++i) {
        Searcher::offer(best, results[i].value, kids[i].first, results[i].seq);
        report.states_explored += explored[i];
    }
    report.value = best.value;
    report.witness = std::move(best.seq);
    return report;
}

GainReport unrealized_gain(const ActorSet& actors, const BlockchainState& s, const ContractDef& c,
                           const Bounds& bounds, const PriceTable& prices, const SearchOptions& opts,
                           const std::vector<Transaction>& hint) {
    return max_gain(s, c, KnowledgeBase(actors, {}), bounds, prices, opts, hint);
}

Gain external_gain(const ActorSet& actors, const BlockchainState& s, const ContractDef& c,
                   const std::vector<Transaction>& seq, const Bounds& bounds, const PriceTable& prices,
                   const SearchOptions& opts) {
    return gain(actors, s, c, seq, prices) - unrealized_gain(actors, s, c, bounds, prices, opts, seq).value;
}

} // namespace txmev
