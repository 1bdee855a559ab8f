// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include "properties.hpp"

#include "txmev/txmev.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace txmev;

namespace {

const std::filesystem::path kCorpus = TXMEV_TEST_CORPUS;

Scenario load(const std::string& name) { return load_scenario(kCorpus / (name + ".scn")); }

std::vector<Transaction> seq_of(const Scenario& sc, const std::string& text) {
    NonceCounter n(100);
    return parse_transaction_list(text, sc.tokens, n);
}

std::vector<Transaction> seq_file(const Scenario& sc, const std::string& file) {
    std::ifstream in(kCorpus / file);
    std::ostringstream ss;
    ss << in.rdbuf();
    return seq_of(sc, ss.str());
}

Bounds for_actors(const Scenario& sc, std::initializer_list<const char*> names) {
    Bounds b = sc.bounds;
    for (auto n : names)
        if (std::find(b.candidate_actors.begin(), b.candidate_actors.end(), Actor{n}) == b.candidate_actors.end())
            b.candidate_actors.push_back(Actor{n});
    return b;
}

ActorSet fin(std::initializer_list<const char*> names) {
    std::set<Actor> s;
    for (auto n : names)
        s.insert(Actor{n});
    return ActorSet::finite(s);
}

Gain price(const Scenario& sc, const char* token) { return static_cast<Gain>(sc.prices.at(Token{token})); }

bool same_calls(const std::vector<Transaction>& got, const std::vector<Transaction>& want) {
    if (got.size() != want.size())
        return false;
    for (std::size_t i = 0; i < got.size(); ++i)
        if (!got[i].same_call(want[i]))
            return false;
    return true;
}

/// Collects failed expectations for one criterion.
struct Check {
    std::ostringstream notes;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes << (notes.tellp() > 0 ? "; " : "") << what;
        }
    }
    template <class A, class B>
    void equal(const A& got, const B& want, const std::string& what) {
        std::ostringstream os;
        os << what << ": got " << got << ", want " << want;
        expect(got == want, os.str());
    }
};

void htlc_trace(Check& k) {
    Scenario sc = load("htlc");
    auto seq = seq_of(sc, "commit(A?1:T, B, cmt(A.0,1)) reveal(rvl(A.0,1))");
    auto [end, trace] = exec_sequence(sc.initial, sc.contract, seq);
    k.equal(trace.applied_count(), std::size_t{2}, "applied");
    if (trace.steps.size() != 2)
        return;
    k.equal(to_string(trace.steps[0].post), std::string("contract[1:T, xa=A, xb=B, yc=cmt(A.0, 1)]"),
            "after commit");
    k.equal(to_string(trace.steps[1].post), std::string("A[1:T] | contract[xa=A, xb=B, yc=cmt(A.0, 1)]"),
            "after reveal");
    const BlockchainState& post = trace.steps[0].post;
    k.expect(sc.start.wallets == post.wallets && sc.start.contract.vars == post.contract.vars &&
                 sc.start.contract.balances == post.contract.balances,
             "scenario start differs from the post-commit state");
}

void coinpusher(Check& k) {
    Scenario sc = load("coinpusher");
    Bounds b = for_actors(sc, {"B"});
    b.max_depth = 2;
    b.max_amount = 100;
    MevReport r = mev(fin({"B"}), sc.start, sc.contract, sc.mempool, b, sc.prices);
    k.equal(r.value, 1 * price(sc, "T"), "mev");
    k.expect(same_calls(r.witness, seq_of(sc, "play(A?1:T) play(B?99:T)")), "witness");
}

void amm(Check& k) {
    Scenario sc = load("amm");
    auto two = seq_of(sc, "swap(A?15:T1, 6) swap(M?6:T0, 15)");
    k.equal(unrealized_gain(fin({"M"}), sc.start, sc.contract, sc.bounds, sc.prices).value, Gain{0}, "ugain");
    k.equal(external_gain(fin({"M"}), sc.start, sc.contract, two, sc.bounds, sc.prices), Gain{9}, "netgain");
    Verdict v = mev_freedom_check(sc.start, sc.contract, sc.mempool, sc.bounds, sc.prices);
    k.expect(v.attack(), "verdict is not AttackFound");
    k.expect(v.value >= 9, "attack value " + std::to_string(v.value) + " below 9");
    k.equal(v.bounds.max_depth, 2u, "depth");
    k.equal(v.bounds.max_amount, Amount{20}, "amount bound");
}

void bad_htlc(Check& k) {
    Scenario bad = load("badhtlc");
    MevReport r = mev(fin({"M"}), bad.start, bad.contract, bad.mempool, for_actors(bad, {"M"}), bad.prices);
    k.equal(r.value, 1 * price(bad, "T"), "BadHTLC mev");
    k.expect(same_calls(r.witness, seq_of(bad, "reveal(M?0:T, rvl(A.0,1))")), "front-run witness");
    Scenario good = load("htlc-mev");
    k.equal(mev(fin({"M"}), good.start, good.contract, good.mempool, for_actors(good, {"M"}), good.prices).value,
            Gain{0}, "HTLC mev");
    k.expect(!mev_freedom_check(good.start, good.contract, good.mempool, good.bounds, good.prices).attack(),
             "HTLC verdict is AttackFound");
}

void bad_lottery(Check& k) {
    Scenario sc = load("badlottery");
    Bounds b = for_actors(sc, {"M"});
    k.equal(b.max_depth, 5u, "depth");
    MevReport r = mev(fin({"M"}), sc.start, sc.contract, sc.mempool, b, sc.prices);
    k.equal(r.value, 1 * price(sc, "T"), "mev");
    k.equal(gain(fin({"M"}), sc.start, sc.contract, r.witness, sc.prices) - r.unrealized.value, r.value,
            "witness replay");
    bool replays_commitment = false;
    for (const auto& t : r.witness)
        for (const auto& a : t.args)
            if (auto* c = std::get_if<CommitArg>(&a); c && c->nonce.owner == Actor{"A"} && t.proc_name == "commit" &&
                                                       authorisers(t).count(Actor{"M"}))
                replays_commitment = true;
    k.expect(replays_commitment, "witness has no commitment by M under A's nonce");
    // the textbook sequence: M replays A's commitment and wins
    auto textbook = seq_file(sc, "badlottery.seq");
    k.equal(external_gain(fin({"M"}), sc.start, sc.contract, textbook, b, sc.prices), 1 * price(sc, "T"),
            "replay sequence netgain");
}

void crowdfund(Check& k) {
    Scenario sc = load("crowdfund");
    auto seq = seq_of(sc, "donate(A?10:T) claim()");
    k.equal(external_gain(fin({"B"}), sc.start, sc.contract, seq, for_actors(sc, {"B"}), sc.prices),
            60 * price(sc, "T"), "netgain");
    Scenario post = load("crowdfund-post-init");
    k.expect(!mev_freedom_check(post.start, post.contract, post.mempool, post.bounds, post.prices).attack(),
             "post-init verdict is AttackFound");
}

void double_auth(Check& k) {
    Scenario sc = load("doubleauth");
    k.equal(sc.bounds.max_depth, 3u, "depth");
    k.equal(mev(fin({"A"}), sc.start, sc.contract, sc.mempool, for_actors(sc, {"A"}), sc.prices).value,
            1 * price(sc, "T"), "mev {A}");
    k.equal(mev(fin({"A", "B"}), sc.start, sc.contract, sc.mempool, for_actors(sc, {"A", "B"}), sc.prices).value,
            Gain{0}, "mev {A,B}");
}

void bank(Check& k) {
    Scenario sc = load("bank");
    k.equal(sc.bounds.max_depth, 4u, "depth");
    Verdict v = mev_freedom_check(sc.start, sc.contract, sc.mempool, sc.bounds, sc.prices);
    k.expect(v.kind == Verdict::Kind::NoAttackWithinBounds, "verdict is AttackFound");
}

void ponzi(Check& k) {
    Scenario sc = load("ponzi");
    auto seq = seq_file(sc, "ponzi.seq");
    k.equal(seq.size(), std::size_t{4}, "sequence length");
    k.equal(gain(fin({"M"}), sc.start, sc.contract, seq, sc.prices), 1 * price(sc, "T"), "gain");
}

void properties(Check& k) {
    for (const auto& name : proptest::names()) {
        proptest::Outcome o = proptest::run(name, kCorpus);
        k.expect(o.cases >= 200, name + " ran only " + std::to_string(o.cases) + " cases");
        k.expect(o.ok(), name + " failed " + std::to_string(o.failures) + " times, " + o.counterexample);
        k.expect(o.nontrivial > 0, name + " had no nontrivial case");
    }
}

struct Criterion {
    int id;
    const char* title;
    std::function<void(Check&)> run;
    double budget_s;
};

} // namespace

int main() {
    const Criterion all[] = {
        {1, "HTLC golden trace", htlc_trace, 1},
        {2, "CoinPusher mev for B", coinpusher, 10},
        {3, "AMM sandwich attack", amm, 10},
        {4, "BadHTLC front-run, HTLC free", bad_htlc, 10},
        {5, "BadLottery commitment replay", bad_lottery, 10},
        {6, "Crowdfund claim gain, post-init free", crowdfund, 10},
        {7, "DoubleAuth non-monotonicity", double_auth, 10},
        {8, "Bank is free within bounds", bank, 10},
        {9, "Ponzi two-withdraw gain", ponzi, 10},
        {10, "randomized property suites", properties, 60},
    };
    int failed = 0;
    for (const auto& c : all) {
        Check k;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(k);
        } catch (const std::exception& e) {
            k.expect(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s)
            k.expect(false, "took " + std::to_string(secs) + " s");
        failed += !k.ok;
        std::cout << (k.ok ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title;
        char buf[32];
        std::snprintf(buf, sizeof buf, " (%.2f s)", secs);
        std::cout << buf;
        if (!k.ok)
            std::cout << "  -- " << k.notes.str();
        std::cout << '\n' << std::flush;
    }
    return failed == 0 ? 0 : 1;
}
