#include "support.hpp"

using namespace txmev;
using namespace testing;

namespace {

Gain replay_gain(const ActorSet& a, const Scenario& sc, const std::vector<Transaction>& seq) {
    return gain(a, sc.start, sc.contract, seq, sc.prices);
}

} // namespace

TEST_SUITE("wealth") {
    TEST_CASE("empty wallet") { CHECK(wealth({}, unit_prices()) == 0); }

    TEST_CASE("single token") { CHECK(wealth({{token("T1"), 15}}, unit_prices({"T1"})) == 15); }

    TEST_CASE("weighted sum") {
        PriceTable p{{token("T0"), 2}, {token("T1"), 1}};
        Gain singles = wealth({{token("T0"), 2}}, p) + wealth({{token("T1"), 3}}, p);
        CHECK(singles == 2 * 2 + 3 * 1);
        CHECK(wealth({{token("T0"), 2}, {token("T1"), 3}}, p) == singles);
        CHECK(singles == 7);
    }

    TEST_CASE("unpriced tokens are an error") {
        CHECK_THROWS_AS(wealth({{token("U"), 1}}, unit_prices()), UnpricedToken);
    }

    TEST_CASE("wealth of a set") {
        WalletState w;
        w.credit(actor("A"), token("T"), 3);
        w.credit(actor("B"), token("T"), 4);
        w.credit(actor("C"), token("T"), 5);
        CHECK(wealth_of(finite({"A", "C"}), w, unit_prices()) == 8);
        CHECK(wealth_of(ActorSet::cofinite({actor("A")}), w, unit_prices()) == 9);
        CHECK(wealth_of(ActorSet::empty(), w, unit_prices()) == 0);
    }
}

TEST_SUITE("gain") {
    TEST_CASE("empty sequence") {
        Scenario sc = scenario("amm");
        CHECK(replay_gain(finite({"M"}), sc, {}) == 0);
    }

    TEST_CASE("AMM sandwich") {
        Scenario sc = scenario("amm");
        auto seq = txs("swap(A?15:T1, 6) swap(M?6:T0, 15)", sc.tokens, 100);
        // 6:T0 in, 15:T1 out at unit prices
        CHECK(replay_gain(finite({"M"}), sc, seq) == 15 - 6);
        CHECK(replay_gain(finite({"A"}), sc, seq) == 6 - 15);
    }

    TEST_CASE("Crowdfund claim after a donation") {
        Scenario sc = scenario("crowdfund");
        REQUIRE(sc.start.contract.balance(token("T")) == 50);
        auto seq = txs("donate(A?10:T) claim()", sc.tokens, 100);
        CHECK(replay_gain(finite({"B"}), sc, seq) == 60);
    }

    TEST_CASE("additive over disjoint sets") {
        Scenario sc = scenario("coinpusher");
        auto seq = txs("play(A?1:T) play(B?99:T)", sc.tokens, 100);
        Gain a = replay_gain(finite({"A"}), sc, seq);
        Gain b = replay_gain(finite({"B"}), sc, seq);
        CHECK(a == -1);
        CHECK(b == 1);
        CHECK(replay_gain(finite({"A", "B"}), sc, seq) == a + b);
    }
}

TEST_SUITE("max_gain") {
    TEST_CASE("CoinPusher: B tops up to the threshold") {
        Scenario sc = scenario("coinpusher");
        Bounds b = sc.bounds;
        b.candidate_actors = {actor("B")};
        KnowledgeBase kb(finite({"B"}), sc.mempool);
        GainReport r = max_gain(sc.start, sc.contract, kb, b, sc.prices);
        CHECK(r.value == 1);
        REQUIRE(r.witness.size() == 2);
        CHECK(r.witness[0].same_call(tx("play(A?1:T)")));
        CHECK(r.witness[1].same_call(tx("play(B?99:T)")));
        CHECK(replay_gain(finite({"B"}), sc, r.witness) == r.value);
    }

    TEST_CASE("depth zero") {
        Scenario sc = scenario("coinpusher");
        Bounds b = sc.bounds;
        b.max_depth = 0;
        GainReport r = max_gain(sc.start, sc.contract, KnowledgeBase(ActorSet::empty(), {}), b, sc.prices);
        CHECK(r.value == 0);
        CHECK(r.witness.empty());
    }

    TEST_CASE("BadLottery: M wins with A's commitment") {
        Scenario sc = scenario("badlottery");
        Bounds b = sc.bounds;
        b.candidate_actors = {actor("M")};
        KnowledgeBase kb(finite({"M"}), sc.mempool);
        GainReport r = max_gain(sc.start, sc.contract, kb, b, sc.prices);
        CHECK(r.value == 1);
        CHECK(r.witness.size() <= 5);
        CHECK(replay_gain(finite({"M"}), sc, r.witness) == 1);
    }

    TEST_CASE("the report does not depend on the worker count") {
        Scenario sc = scenario("amm");
        KnowledgeBase kb(finite({"M"}), sc.mempool);
        GainReport one = max_gain(sc.start, sc.contract, kb, sc.bounds, sc.prices, {1});
        GainReport four = max_gain(sc.start, sc.contract, kb, sc.bounds, sc.prices, {4});
        CHECK(one.value == four.value);
        CHECK(one.witness == four.witness);
        CHECK(one.states_explored == four.states_explored);
    }

    TEST_CASE("deeper or wider windows never lose value") {
        Scenario sc = scenario("coinpusher");
        KnowledgeBase kb(finite({"B"}), sc.mempool);
        Bounds narrow = sc.bounds;
        narrow.candidate_actors = {actor("B")};
        narrow.max_depth = 1;
        Bounds deep = narrow;
        deep.max_depth = 2;
        Gain v1 = max_gain(sc.start, sc.contract, kb, narrow, sc.prices).value;
        Gain v2 = max_gain(sc.start, sc.contract, kb, deep, sc.prices).value;
        CHECK(v1 <= v2);
        CHECK(v2 == 1);
    }
}

TEST_SUITE("unrealized_gain") {
    TEST_CASE("BadHTLC: the committer can reveal, the adversary cannot") {
        Scenario sc = scenario("badhtlc");
        Bounds ba = sc.bounds;
        ba.candidate_actors = {actor("A")};
        CHECK(unrealized_gain(finite({"A"}), sc.start, sc.contract, ba, sc.prices).value == 1);
        Bounds bm = sc.bounds;
        bm.candidate_actors = {actor("M")};
        CHECK(unrealized_gain(finite({"M"}), sc.start, sc.contract, bm, sc.prices).value == 0);
    }

    TEST_CASE("AMM: no profitable solo swap") {
        Scenario sc = scenario("amm");
        CHECK(unrealized_gain(finite({"M"}), sc.start, sc.contract, sc.bounds, sc.prices).value == 0);
    }
}

TEST_SUITE("external_gain") {
    TEST_CASE("Crowdfund") {
        Scenario sc = scenario("crowdfund");
        Bounds b = sc.bounds;
        b.candidate_actors = {actor("B")};
        auto seq = txs("donate(A?10:T) claim()", sc.tokens, 100);
        CHECK(external_gain(finite({"B"}), sc.start, sc.contract, seq, b, sc.prices) == 60);
    }

    TEST_CASE("AMM") {
        Scenario sc = scenario("amm");
        auto seq = txs("swap(A?15:T1, 6) swap(M?6:T0, 15)", sc.tokens, 100);
        CHECK(external_gain(finite({"M"}), sc.start, sc.contract, seq, sc.bounds, sc.prices) == 9);
    }

    TEST_CASE("empty sequence gives minus the unrealized gain") {
        Scenario sc = scenario("badhtlc");
        Bounds b = sc.bounds;
        b.candidate_actors = {actor("A")};
        Gain u = unrealized_gain(finite({"A"}), sc.start, sc.contract, b, sc.prices).value;
        CHECK(external_gain(finite({"A"}), sc.start, sc.contract, {}, b, sc.prices) == -u);
        CHECK(u == 1);
    }
}
