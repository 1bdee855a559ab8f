#include "support.hpp"

#include <algorithm>

using namespace txmev;
using namespace testing;

namespace {

std::set<Actor> actors(std::initializer_list<const char*> names) {
    std::set<Actor> s;
    for (auto n : names)
        s.insert(Actor{n});
    return s;
}

bool contains(const std::vector<Transaction>& list, const Transaction& t) {
    return std::any_of(list.begin(), list.end(), [&](const Transaction& x) { return x.same_call(t); });
}

} // namespace

TEST_SUITE("actor_set") {
    TEST_CASE("finite and cofinite membership") {
        ActorSet f = finite({"A", "B"});
        ActorSet co = ActorSet::cofinite(actors({"A"}));
        CHECK(f.contains(actor("A")));
        CHECK(!f.contains(actor("C")));
        CHECK(!co.contains(actor("A")));
        CHECK(co.contains(actor("Zed")));
        CHECK(ActorSet::universe().contains(actor("Q")));
        CHECK(!ActorSet::empty().contains(actor("Q")));
    }

    TEST_CASE("boolean operations") {
        ActorSet f = finite({"A", "B"});
        ActorSet co = ActorSet::cofinite(actors({"B", "C"}));
        CHECK(f.intersect(co) == finite({"A"}));
        CHECK(f.unite(co) == ActorSet::cofinite(actors({"C"})));
        CHECK(co.minus(f) == ActorSet::cofinite(actors({"A", "B", "C"})));
        CHECK(f.minus(co) == finite({"B"}));
        CHECK(co.complement() == finite({"B", "C"}));
        CHECK(ActorSet::cofinite(actors({"A"})).intersect(ActorSet::cofinite(actors({"B"}))) ==
              ActorSet::cofinite(actors({"A", "B"})));
    }

    TEST_CASE("subsets") {
        CHECK(finite({"A"}).subset_of(finite({"A", "B"})));
        CHECK(!finite({"A", "C"}).subset_of(finite({"A", "B"})));
        CHECK(finite({"A"}).subset_of(ActorSet::cofinite(actors({"B"}))));
        CHECK(!finite({"B"}).subset_of(ActorSet::cofinite(actors({"B"}))));
        CHECK(!ActorSet::universe().subset_of(finite({"A"})));
        CHECK(ActorSet::cofinite(actors({"A", "B"})).subset_of(ActorSet::cofinite(actors({"A"}))));
        CHECK(!ActorSet::cofinite(actors({"A"})).subset_of(ActorSet::cofinite(actors({"A", "B"}))));
    }

    TEST_CASE("parse and print") {
        CHECK(parse_actor_set("A,B") == finite({"A", "B"}));
        CHECK(parse_actor_set(" A , B ") == finite({"A", "B"}));
        CHECK(parse_actor_set("~A") == ActorSet::cofinite(actors({"A"})));
        CHECK(parse_actor_set("~") == ActorSet::universe());
        CHECK(parse_actor_set("") == ActorSet::empty());
        CHECK_THROWS_AS(parse_actor_set("a"), std::invalid_argument);
        CHECK(to_string(finite({"B", "A"})) == "A,B");
        CHECK(to_string(ActorSet::cofinite(actors({"A"}))) == "~A");
        CHECK(to_string(ActorSet::empty()) == "{}");
        CHECK(to_string(ActorSet::universe()) == "~");
    }
}

TEST_SUITE("can_deduce") {
    TEST_CASE("front-running a reveal reuses the revealed secret") {
        auto mem = txs("reveal(A?0:T, rvl(A.0,1))");
        CHECK(can_deduce(finite({"M"}), mem, tx("reveal(M?0:T, rvl(A.0,1))")));
    }

    TEST_CASE("somebody else's token input cannot be crafted") {
        CHECK(!can_deduce(finite({"M"}), {}, tx("timeout(M?0:T, Oracle?0:T)")));
        // not even when it sits in the mempool inside another transaction
        CHECK(!can_deduce(finite({"M"}), txs("timeout(Oracle?0:T)"), tx("timeout(M?0:T, Oracle?0:T)")));
    }

    TEST_CASE("a commitment can be replayed") {
        auto mem = txs("commit(A?1:T, cmt(A.0,1))");
        CHECK(can_deduce(finite({"M"}), mem, tx("commit(M?1:T, cmt(A.0,1))")));
        CHECK(!can_deduce(finite({"M"}), {}, tx("commit(M?1:T, cmt(A.0,1))")));
    }

    TEST_CASE("constants and own inputs need no mempool") {
        CHECK(can_deduce(finite({"A"}), {}, tx("f(A?3:T, 7, B, T)")));
        CHECK(can_deduce(ActorSet::empty(), {}, tx("win()")));
        CHECK(can_deduce(finite({"A"}), {}, tx("f(cmt(A.2,0), rvl(A.2,0))")));
        CHECK(!can_deduce(finite({"A"}), {}, tx("f(rvl(B.0,0))")));
    }

    TEST_CASE("a revealed nonce opens every secret under it") {
        auto mem = txs("reveal(rvl(A.0,1))");
        CHECK(can_deduce(finite({"M"}), mem, tx("commit(M?1:T, cmt(A.0,0))")));
        CHECK(!can_deduce(finite({"M"}), mem, tx("commit(M?1:T, cmt(A.1,0))")));
    }

    TEST_CASE("mempool transactions are deducible whatever their nonce") {
        auto mem = txs("play(A?1:T)");
        CHECK(can_deduce(ActorSet::empty(), mem, tx("play(A?1:T)", {{"T"}}, 42)));
    }
}

TEST_SUITE("authorisers") {
    TEST_CASE("single transactions") {
        CHECK(authorisers(tx("reveal(A?0:T, rvl(A.0,1))")) == actors({"A"}));
        CHECK(authorisers(tx("commit(M?1:T, cmt(A.0,1))")) == actors({"A", "M"}));
        CHECK(authorisers(tx("win()")).empty());
        CHECK(authorisers(tx("xfer(A?0:T, 1, B)")) == actors({"A"}));
    }

    TEST_CASE("sets of transactions") {
        CHECK(authorisers_set({}).empty());
        CHECK(authorisers_set(txs("reveal(A?0:T, rvl(A.0,1)) win()")) == actors({"A"}));
        CHECK(authorisers_set(txs("commit(M?1:T, cmt(A.0,1))")) == actors({"A", "M"}));
    }
}

TEST_SUITE("enumerate_deducible") {
    TEST_CASE("CoinPusher: the cofinite crowd plays any amount") {
        ContractDef c = contract("coinpusher");
        BlockchainState s;
        s.wallets.credit(actor("A"), token("T"), 1);
        s.wallets.credit(actor("B"), token("T"), 100);
        Bounds b;
        b.max_amount = 100;
        b.candidate_actors = {actor("B")};
        auto mem = txs("play(A?1:T)");
        auto list = enumerate_deducible(ActorSet::cofinite(actors({"A"})), mem, c, s, b);
        REQUIRE(!list.empty());
        CHECK(list.front() == mem.front());
        for (Amount k = 0; k <= 100; ++k)
            CHECK(contains(list, tx("play(B?" + std::to_string(k) + ":T)")));
        CHECK(!contains(list, tx("play(A?2:T)")));
        for (const auto& t : list)
            CHECK(can_deduce(ActorSet::cofinite(actors({"A"})), mem, t));
    }

    TEST_CASE("no knowledge leaves only constant arguments") {
        ContractDef c = contract("badlottery");
        auto list = enumerate_deducible(ActorSet::empty(), {}, c, BlockchainState{}, Bounds{});
        CHECK(contains(list, tx("win()")));
        for (const auto& t : list)
            CHECK(authorisers(t).empty());
    }

    TEST_CASE("HTLC: M alone never reveals A's secret") {
        Scenario sc = scenario("htlc");
        Bounds b = sc.bounds;
        b.candidate_actors = {actor("M")};
        auto list = enumerate_deducible(finite({"M"}), {}, sc.contract, sc.start, b);
        for (const auto& t : list) {
            for (const auto& a : t.args) {
                if (auto* r = std::get_if<RevealArg>(&a))
                    CHECK(r->nonce.owner != actor("A"));
            }
        }
        CHECK(contains(list, tx("reveal(rvl(M.0,1))")));
    }

    TEST_CASE("crafted transactions carry a fresh nonce") {
        Scenario sc = scenario("htlc");
        KnowledgeBase kb(finite({"M"}), sc.mempool);
        Domain d = make_domain(kb, sc.contract, sc.start, sc.bounds, sc.mempool);
        for (const auto& t : sc.start.contract.executed)
            CHECK(t.nonce < d.fresh_nonce);
        for (const auto& t : sc.mempool)
            CHECK(t.nonce < d.fresh_nonce);
        auto list = enumerate_deducible(kb, sc.contract, d);
        for (std::size_t i = 1; i < list.size(); ++i)
            CHECK(list[i].nonce == d.fresh_nonce);
    }

    TEST_CASE("enumeration is deterministic") {
        Scenario sc = scenario("bank");
        auto one = enumerate_deducible(finite({"M"}), sc.mempool, sc.contract, sc.start, sc.bounds);
        auto two = enumerate_deducible(finite({"M"}), sc.mempool, sc.contract, sc.start, sc.bounds);
        CHECK(one == two);
    }
}
