#include "support.hpp"

#include <cstdlib>

using namespace txmev;
using namespace testing;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scn(const std::string& name) { return (corpus() / (name + ".scn")).string(); }

bool has_line(const std::string& text, const std::string& line) {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        if (l == line)
            return true;
    return false;
}

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << body;
    return p;
}

} // namespace

TEST_SUITE("scenario") {
    TEST_CASE("HTLC starts after the commitment") {
        Scenario sc = scenario("htlc");
        ContractDef c = sc.contract;
        BlockchainState expect = run_sequence(sc.initial, c, txs("commit(A?1:T, B, cmt(A.0,1))"));
        CHECK(sc.start.wallets == expect.wallets);
        CHECK(sc.start.contract.vars == expect.contract.vars);
        CHECK(sc.start.contract.balance(token("T")) == 1);
        CHECK(sc.start.wallets.balance(actor("A"), token("T")) == 0);
    }

    TEST_CASE("no setup means the initial state") {
        Scenario sc = scenario("coinpusher");
        CHECK(sc.start == sc.initial);
        CHECK(sc.start.contract.vars.empty());
        CHECK(sc.start.contract.balances.empty());
    }

    TEST_CASE("undeclared tokens are rejected") {
        auto p = write_temp("txmev_bad_token.scn", "contract " + (corpus() / "contracts/coinpusher.tx").string() +
                                                       "\nprices T=1\nactor A { U: 1 }\n");
        CHECK_THROWS_AS(load_scenario(p), ScenarioError);
        auto q = write_temp("txmev_bad_mempool.scn", "contract " + (corpus() / "contracts/coinpusher.tx").string() +
                                                         "\nprices T=1\nmempool [ play(A?1:U) ]\n");
        CHECK_THROWS(load_scenario(q));
    }

    TEST_CASE("unknown directives are rejected") {
        auto p = write_temp("txmev_bad_directive.scn", "contract " +
                                                           (corpus() / "contracts/coinpusher.tx").string() +
                                                           "\nprices T=1\nfrobnicate 3\n");
        CHECK_THROWS_AS(load_scenario(p), ScenarioError);
    }

    TEST_CASE("every corpus scenario loads") {
        for (const auto& e : std::filesystem::directory_iterator(corpus())) {
            if (e.path().extension() != ".scn")
                continue;
            CAPTURE(e.path().string());
            CHECK_NOTHROW(load_scenario(e.path()));
        }
    }
}

TEST_SUITE("report") {
    TEST_CASE("machine form") {
        Report r;
        r.add("value", "1");
        r.add("witness", std::vector<std::string>{"a()", "b()"});
        r.add("none", std::vector<std::string>{});
        CHECK(r.machine() == "value: 1\nwitness:\n  - a()\n  - b()\nnone: []\n");
        REQUIRE(r.find("value"));
        CHECK(*r.find("value") == "1");
        CHECK(r.find("missing") == nullptr);
    }

    TEST_CASE("text form") {
        Report r;
        r.add("v", "1");
        r.add("longer", std::vector<std::string>{"a", "b"});
        CHECK(r.text() == "v       1\nlonger  a\n        b\n");
    }
}

TEST_SUITE("cli") {
    TEST_CASE("mev on CoinPusher for B") {
        Run r = cli({"mev", scn("coinpusher"), "--actors", "B", "--format", "machine"});
        CHECK(r.code == 0);
        CHECK(has_line(r.out, "value: 1"));
        CHECK(has_line(r.out, "  - play(A?1:T)@0"));
        CHECK(has_line(r.out, "  - play(B?99:T)@2"));
    }

    TEST_CASE("auth of win() is empty") {
        Run r = cli({"auth", "--tx", "win()", "--format", "machine"});
        CHECK(r.code == 0);
        CHECK(has_line(r.out, "authorisers: []"));
    }

    TEST_CASE("mev-free on the AMM finds the sandwich") {
        Run r = cli({"mev-free", scn("amm"), "--format", "machine"});
        CHECK(r.code == 1);
        CHECK(has_line(r.out, "verdict: AttackFound"));
        CHECK(has_line(r.out, "value: 9"));
    }

    TEST_CASE("mev-free exit code for a free state") {
        Run r = cli({"mev-free", scn("bank"), "--format", "machine"});
        CHECK(r.code == 0);
        CHECK(has_line(r.out, "verdict: NoAttackWithinBounds"));
    }

    TEST_CASE("scenario names resolve against the corpus") {
        Run r = cli({"cluster", "coinpusher", "--format", "machine"});
        CHECK(r.code == 0);
        CHECK(has_line(r.out, "cluster: ~A"));
    }

    TEST_CASE("gain and replay from a sequence file") {
        Run r = cli({"gain", scn("ponzi"), "--seq", "ponzi.seq", "--actors", "M", "--format", "machine"});
        CHECK(r.code == 0);
        CHECK(has_line(r.out, "gain: 1"));
        Run run = cli({"run", scn("ponzi"), "--seq", "ponzi.seq", "--format", "machine"});
        CHECK(run.code == 0);
        CHECK(has_line(run.out, "applied: 4/4"));
    }

    TEST_CASE("deduce") {
        Run yes = cli({"deduce", scn("badhtlc"), "--actors", "M", "--tx", "reveal(M?0:T, rvl(A.0,1))", "--format",
                       "machine"});
        CHECK(yes.code == 0);
        CHECK(has_line(yes.out, "deducible: yes"));
        Run no = cli({"deduce", scn("badhtlc"), "--actors", "M", "--tx", "timeout(M?0:T, Oracle?0:T)", "--format",
                      "machine"});
        CHECK(has_line(no.out, "deducible: no"));
    }

    TEST_CASE("errors exit with 2") {
        CHECK(cli({"mev", "no-such-scenario"}).code == 2);
        CHECK(cli({"mev", scn("coinpusher"), "--max-depth", "x"}).code == 2);
        CHECK(cli({"mev", scn("coinpusher"), "--format", "yaml"}).code == 2);
        CHECK(cli({"frobnicate"}).code == 2);
        CHECK(cli({"auth", "--tx", "win("}).code == 2);
        CHECK(cli({"mev", scn("coinpusher"), "--actors", "lower"}).code == 2);
        CHECK(!cli({"mev", "no-such-scenario"}).err.empty());
    }

    TEST_CASE("help exits with 0") { CHECK(cli({"--help"}).code == 0); }

    TEST_CASE("output is deterministic and independent of workers") {
        Run a = cli({"mev", scn("amm"), "--format", "machine"});
        Run b = cli({"mev", scn("amm"), "--format", "machine"});
        Run c = cli({"mev", scn("amm"), "--format", "machine", "--workers", "3"});
        CHECK(a.out == b.out);
        CHECK(a.out == c.out);
    }

    TEST_CASE("text and machine carry the same fields") {
        Run m = cli({"cluster", scn("doubleauth"), "--format", "machine"});
        Run t = cli({"cluster", scn("doubleauth")});
        CHECK(has_line(m.out, "cluster: ~A,B,M"));
        CHECK(t.out.find("~A,B,M") != std::string::npos);
        CHECK(t.out.find("digest") != std::string::npos);
        CHECK(m.out.find("digest: ") != std::string::npos);
    }

    TEST_CASE("flags override scenario bounds") {
        Run r = cli({"mev", scn("coinpusher"), "--actors", "B", "--max-depth", "1", "--format", "machine"});
        CHECK(has_line(r.out, "value: 0"));
    }
}
