#include "txmev/cli.hpp"

#include "txmev/mev.hpp"
#include "txmev/report.hpp"
#include "txmev/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#ifndef TXMEV_DEFAULT_CORPUS
#define TXMEV_DEFAULT_CORPUS "corpus"
#endif

namespace txmev {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string scenario;
    std::string tx;
    std::string actors;
    std::string seq;
    long long max_depth = -1;
    long long max_amount = -1;
    long long reps = -1;
    unsigned workers = 1;
    std::string format = "text";
    bool timing = false;
};

fs::path corpus_dir() {
    if (const char* env = std::getenv("TXMEV_CORPUS"); env && *env)
        return env;
    return TXMEV_DEFAULT_CORPUS;
}

fs::path resolve_scenario(const std::string& name) {
    fs::path p(name);
    if (fs::exists(p))
        return p;
    fs::path dir = corpus_dir();
    for (const fs::path& c : {dir / p, dir / (name + ".scn"), dir / p.filename()})
        if (fs::exists(c))
            return c;
    throw UsageError("scenario not found: " + name);
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw UsageError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string amounts(const Wallet& w) {
    std::string out;
    for (const auto& [t, n] : w)
        out += (out.empty() ? "" : ", ") + std::to_string(n) + ":" + t.name;
    return out.empty() ? "0" : out;
}

std::vector<std::string> txs(const std::vector<Transaction>& seq) {
    std::vector<std::string> out;
    for (const auto& tx : seq)
        out.push_back(to_string(tx));
    return out;
}

std::vector<std::string> actor_list(const std::set<Actor>& a) {
    std::vector<std::string> out;
    for (const auto& x : a)
        out.push_back(x.name);
    return out;
}

std::string bounds_text(const Bounds& b) {
    std::string secrets;
    for (Amount v : b.secret_values)
        secrets += (secrets.empty() ? "" : ",") + std::to_string(v);
    return "depth=" + std::to_string(b.max_depth) + " amount=" + std::to_string(b.max_amount) +
           " secrets=" + secrets + " nonces=" + std::to_string(b.nonces_per_actor) +
           " reps=" + std::to_string(b.representatives);
}

void add_state(Report& r, const std::string& prefix, const BlockchainState& s) {
    std::vector<std::string> wallets;
    for (const auto& [a, w] : s.wallets.by_actor)
        wallets.push_back(a.name + " " + amounts(w));
    r.add(prefix + "wallets", wallets);
    r.add(prefix + "balance", amounts(s.contract.balances));
    std::vector<std::string> vars;
    for (const auto& [k, v] : s.contract.vars)
        vars.push_back(k + " = " + to_string(v));
    r.add(prefix + "vars", vars);
}

class Command {
public:
    Command(std::string name, const Options& o) : name_(std::move(name)), o_(o) {}

    bool has_scenario() const { return !o_.scenario.empty(); }

    const Scenario& scenario() {
        if (!sc_) {
            if (o_.scenario.empty())
                throw UsageError(name_ + " needs a scenario");
            sc_ = load_scenario(resolve_scenario(o_.scenario));
        }
        return *sc_;
    }

    std::set<Token> tokens() { return has_scenario() ? scenario().tokens : std::set<Token>{}; }

    NonceCounter counter() { return has_scenario() ? scenario().nonces : NonceCounter{}; }

    std::vector<Transaction> parse_list(const std::string& text) {
        NonceCounter n = counter();
        return parse_transaction_list(text, tokens(), n);
    }

    Transaction parse_tx() {
        if (o_.tx.empty())
            throw UsageError(name_ + " needs --tx");
        NonceCounter n = counter();
        return parse_transaction(o_.tx, tokens(), n);
    }

    /// --seq, then --tx, then the scenario mempool in file order.
    std::vector<Transaction> sequence() {
        if (!o_.seq.empty()) {
            fs::path p(o_.seq);
            if (!fs::exists(p) && has_scenario())
                p = scenario().path.parent_path() / o_.seq;
            return parse_list(read_text(p));
        }
        if (!o_.tx.empty())
            return parse_list(o_.tx);
        return scenario().mempool;
    }

    ActorSet actors() {
        if (!o_.actors.empty()) {
            try {
                return parse_actor_set(o_.actors);
            } catch (const std::invalid_argument& e) {
                throw UsageError(std::string("--actors: ") + e.what());
            }
        }
        if (!has_scenario())
            throw UsageError(name_ + " needs --actors or a scenario");
        const auto& pool = scenario().pool;
        return ActorSet::finite({pool.begin(), pool.end()});
    }

    Bounds bounds() {
        Bounds b = has_scenario() ? scenario().bounds : Bounds{};
        if (o_.max_depth >= 0)
            b.max_depth = static_cast<unsigned>(o_.max_depth);
        if (o_.max_amount >= 0)
            b.max_amount = static_cast<Amount>(o_.max_amount);
        if (o_.reps >= 0)
            b.representatives = static_cast<unsigned>(o_.reps);
        return b;
    }

    /// Bounds whose candidates also cover the named actors of `a`.
    Bounds bounds_for(const ActorSet& a) {
        Bounds b = bounds();
        if (a.is_finite())
            for (const auto& x : a.listed())
                if (std::find(b.candidate_actors.begin(), b.candidate_actors.end(), x) == b.candidate_actors.end())
                    b.candidate_actors.push_back(x);
        return b;
    }

    SearchOptions search() const {
        SearchOptions s;
        s.workers = o_.workers;
        return s;
    }

    Report header() {
        Report r;
        r.add("command", name_);
        if (has_scenario()) {
            r.add("scenario", scenario().path.filename().string());
            r.add("digest", scenario().digest);
        }
        return r;
    }

private:
    std::string name_;
    const Options& o_;
    std::optional<Scenario> sc_;
};

int cmd_parse(Command& cmd, const Options& o, Report& r) {
    if (!o.tx.empty()) {
        r = cmd.header();
        Transaction tx = cmd.parse_tx();
        r.add("transaction", to_string(tx));
        r.add("procedure", tx.proc_name);
        r.add("nonce", std::to_string(tx.nonce));
        std::vector<std::string> args;
        for (const auto& a : tx.args)
            args.push_back(to_string(a));
        r.add("args", args);
        return 0;
    }
    if (o.scenario.empty())
        throw UsageError("parse needs a contract or scenario file, or --tx");

    ContractDef c;
    std::vector<Diagnostic> diags;
    fs::path p = fs::exists(o.scenario) ? fs::path(o.scenario) : resolve_scenario(o.scenario);
    bool is_scenario = p.extension() == ".scn";
    if (is_scenario) {
        r = cmd.header();
        c = cmd.scenario().contract;
        diags = cmd.scenario().diagnostics;
    } else {
        std::string text = read_text(p);
        r.add("command", "parse");
        r.add("file", p.filename().string());
        r.add("digest", fnv1a_hex(text));
        c = load_contract(text);
        diags = check_wellformed(c);
    }
    r.add("contract", c.name);
    std::vector<std::string> toks, clauses, ds;
    for (const auto& t : c.declared_tokens)
        toks.push_back(t.name);
    r.add("tokens", toks);
    r.add("hardcoded_actors", actor_list(c.hardcoded_actors));
    for (const auto& cl : c.clauses) {
        std::string line = to_string(cl);
        std::replace(line.begin(), line.end(), '\n', ' ');
        clauses.push_back(line);
    }
    r.add("clauses", clauses);
    for (const auto& d : diags)
        ds.push_back(std::string(d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ") + d.message);
    r.add("diagnostics", ds);
    if (is_scenario) {
        const Scenario& sc = cmd.scenario();
        r.add("setup", txs(sc.setup));
        r.add("mempool", txs(sc.mempool));
        std::vector<std::string> pool;
        for (const auto& a : sc.pool)
            pool.push_back(a.name);
        r.add("pool", pool);
        r.add("bounds", bounds_text(sc.bounds));
        add_state(r, "start_", sc.start);
    }
    return 0;
}

int cmd_run(Command& cmd, const Options&, Report& r) {
    r = cmd.header();
    const Scenario& sc = cmd.scenario();
    std::vector<Transaction> seq = cmd.sequence();
    auto [end, trace] = exec_sequence(sc.start, sc.contract, seq);
    std::vector<std::string> steps, states;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const TraceStep& st = trace.steps[i];
        std::string line = std::to_string(i + 1) + " " + to_string(st.tx);
        if (st.applied) {
            line += " valid clause=" + std::to_string(*st.clause + 1);
            if (st.ambiguous)
                line += " ambiguous";
        } else {
            line += std::string(" invalid ") + to_string(st.stage) + ": " + st.reason;
        }
        steps.push_back(line);
        states.push_back(std::to_string(i + 1) + " " + to_string(st.post));
    }
    r.add("start", to_string(sc.start));
    r.add("trace", steps);
    r.add("states", states);
    r.add("applied", std::to_string(trace.applied_count()) + "/" + std::to_string(trace.steps.size()));
    r.add("ambiguous", trace.any_ambiguous() ? "yes" : "no");
    add_state(r, "final_", end);
    return 0;
}

int cmd_deduce(Command& cmd, const Options&, Report& r) {
    r = cmd.header();
    Transaction tx = cmd.parse_tx();
    ActorSet a = cmd.actors();
    std::vector<Transaction> mempool = cmd.has_scenario() ? cmd.scenario().mempool : std::vector<Transaction>{};
    r.add("transaction", to_string(tx));
    r.add("actors", to_string(a));
    r.add("mempool", txs(mempool));
    r.add("deducible", can_deduce(a, mempool, tx) ? "yes" : "no");
    return 0;
}

int cmd_auth(Command& cmd, const Options& o, Report& r) {
    r = cmd.header();
    if (!o.tx.empty()) {
        Transaction tx = cmd.parse_tx();
        r.add("transactions", txs({tx}));
        r.add("authorisers", actor_list(authorisers(tx)));
    } else {
        const auto& m = cmd.scenario().mempool;
        r.add("transactions", txs(m));
        r.add("authorisers", actor_list(authorisers_set(m)));
    }
    return 0;
}

int cmd_gain(Command& cmd, const Options&, Report& r) {
    r = cmd.header();
    const Scenario& sc = cmd.scenario();
    ActorSet a = cmd.actors();
    Bounds b = cmd.bounds_for(a);
    std::vector<Transaction> seq = cmd.sequence();
    Gain g = gain(a, sc.start, sc.contract, seq, sc.prices);
    GainReport u = unrealized_gain(a, sc.start, sc.contract, b, sc.prices, cmd.search(), seq);
    r.add("actors", to_string(a));
    r.add("bounds", bounds_text(b));
    r.add("sequence", txs(seq));
    r.add("gain", std::to_string(g));
    r.add("unrealized_gain", std::to_string(u.value));
    r.add("unrealized_witness", txs(u.witness));
    r.add("external_gain", std::to_string(g - u.value));
    r.add("states_explored", std::to_string(u.states_explored));
    return 0;
}

int cmd_mev(Command& cmd, const Options&, Report& r) {
    r = cmd.header();
    const Scenario& sc = cmd.scenario();
    ActorSet a = cmd.actors();
    Bounds b = cmd.bounds_for(a);
    MevReport m = mev(a, sc.start, sc.contract, sc.mempool, b, sc.prices, cmd.search());
    r.add("actors", to_string(a));
    r.add("bounds", bounds_text(b));
    r.add("mempool", txs(sc.mempool));
    r.add("value", std::to_string(m.value));
    r.add("gain_with_mempool", std::to_string(m.with_mempool.value));
    r.add("unrealized_gain", std::to_string(m.unrealized.value));
    r.add("witness", txs(m.witness));
    r.add("states_explored", std::to_string(m.states_explored));
    return 0;
}

int cmd_mevfree(Command& cmd, const Options&, Report& r) {
    r = cmd.header();
    const Scenario& sc = cmd.scenario();
    Bounds b = cmd.bounds();
    Verdict v = mev_freedom_check(sc.start, sc.contract, sc.mempool, b, sc.prices, cmd.search());
    r.add("verdict", v.attack() ? "AttackFound" : "NoAttackWithinBounds");
    r.add("cluster", to_string(v.cluster));
    std::vector<std::string> reps;
    for (const auto& a : v.representatives)
        reps.push_back(a.name);
    r.add("representatives", reps);
    r.add("redistributed", to_string(v.redistributed));
    r.add("bounds", bounds_text(v.bounds));
    r.add("value", std::to_string(v.value));
    r.add("witness", txs(v.witness));
    r.add("states_explored", std::to_string(v.states_explored));
    return v.attack() ? 1 : 0;
}

int cmd_cluster(Command& cmd, const Options&, Report& r) {
    r = cmd.header();
    const Scenario& sc = cmd.scenario();
    ActorSet cl = cluster_of(sc.start, sc.mempool, sc.contract);
    r.add("cluster", to_string(cl));
    r.add("excluded", actor_list(cl.listed()));
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"TxScript interpreter and MEV analyser", "txmev"};
    app.require_subcommand(1);
    Options o;

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(Command&, const Options&, Report&);
    };
    const Sub subs[] = {
        {"parse", "Parse a contract, scenario or transaction", cmd_parse},
        {"run", "Execute a transaction sequence", cmd_run},
        {"deduce", "Decide whether actors can craft a transaction", cmd_deduce},
        {"auth", "Authorisers of a transaction or of the mempool", cmd_auth},
        {"gain", "Gain, unrealized gain and external gain", cmd_gain},
        {"mev", "Maximal extractable value of an actor set", cmd_mev},
        {"mev-free", "Bounded MEV-freedom check", cmd_mevfree},
        {"cluster", "Cluster of interchangeable actors", cmd_cluster},
    };
    std::vector<std::pair<CLI::App*, const Sub*>> apps;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("scenario", o.scenario, "Scenario file or corpus name");
        sub->add_option("--tx", o.tx, "Transaction text");
        sub->add_option("--actors", o.actors, "Actor set: A,B or ~A,B for all but A and B");
        sub->add_option("--seq", o.seq, "File with a transaction sequence");
        sub->add_option("--max-depth", o.max_depth, "Search depth")->check(CLI::NonNegativeNumber);
        sub->add_option("--max-amount", o.max_amount, "Largest crafted amount")->check(CLI::NonNegativeNumber);
        sub->add_option("--reps", o.reps, "Cluster representatives")->check(CLI::NonNegativeNumber);
        sub->add_option("--workers", o.workers, "Search threads")->check(CLI::PositiveNumber);
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "machine"}));
        sub->add_flag("--timing", o.timing, "Report elapsed time");
        apps.emplace_back(sub, &s);
    }

    std::vector<const char*> argv{"txmev"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "txmev: " << e.what() << '\n';
        return 2;
    }

    const Sub* chosen = nullptr;
    for (const auto& [sub, s] : apps)
        if (sub->parsed())
            chosen = s;

    try {
        auto t0 = std::chrono::steady_clock::now();
        Command cmd(chosen->name, o);
        Report r;
        int code = chosen->fn(cmd, o, r);
        if (o.timing) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
            r.add("elapsed_ms", std::to_string(ms.count()));
        }
        out << (o.format == "machine" ? r.machine() : r.text());
        return code;
    } catch (const ParseError& e) {
        err << "txmev: parse error at " << e.what() << '\n';
    } catch (const ScenarioError& e) {
        err << "txmev: scenario error: " << e.what() << '\n';
    } catch (const UsageError& e) {
        err << "txmev: " << e.what() << '\n';
    } catch (const UnpricedToken& e) {
        err << "txmev: " << e.what() << '\n';
    } catch (const RedistributionError& e) {
        err << "txmev: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "txmev: " << e.what() << '\n';
    }
    return 2;
}

} // namespace txmev
