#include "txmev/txmev.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace txmev;

namespace {

std::set<Token> token_set(const std::vector<std::string>& names) {
    std::set<Token> out;
    for (const auto& n : names)
        out.insert(Token{n});
    return out;
}

std::vector<std::string> shown(const std::vector<Transaction>& txs) {
    std::vector<std::string> out;
    for (const auto& t : txs)
        out.push_back(to_string(t));
    return out;
}

std::vector<std::string> shown(const std::set<Actor>& actors) {
    std::vector<std::string> out;
    for (const auto& a : actors)
        out.push_back(a.name);
    return out;
}

std::vector<Transaction> parse_list(const std::vector<std::string>& texts, const std::set<Token>& tokens,
                                    NonceCounter& counter) {
    std::vector<Transaction> out;
    for (const auto& t : texts)
        out.push_back(parse_transaction(t, tokens, counter));
    return out;
}

/// Scenario bounds with optional overrides, extended to the actors analysed.
Bounds bounds_for(const Scenario& sc, const ActorSet& actors, std::optional<unsigned> depth,
                  std::optional<Amount> amount, std::optional<unsigned> reps) {
    Bounds b = sc.bounds;
    if (depth)
        b.max_depth = *depth;
    if (amount)
        b.max_amount = *amount;
    if (reps)
        b.representatives = *reps;
    if (actors.is_finite())
        for (const auto& a : actors.listed())
            if (std::find(b.candidate_actors.begin(), b.candidate_actors.end(), a) == b.candidate_actors.end())
                b.candidate_actors.push_back(a);
    return b;
}

ActorSet actors_or_pool(const Scenario& sc, const std::optional<std::string>& actors) {
    if (actors)
        return parse_actor_set(*actors);
    return ActorSet::finite(std::set<Actor>(sc.pool.begin(), sc.pool.end()));
}

py::dict gain_dict(const GainReport& r) {
    py::dict d;
    d["value"] = r.value;
    d["witness"] = shown(r.witness);
    d["states_explored"] = r.states_explored;
    return d;
}

} // namespace

PYBIND11_MODULE(_txmev, m) {
    m.doc() = "TxScript interpreter and MEV analysis";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly("path", [](const Scenario& s) { return s.path.string(); })
        .def_property_readonly("digest", [](const Scenario& s) { return s.digest; })
        .def_property_readonly("tokens",
                               [](const Scenario& s) {
                                   std::vector<std::string> out;
                                   for (const auto& t : s.tokens)
                                       out.push_back(t.name);
                                   return out;
                               })
        .def_property_readonly("pool",
                               [](const Scenario& s) { return shown(std::set<Actor>(s.pool.begin(), s.pool.end())); })
        .def_property_readonly("mempool", [](const Scenario& s) { return shown(s.mempool); })
        .def_property_readonly("setup", [](const Scenario& s) { return shown(s.setup); })
        .def_property_readonly("start", [](const Scenario& s) { return to_string(s.start); })
        .def_property_readonly("contract", [](const Scenario& s) { return to_string(s.contract); })
        .def("__repr__", [](const Scenario& s) { return "<Scenario " + s.path.filename().string() + ">"; });

    m.def("load_scenario", [](const std::string& path) { return load_scenario(path); }, py::arg("path"));

    m.def(
        "parse_contract", [](const std::string& text) { return to_string(load_contract(text)); }, py::arg("text"),
        "Parse, check and pretty-print a contract.");

    m.def(
        "parse_transaction",
        [](const std::string& text, const std::vector<std::string>& tokens) {
            NonceCounter n(0);
            return to_string(parse_transaction(text, token_set(tokens), n));
        },
        py::arg("text"), py::arg("tokens") = std::vector<std::string>{"T"});

    m.def(
        "can_deduce",
        [](const std::string& actors, const std::vector<std::string>& mempool, const std::string& tx,
           const std::vector<std::string>& tokens) {
            auto toks = token_set(tokens);
            NonceCounter n(0);
            auto pool = parse_list(mempool, toks, n);
            return can_deduce(parse_actor_set(actors), pool, parse_transaction(tx, toks, n));
        },
        py::arg("actors"), py::arg("mempool"), py::arg("tx"), py::arg("tokens") = std::vector<std::string>{"T"});

    m.def(
        "authorisers",
        [](const std::string& tx, const std::vector<std::string>& tokens) {
            NonceCounter n(0);
            return shown(authorisers(parse_transaction(tx, token_set(tokens), n)));
        },
        py::arg("tx"), py::arg("tokens") = std::vector<std::string>{"T"});

    m.def(
        "run",
        [](const Scenario& sc, const std::vector<std::string>& seq) {
            NonceCounter n = sc.nonces;
            auto [end, trace] = exec_sequence(sc.start, sc.contract, parse_list(seq, sc.tokens, n));
            py::dict d;
            d["applied"] = trace.applied_count();
            d["final"] = to_string(end);
            return d;
        },
        py::arg("scenario"), py::arg("seq"));

    m.def(
        "gain",
        [](const Scenario& sc, const std::string& actors, const std::vector<std::string>& seq) {
            NonceCounter n = sc.nonces;
            return gain(parse_actor_set(actors), sc.start, sc.contract, parse_list(seq, sc.tokens, n), sc.prices);
        },
        py::arg("scenario"), py::arg("actors"), py::arg("seq"));

    m.def(
        "unrealized_gain",
        [](const Scenario& sc, std::optional<std::string> actors, std::optional<unsigned> max_depth,
           std::optional<Amount> max_amount, unsigned workers) {
            ActorSet a = actors_or_pool(sc, actors);
            Bounds b = bounds_for(sc, a, max_depth, max_amount, std::nullopt);
            return gain_dict(unrealized_gain(a, sc.start, sc.contract, b, sc.prices, {workers}, sc.mempool));
        },
        py::arg("scenario"), py::arg("actors") = py::none(), py::arg("max_depth") = py::none(),
        py::arg("max_amount") = py::none(), py::arg("workers") = 1u);

    m.def(
        "mev",
        [](const Scenario& sc, std::optional<std::string> actors, std::optional<unsigned> max_depth,
           std::optional<Amount> max_amount, unsigned workers) {
            ActorSet a = actors_or_pool(sc, actors);
            Bounds b = bounds_for(sc, a, max_depth, max_amount, std::nullopt);
            MevReport r;
            {
                py::gil_scoped_release nogil;
                r = mev(a, sc.start, sc.contract, sc.mempool, b, sc.prices, {workers});
            }
            py::dict d;
            d["value"] = r.value;
            d["witness"] = shown(r.witness);
            d["gain_with_mempool"] = r.with_mempool.value;
            d["unrealized_gain"] = r.unrealized.value;
            d["states_explored"] = r.states_explored;
            return d;
        },
        py::arg("scenario"), py::arg("actors") = py::none(), py::arg("max_depth") = py::none(),
        py::arg("max_amount") = py::none(), py::arg("workers") = 1u);

    m.def(
        "cluster_of",
        [](const Scenario& sc) { return to_string(cluster_of(sc.start, sc.mempool, sc.contract)); },
        py::arg("scenario"));

    m.def(
        "mev_freedom_check",
        [](const Scenario& sc, std::optional<unsigned> max_depth, std::optional<Amount> max_amount,
           std::optional<unsigned> reps, unsigned workers) {
            Bounds b = bounds_for(sc, ActorSet::empty(), max_depth, max_amount, reps);
            Verdict v;
            {
                py::gil_scoped_release nogil;
                v = mev_freedom_check(sc.start, sc.contract, sc.mempool, b, sc.prices, {workers});
            }
            py::dict d;
            d["verdict"] = v.attack() ? "AttackFound" : "NoAttackWithinBounds";
            d["value"] = v.value;
            d["witness"] = shown(v.witness);
            d["cluster"] = to_string(v.cluster);
            std::vector<std::string> reps_out;
            for (const auto& a : v.representatives)
                reps_out.push_back(a.name);
            d["representatives"] = reps_out;
            d["redistributed"] = to_string(v.redistributed);
            d["states_explored"] = v.states_explored;
            return d;
        },
        py::arg("scenario"), py::arg("max_depth") = py::none(), py::arg("max_amount") = py::none(),
        py::arg("reps") = py::none(), py::arg("workers") = 1u);

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the txmev command line; returns (exit code, stdout, stderr).");
}
