#pragma once

#include "txmev/txmev.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testing {

inline std::filesystem::path corpus() { return TXMEV_TEST_CORPUS; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline txmev::ContractDef contract(const std::string& name) {
    return txmev::load_contract(slurp(corpus() / "contracts" / (name + ".tx")));
}

inline txmev::Scenario scenario(const std::string& name) { return txmev::load_scenario(corpus() / (name + ".scn")); }

inline txmev::Transaction tx(const std::string& text, const std::set<txmev::Token>& tokens = {{"T"}},
                             std::uint64_t nonce = 0) {
    txmev::NonceCounter n(nonce);
    return txmev::parse_transaction(text, tokens, n);
}

inline std::vector<txmev::Transaction> txs(const std::string& text, const std::set<txmev::Token>& tokens = {{"T"}},
                                           std::uint64_t first = 0) {
    txmev::NonceCounter n(first);
    return txmev::parse_transaction_list(text, tokens, n);
}

inline txmev::Actor actor(const char* n) { return txmev::Actor{n}; }
inline txmev::Token token(const char* n) { return txmev::Token{n}; }

inline txmev::ActorSet finite(std::initializer_list<const char*> names) {
    std::set<txmev::Actor> s;
    for (auto n : names)
        s.insert(txmev::Actor{n});
    return txmev::ActorSet::finite(s);
}

inline txmev::PriceTable unit_prices(std::initializer_list<const char*> tokens = {"T"}) {
    txmev::PriceTable p;
    for (auto t : tokens)
        p[txmev::Token{t}] = 1;
    return p;
}

} // namespace testing
