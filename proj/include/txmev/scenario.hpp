#pragma once

#include "txmev/economics.hpp"
#include "txmev/lang.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace txmev {

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::size_t line, const std::string& message);

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct Scenario {
    std::filesystem::path path;
    std::filesystem::path contract_path;
    std::string contract_text;
    ContractDef contract;
    std::vector<Diagnostic> diagnostics;

    std::set<Token> tokens;
    PriceTable prices;
    WalletState initial_wallets;
    std::vector<Transaction> setup;
    std::vector<Transaction> mempool;
    std::vector<Actor> pool;
    Bounds bounds;

    /// Initial state with the wallets above.
    BlockchainState initial;
    /// State after the setup sequence; the analysis starts here.
    BlockchainState start;
    /// Continues the auto nonces of the scenario file.
    NonceCounter nonces;
    /// FNV-1a over the scenario and contract text.
    std::string digest;
};

/// Load a scenario file. Throws ScenarioError or ParseError.
Scenario load_scenario(const std::filesystem::path& path);

/// Same, from text; `base` resolves the contract path.
Scenario load_scenario_text(const std::string& text, const std::filesystem::path& base);

std::string fnv1a_hex(const std::string& data);

} // namespace txmev
