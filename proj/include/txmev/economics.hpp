#pragma once

#include "txmev/knowledge.hpp"
#include "txmev/semantics.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace txmev {

using PriceTable = std::map<Token, Amount>;
using Gain = std::int64_t;

class UnpricedToken : public std::runtime_error {
public:
    explicit UnpricedToken(const Token& t);
};

Gain wealth(const Wallet& w, const PriceTable& prices);

/// Total wealth of the members of `actors`.
Gain wealth_of(const ActorSet& actors, const WalletState& w, const PriceTable& prices);

Gain gain(const ActorSet& actors, const BlockchainState& s, const ContractDef& c,
          const std::vector<Transaction>& seq, const PriceTable& prices);

struct GainReport {
    Gain value = 0;
    std::vector<Transaction> witness;
    std::uint64_t states_explored = 0;
};

struct SearchOptions {
    /// Root subtrees are shared out among this many threads. The report does
    /// not depend on it.
    unsigned workers = 1;
};

/// Best gain over sequences of at most `bounds.max_depth` transactions that
/// `kb.actors` can deduce from `kb.mempool`. Extra actor constants for the
/// domain may be supplied through `hint`.
GainReport max_gain(const BlockchainState& s, const ContractDef& c, const KnowledgeBase& kb, const Bounds& bounds,
                    const PriceTable& prices, const SearchOptions& opts = {},
                    const std::vector<Transaction>& hint = {});

/// max_gain from private knowledge only.
GainReport unrealized_gain(const ActorSet& actors, const BlockchainState& s, const ContractDef& c,
                           const Bounds& bounds, const PriceTable& prices, const SearchOptions& opts = {},
                           const std::vector<Transaction>& hint = {});

/// gain(seq) minus the unrealized gain.
Gain external_gain(const ActorSet& actors, const BlockchainState& s, const ContractDef& c,
                   const std::vector<Transaction>& seq, const Bounds& bounds, const PriceTable& prices,
                   const SearchOptions& opts = {});

} // namespace txmev
