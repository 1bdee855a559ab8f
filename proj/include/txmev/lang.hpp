#pragma once

#include "txmev/ast.hpp"

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace txmev {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    /// The message without the position prefix.
    const std::string& detail() const { return detail_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

enum class ParseMode {
    Strict,  ///< reject contracts that fail the static checks
    Lenient, ///< return the AST as written; run check_wellformed separately
};

/// Parse a contract. Uppercase identifiers resolve to tokens when declared
/// (through a leading `tokens T0 T1;` pragma or `known_tokens`), otherwise to
/// actors. Clause parameters may still hold constants; see desugar_constants.
ContractDef parse_contract(std::string_view text, const std::set<Token>& known_tokens = {},
                           ParseMode mode = ParseMode::Strict);

/// Replace constants in parameter positions by fresh variables and prepend
/// the matching equalities to the clause precondition. Idempotent.
ContractDef desugar_constants(const ContractDef& contract);

/// parse_contract followed by desugar_constants.
ContractDef load_contract(std::string_view text, const std::set<Token>& known_tokens = {});

/// Supplies tx nonces for literals written without `@n`. Explicit nonces
/// advance the counter past themselves, so auto-assigned nonces never repeat
/// one already seen in the same context.
class NonceCounter {
public:
    explicit NonceCounter(std::uint64_t next = 0) : next_(next) {}

    std::uint64_t take() { return next_++; }
    void observe(std::uint64_t explicit_nonce) {
        if (explicit_nonce >= next_)
            next_ = explicit_nonce + 1;
    }
    std::uint64_t peek() const { return next_; }

private:
    std::uint64_t next_;
};

/// Parse `f(args)@n`. Arguments: naturals, uppercase constants, `A?n:T`,
/// `cmt(A.i, v)`, `rvl(A.i, v)`.
Transaction parse_transaction(std::string_view text, const std::set<Token>& known_tokens, NonceCounter& counter);

/// Parse a comma or newline separated list of transactions, e.g. the body of
/// a bracketed scenario list.
std::vector<Transaction> parse_transaction_list(std::string_view text, const std::set<Token>& known_tokens,
                                                NonceCounter& counter);

struct Diagnostic {
    enum class Severity { Warning, Error };

    Severity severity;
    std::string message;
    /// Clause indices the diagnostic refers to.
    std::vector<std::size_t> clauses;

    bool is_error() const { return severity == Severity::Error; }
};

/// Static checks. Errors: repeated formal parameter, assignment or map update
/// of a formal parameter, a state variable used both as base and map variable.
/// Warnings: two clauses of one procedure whose preconditions are not
/// syntactically disjoint.
std::vector<Diagnostic> check_wellformed(const ContractDef& contract);

// Pretty printing. The output parses back to the same AST.
std::string to_string(const Expr& e);
std::string to_string(const Stmt& s);
std::string to_string(const Param& p);
std::string to_string(const Clause& c);
std::string to_string(const ContractDef& c);
std::string to_string(const TxArg& a);
std::string to_string(const Transaction& tx, bool with_nonce = true);

/// Formal parameter variable names, in order (three per token input).
std::vector<std::string> param_vars(const Clause& c);

} // namespace txmev
