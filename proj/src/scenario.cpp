#include "txmev/scenario.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace txmev {

ScenarioError::ScenarioError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw ScenarioError(0, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

// Whitespace only, so `secrets=0,1` stays one item.
std::vector<std::string> words_keep_commas(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    for (std::string w; ss >> w;)
        out.push_back(w);
    return out;
}

bool is_upper_name(const std::string& s) {
    if (s.empty() || !(s[0] >= 'A' && s[0] <= 'Z'))
        return false;
    for (char ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
            return false;
    return true;
}

Amount parse_amount(const std::string& s, std::size_t line, const std::string& what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ScenarioError(line, "expected a natural for " + what + ", got '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw ScenarioError(line, what + " out of range");
    }
}

struct Block {
    std::string kind; // setup or mempool
    std::string text;
    std::size_t line;
};

bool shape_matches(const ContractDef& c, const Transaction& tx) {
    for (const auto& cl : c.clauses) {
        if (cl.proc_name != tx.proc_name || cl.params.size() != tx.args.size())
            continue;
        bool ok = true;
        for (std::size_t i = 0; i < cl.params.size() && ok; ++i)
            ok = std::holds_alternative<TokenInputParam>(cl.params[i]) ==
                 std::holds_alternative<TokenInputArg>(tx.args[i]);
        if (ok)
            return true;
    }
    return false;
}

} // namespace

Scenario load_scenario(const std::filesystem::path& path) {
    std::string text = read_file(path);
    Scenario sc = load_scenario_text(text, path.parent_path());
    sc.path = path;
    return sc;
}

Scenario load_scenario_text(const std::string& text, const std::filesystem::path& base) {
    Scenario sc;
    std::vector<Block> blocks;
    std::vector<std::pair<std::string, std::size_t>> price_items;
    std::vector<std::tuple<std::string, std::string, std::size_t>> actor_items;
    bool have_contract = false;

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty())
            continue;
        std::size_t sp = line.find_first_of(" \t[{");
        std::string key = line.substr(0, sp);
        std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));

        if (key == "contract") {
            if (rest.empty())
                throw ScenarioError(lineno, "contract needs a path");
            sc.contract_path = base / rest;
            have_contract = true;
        } else if (key == "tokens") {
            for (const auto& w : words(rest)) {
                if (!is_upper_name(w))
                    throw ScenarioError(lineno, "bad token name '" + w + "'");
                sc.tokens.insert(Token{w});
            }
        } else if (key == "prices") {
            for (const auto& w : words(rest))
                price_items.emplace_back(w, lineno);
        } else if (key == "actor") {
            std::size_t open = rest.find('{');
            std::size_t close = rest.rfind('}');
            if (open == std::string::npos || close == std::string::npos || close < open)
                throw ScenarioError(lineno, "expected actor NAME { TOKEN: n ... }");
            actor_items.emplace_back(trim(rest.substr(0, open)), rest.substr(open + 1, close - open - 1), lineno);
        } else if (key == "pool") {
            for (const auto& w : words(rest)) {
                if (!is_upper_name(w))
                    throw ScenarioError(lineno, "bad actor name '" + w + "'");
                sc.pool.push_back(Actor{w});
            }
        } else if (key == "setup" || key == "mempool") {
            std::size_t start = lineno;
            std::string body = rest;
            while (body.find(']') == std::string::npos) {
                if (!std::getline(in, raw))
                    throw ScenarioError(start, "unterminated " + key + " list");
                ++lineno;
                body += '\n' + raw.substr(0, raw.find('#'));
            }
            body = trim(body);
            if (body.empty() || body.front() != '[' || body.back() != ']')
                throw ScenarioError(start, key + " expects a bracketed transaction list");
            blocks.push_back({key, body.substr(1, body.size() - 2), start});
        } else if (key == "bounds") {
            for (const auto& w : words_keep_commas(rest)) {
                std::size_t eq = w.find('=');
                if (eq == std::string::npos)
                    throw ScenarioError(lineno, "expected key=value in bounds, got '" + w + "'");
                std::string k = w.substr(0, eq), v = w.substr(eq + 1);
                if (k == "depth")
                    sc.bounds.max_depth = static_cast<unsigned>(parse_amount(v, lineno, "depth"));
                else if (k == "amount")
                    sc.bounds.max_amount = parse_amount(v, lineno, "amount");
                else if (k == "nonces")
                    sc.bounds.nonces_per_actor = static_cast<unsigned>(parse_amount(v, lineno, "nonces"));
                else if (k == "reps")
                    sc.bounds.representatives = static_cast<unsigned>(parse_amount(v, lineno, "reps"));
                else if (k == "secrets") {
                    sc.bounds.secret_values.clear();
                    for (const auto& s : words(v))
                        sc.bounds.secret_values.push_back(parse_amount(s, lineno, "secret"));
                } else
                    throw ScenarioError(lineno, "unknown bound '" + k + "'");
            }
        } else {
            throw ScenarioError(lineno, "unknown directive '" + key + "'");
        }
    }

    if (!have_contract)
        throw ScenarioError(0, "scenario has no contract directive");
    sc.contract_text = read_file(sc.contract_path);
    try {
        sc.contract = load_contract(sc.contract_text, sc.tokens);
    } catch (const ParseError& e) {
        throw ScenarioError(0, sc.contract_path.filename().string() + ":" + e.what());
    }
    sc.diagnostics = check_wellformed(sc.contract);
    sc.tokens.insert(sc.contract.declared_tokens.begin(), sc.contract.declared_tokens.end());

    for (const auto& [item, line] : price_items) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw ScenarioError(line, "expected TOKEN=price, got '" + item + "'");
        Token t{item.substr(0, eq)};
        if (!sc.tokens.count(t))
            throw ScenarioError(line, "price for undeclared token " + t.name);
        sc.prices[t] = parse_amount(item.substr(eq + 1), line, "price");
    }
    for (const auto& t : sc.tokens)
        if (!sc.prices.count(t))
            throw ScenarioError(0, "token " + t.name + " has no price");

    for (const auto& [name, body, line] : actor_items) {
        if (!is_upper_name(name))
            throw ScenarioError(line, "bad actor name '" + name + "'");
        Wallet w;
        // Entries look like `T: 3`, separated by commas or spaces.
        std::vector<std::string> parts = words(body);
        std::vector<std::string> flat;
        for (auto& p : parts) {
            std::size_t colon = p.find(':');
            if (colon == std::string::npos) {
                flat.push_back(p);
                continue;
            }
            if (colon > 0)
                flat.push_back(p.substr(0, colon));
            flat.push_back(":");
            if (colon + 1 < p.size())
                flat.push_back(p.substr(colon + 1));
        }
        for (std::size_t i = 0; i < flat.size(); i += 3) {
            if (i + 2 >= flat.size() || flat[i + 1] != ":")
                throw ScenarioError(line, "expected TOKEN: amount in wallet of " + name);
            Token t{flat[i]};
            if (!sc.tokens.count(t))
                throw ScenarioError(line, "undeclared token " + t.name + " in wallet of " + name);
            w[t] += parse_amount(flat[i + 2], line, "wallet amount");
        }
        Wallet merged = sc.initial_wallets.wallet(Actor{name});
        for (const auto& [t, n] : w)
            merged[t] += n;
        sc.initial_wallets.set_wallet(Actor{name}, merged);
    }

    sc.initial.wallets = sc.initial_wallets;
    for (const auto& b : blocks) {
        std::vector<Transaction> txs;
        try {
            txs = parse_transaction_list(b.text, sc.tokens, sc.nonces);
        } catch (const ParseError& e) {
            throw ScenarioError(b.line + e.line() - 1, e.detail());
        }
        for (const auto& tx : txs) {
            for (const auto& a : tx.args)
                if (auto* ti = std::get_if<TokenInputArg>(&a); ti && !sc.tokens.count(ti->token))
                    throw ScenarioError(b.line, "undeclared token " + ti->token.name + " in " + to_string(tx));
            if (!shape_matches(sc.contract, tx))
                throw ScenarioError(b.line, "no procedure of " + sc.contract.name + " accepts " + to_string(tx));
        }
        auto& dst = b.kind == "setup" ? sc.setup : sc.mempool;
        dst.insert(dst.end(), txs.begin(), txs.end());
    }

    sc.start = sc.initial;
    for (const auto& tx : sc.setup) {
        FireResult r = fire(sc.start, sc.contract, tx);
        if (!r.valid)
            throw ScenarioError(0, "setup transaction " + to_string(tx) + " is invalid (" + to_string(r.stage) +
                                       ": " + r.reason + ")");
        sc.start = std::move(r.state);
    }
    sc.bounds.candidate_actors = sc.pool;
    sc.digest = fnv1a_hex(text + '\0' + sc.contract_text);
    return sc;
}

} // namespace txmev
