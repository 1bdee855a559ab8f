#pragma once

#include <string>
#include <variant>
#include <vector>

namespace txmev {

/// Ordered key/value document rendered in two equivalent forms.
class Report {
public:
    using Item = std::variant<std::string, std::vector<std::string>>;

    void add(std::string key, std::string value);
    void add(std::string key, std::vector<std::string> items);

    const std::string* find(const std::string& key) const;
    const std::vector<std::pair<std::string, Item>>& fields() const { return fields_; }

    /// `key: value` lines; list items as `  - item`.
    std::string machine() const;
    /// Aligned two-column table.
    std::string text() const;

private:
    std::vector<std::pair<std::string, Item>> fields_;
};

} // namespace txmev
