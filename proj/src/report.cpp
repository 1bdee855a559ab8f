#include "txmev/report.hpp"

#include <algorithm>
#include <sstream>

namespace txmev {

void Report::add(std::string key, std::string value) { fields_.emplace_back(std::move(key), std::move(value)); }

void Report::add(std::string key, std::vector<std::string> items) {
    fields_.emplace_back(std::move(key), std::move(items));
}

const std::string* Report::find(const std::string& key) const {
    for (const auto& [k, v] : fields_)
        if (k == key)
            return std::get_if<std::string>(&v);
    return nullptr;
}

std::string Report::machine() const {
    std::ostringstream os;
    for (const auto& [k, v] : fields_) {
        if (auto* s = std::get_if<std::string>(&v)) {
            os << k << ": " << *s << '\n';
            continue;
        }
        const auto& items = std::get<std::vector<std::string>>(v);
        if (items.empty()) {
            os << k << ": []\n";
            continue;
        }
        os << k << ":\n";
        for (const auto& it : items)
            os << "  - " << it << '\n';
    }
    return os.str();
}

std::string Report::text() const {
    std::size_t width = 0;
    for (const auto& [k, v] : fields_)
        width = std::max(width, k.size());
    std::ostringstream os;
    auto cell = [&](const std::string& k) { os << k << std::string(width - k.size() + 2, ' '); };
    for (const auto& [k, v] : fields_) {
        if (auto* s = std::get_if<std::string>(&v)) {
            cell(k);
            os << *s << '\n';
            continue;
        }
        const auto& items = std::get<std::vector<std::string>>(v);
        if (items.empty()) {
            cell(k);
            os << "[]\n";
            continue;
        }
        for (std::size_t i = 0; i < items.size(); ++i) {
            cell(i == 0 ? k : "");
            os << items[i] << '\n';
        }
    }
    return os.str();
}

} // namespace txmev
