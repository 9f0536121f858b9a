#include "logquest/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace logquest {

struct Symbol::Entry {
    std::string name;
    std::uint32_t id;
};

namespace {

struct SymbolTable {
    std::shared_mutex mutex;
    std::deque<Symbol::Entry> entries;  // stable addresses
    std::unordered_map<std::string_view, const Symbol::Entry*> lookup;
};

SymbolTable& table() {
    static SymbolTable instance;
    return instance;
}

const std::string& empty_name() {
    static const std::string empty;
    return empty;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
    auto& t = table();
    {
        std::shared_lock lock(t.mutex);
        if (auto it = t.lookup.find(name); it != t.lookup.end()) return Symbol(it->second);
    }
    std::unique_lock lock(t.mutex);
    if (auto it = t.lookup.find(name); it != t.lookup.end()) return Symbol(it->second);
    auto& entry = t.entries.emplace_back(Entry{std::string(name), static_cast<std::uint32_t>(t.entries.size())});
    t.lookup.emplace(entry.name, &entry);
    return Symbol(&entry);
}

const std::string& Symbol::name() const { return entry_ ? entry_->name : empty_name(); }

std::uint32_t Symbol::id() const { return entry_ ? entry_->id : UINT32_MAX; }

namespace reserved {
Symbol dom() {
    static const Symbol s = Symbol::intern("dom");
    return s;
}
Symbol answer() {
    static const Symbol s = Symbol::intern("__ans");
    return s;
}
Symbol equality() {
    static const Symbol s = Symbol::intern("=");
    return s;
}
}  // namespace reserved

}  // namespace logquest
