#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace logquest {

/// Interned name. Equality and hashing are pointer operations; ordering
/// follows the interning sequence, which is stable within a process.
class Symbol {
public:
    Symbol() = default;

    static Symbol intern(std::string_view name);

    const std::string& name() const;
    std::uint32_t id() const;
    bool valid() const { return entry_ != nullptr; }

    friend bool operator==(Symbol a, Symbol b) { return a.entry_ == b.entry_; }
    friend bool operator!=(Symbol a, Symbol b) { return a.entry_ != b.entry_; }
    friend bool operator<(Symbol a, Symbol b) { return a.id() < b.id(); }

    std::size_t hash() const { return std::hash<const void*>{}(entry_); }

    struct Entry;

private:
    explicit Symbol(const Entry* entry) : entry_(entry) {}
    const Entry* entry_ = nullptr;
};

namespace reserved {
Symbol dom();
Symbol answer();
Symbol equality();
}  // namespace reserved

}  // namespace logquest

template <>
struct std::hash<logquest::Symbol> {
    std::size_t operator()(logquest::Symbol s) const noexcept { return s.hash(); }
};
