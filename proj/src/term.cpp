#include "logquest/term.hpp"

#include <algorithm>

namespace logquest {

namespace {

inline std::size_t mix(std::size_t seed, std::size_t value) {
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::strong_ordering compare_names(Symbol a, Symbol b) {
    if (a == b) return std::strong_ordering::equal;
    int c = a.name().compare(b.name());
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

template <typename Range>
std::strong_ordering compare_args(const Range& a, const Range& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (auto c = compare(a[i], b[i]); c != 0) return c;
    }
    return std::strong_ordering::equal;
}

}  // namespace

Term Term::compound(Symbol functor, std::vector<Term> args) {
    if (args.empty()) return constant(functor);
    return Term(Kind::Compound, functor, std::move(args));
}

bool Term::is_ground() const {
    switch (kind_) {
        case Kind::Variable: return false;
        case Kind::Constant: return true;
        case Kind::Compound:
            return std::all_of(args_.begin(), args_.end(), [](const Term& t) { return t.is_ground(); });
    }
    return true;
}

bool Term::contains_variable(Symbol var) const {
    if (kind_ == Kind::Variable) return symbol_ == var;
    return std::any_of(args_.begin(), args_.end(), [var](const Term& t) { return t.contains_variable(var); });
}

void Term::collect_variables(std::vector<Symbol>& out) const {
    if (kind_ == Kind::Variable) {
        if (std::find(out.begin(), out.end(), symbol_) == out.end()) out.push_back(symbol_);
        return;
    }
    for (const auto& a : args_) a.collect_variables(out);
}

std::size_t Term::hash() const {
    std::size_t h = mix(static_cast<std::size_t>(kind_), symbol_.hash());
    for (const auto& a : args_) h = mix(h, a.hash());
    return h;
}

bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.symbol_ == b.symbol_ && a.args_ == b.args_;
}

std::strong_ordering compare(const Term& a, const Term& b) {
    if (a.kind() != b.kind()) return a.kind() <=> b.kind();
    if (auto c = compare_names(a.symbol(), b.symbol()); c != 0) return c;
    return compare_args(a.args(), b.args());
}

bool Atom::is_ground() const {
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

void Atom::collect_variables(std::vector<Symbol>& out) const {
    for (const auto& a : args) a.collect_variables(out);
}

std::size_t Atom::hash() const {
    std::size_t h = predicate.hash();
    for (const auto& a : args) h = mix(h, a.hash());
    return h;
}

std::strong_ordering compare(const Atom& a, const Atom& b) {
    if (auto c = compare_names(a.predicate, b.predicate); c != 0) return c;
    return compare_args(a.args, b.args);
}

std::string to_string(const Term& t) {
    if (!t.is_compound()) return t.symbol().name();
    std::string out = t.symbol().name();
    out += '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ',';
        out += to_string(t.args()[i]);
    }
    out += ')';
    return out;
}

std::string to_string(const Atom& a) {
    std::string out = a.predicate.name();
    if (a.args.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ',';
        out += to_string(a.args[i]);
    }
    out += ')';
    return out;
}

std::vector<Symbol> variables_of(const std::vector<Atom>& atoms) {
    std::vector<Symbol> out;
    for (const auto& a : atoms) a.collect_variables(out);
    return out;
}

}  // namespace logquest
