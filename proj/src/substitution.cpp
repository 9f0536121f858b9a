#include "logquest/substitution.hpp"

#include <algorithm>
#include <stdexcept>

#include "logquest/clause.hpp"

namespace logquest {

void Substitution::bind(Symbol var, const Term& term) {
    Term resolved = apply(*this, term);
    if (resolved.is_variable() && resolved.symbol() == var) return;
    if (resolved.contains_variable(var)) {
        throw std::invalid_argument("occurs check: " + var.name() + " in " + to_string(resolved));
    }
    if (binds(var)) throw std::invalid_argument("variable already bound: " + var.name());
    Substitution single;
    single.bindings_.emplace_back(var, resolved);
    for (auto& [v, t] : bindings_) t = apply(single, t);
    bindings_.emplace_back(var, std::move(resolved));
}

const Term* Substitution::lookup(Symbol var) const {
    for (const auto& [v, t] : bindings_) {
        if (v == var) return &t;
    }
    return nullptr;
}

Substitution Substitution::restricted_to(const std::vector<Symbol>& vars) const {
    Substitution out;
    for (Symbol v : vars) {
        if (const Term* t = lookup(v)) out.bindings_.emplace_back(v, *t);
    }
    return out;
}

bool operator==(const Substitution& a, const Substitution& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [v, t] : a.bindings_) {
        const Term* other = b.lookup(v);
        if (!other || *other != t) return false;
    }
    return true;
}

Term apply(const Substitution& s, const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Variable: {
            const Term* bound = s.lookup(t.symbol());
            return bound ? *bound : t;
        }
        case Term::Kind::Constant: return t;
        case Term::Kind::Compound: {
            std::vector<Term> args;
            args.reserve(t.args().size());
            for (const auto& a : t.args()) args.push_back(apply(s, a));
            return Term::compound(t.symbol(), std::move(args));
        }
    }
    return t;
}

Atom apply(const Substitution& s, const Atom& a) {
    Atom out;
    out.predicate = a.predicate;
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(apply(s, t));
    return out;
}

std::vector<Atom> apply(const Substitution& s, const std::vector<Atom>& atoms) {
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) out.push_back(apply(s, a));
    return out;
}

Clause apply(const Substitution& s, const Clause& c) {
    return Clause{apply(s, c.head), apply(s, c.body), c.origin};
}

Query apply(const Substitution& s, const Query& q) {
    Query out;
    out.subgoals = apply(s, q.subgoals);
    for (Symbol v : q.answer_vars) {
        std::vector<Symbol> vars;
        apply(s, Term::variable(v)).collect_variables(vars);
        for (Symbol w : vars) {
            if (std::find(out.answer_vars.begin(), out.answer_vars.end(), w) == out.answer_vars.end()) {
                out.answer_vars.push_back(w);
            }
        }
    }
    return out;
}

Substitution compose(const Substitution& first, const Substitution& second) {
    Substitution out;
    std::vector<Substitution::Binding> entries;
    for (const auto& [v, t] : first.bindings()) {
        Term image = apply(second, t);
        if (image.is_variable() && image.symbol() == v) continue;
        entries.emplace_back(v, std::move(image));
    }
    for (const auto& [v, t] : second.bindings()) {
        if (!first.binds(v)) entries.emplace_back(v, t);
    }
    // Rebuild through bind() so the result is checked and kept idempotent.
    for (auto& [v, t] : entries) out.bind(v, t);
    return out;
}

bool match_into(const Term& pattern, const Term& ground, Substitution& s) {
    switch (pattern.kind()) {
        case Term::Kind::Variable: {
            if (const Term* bound = s.lookup(pattern.symbol())) return *bound == ground;
            s.push_ground(pattern.symbol(), ground);
            return true;
        }
        case Term::Kind::Constant: return pattern == ground;
        case Term::Kind::Compound: {
            if (!ground.is_compound() || ground.symbol() != pattern.symbol() ||
                ground.args().size() != pattern.args().size()) {
                return false;
            }
            const std::size_t mark = s.size();
            for (std::size_t i = 0; i < pattern.args().size(); ++i) {
                if (!match_into(pattern.args()[i], ground.args()[i], s)) {
                    s.truncate(mark);
                    return false;
                }
            }
            return true;
        }
    }
    return false;
}

bool match_into(const Atom& pattern, const Atom& ground, Substitution& s) {
    if (pattern.predicate != ground.predicate || pattern.args.size() != ground.args.size()) return false;
    const std::size_t mark = s.size();
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        if (!match_into(pattern.args[i], ground.args[i], s)) {
            s.truncate(mark);
            return false;
        }
    }
    return true;
}

std::optional<Substitution> match(const Atom& pattern, const Atom& ground) {
    // Occurs check reduces to groundness of the target side.
    if (!ground.is_ground()) return std::nullopt;
    Substitution s;
    if (!match_into(pattern, ground, s)) return std::nullopt;
    return s;
}

std::optional<Substitution> match(const Term& pattern, const Term& ground) {
    if (!ground.is_ground()) return std::nullopt;
    Substitution s;
    if (!match_into(pattern, ground, s)) return std::nullopt;
    return s;
}

std::string to_string(const Substitution& s) {
    auto entries = s.bindings();
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first.name() < b.first.name(); });
    std::string out = "{";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) out += ", ";
        out += entries[i].first.name();
        out += " -> ";
        out += to_string(entries[i].second);
    }
    out += "}";
    return out;
}

}  // namespace logquest
