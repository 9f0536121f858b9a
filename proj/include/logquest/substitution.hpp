#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logquest/term.hpp"

namespace logquest {

struct Clause;
struct Query;

/// Finite map from variables to terms, kept idempotent: no bound variable
/// occurs in the range. Stored as a flat vector because clauses bind few
/// variables and the matcher backtracks by truncation.
class Substitution {
public:
    using Binding = std::pair<Symbol, Term>;

    Substitution() = default;

    /// Throws std::invalid_argument when `var` occurs in `term` (occurs check).
    void bind(Symbol var, const Term& term);

    const Term* lookup(Symbol var) const;
    bool binds(Symbol var) const { return lookup(var) != nullptr; }

    bool empty() const { return bindings_.empty(); }
    std::size_t size() const { return bindings_.size(); }
    const std::vector<Binding>& bindings() const { return bindings_; }

    /// Drops bindings past `n`; the matcher's undo operation.
    void truncate(std::size_t n) { bindings_.resize(n); }

    /// Appends without the idempotence bookkeeping; only for ground terms.
    void push_ground(Symbol var, Term term) { bindings_.emplace_back(var, std::move(term)); }

    /// Keeps only bindings for `vars`, in the order of `vars`.
    Substitution restricted_to(const std::vector<Symbol>& vars) const;

    friend bool operator==(const Substitution& a, const Substitution& b);

private:
    std::vector<Binding> bindings_;
};

Term apply(const Substitution& s, const Term& t);
Atom apply(const Substitution& s, const Atom& a);
std::vector<Atom> apply(const Substitution& s, const std::vector<Atom>& atoms);
Clause apply(const Substitution& s, const Clause& c);
Query apply(const Substitution& s, const Query& q);

/// The substitution equivalent to applying `first` then `second`.
Substitution compose(const Substitution& first, const Substitution& second);

/// One-sided unification: extends `s` so that s(pattern) == ground.
/// Leaves `s` unchanged on failure.
bool match_into(const Term& pattern, const Term& ground, Substitution& s);
bool match_into(const Atom& pattern, const Atom& ground, Substitution& s);

/// σ with σ(pattern) = ground, binding only variables of `pattern`.
/// Absent when no such σ exists or when `ground` is not ground.
std::optional<Substitution> match(const Atom& pattern, const Atom& ground);
std::optional<Substitution> match(const Term& pattern, const Term& ground);

std::string to_string(const Substitution& s);

}  // namespace logquest
