#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "logquest/clause.hpp"

namespace logquest {

struct SignatureEntry {
    enum class Kind { Predicate, Function, Constant };

    Symbol symbol;
    std::size_t arity = 0;
    Kind kind = Kind::Predicate;

    friend bool operator==(const SignatureEntry&, const SignatureEntry&) = default;
};

/// Symbols of a clause set, sorted by (kind, name, arity) without duplicates.
class Signature {
public:
    void add_atom(const Atom& atom);
    void add_clause(const Clause& clause);

    bool uses_equality() const;
    const std::vector<SignatureEntry>& entries() const { return entries_; }
    std::vector<SignatureEntry> of_kind(SignatureEntry::Kind kind) const;

private:
    void add_term(const Term& term);
    void insert(SignatureEntry entry);

    std::vector<SignatureEntry> entries_;
};

Signature signature_of(std::span<const Clause> clauses);

/// Appends `dom(V)` to the body for every head variable missing from it.
/// The result always holds exactly one clause.
std::vector<Clause> range_restrict(const Clause& clause);

/// `dom(k).` once for every constant in `clauses` and `extra`, in name order.
std::vector<Clause> dom_facts(std::span<const Clause> clauses, std::span<const Atom> extra = {});

/// Range-restricts every clause and appends the dom facts of the whole set.
std::vector<Clause> range_restrict_all(std::span<const Clause> clauses, std::span<const Atom> extra = {});

/// Reflexivity over dom, symmetry, transitivity, and one substitution axiom
/// per argument position of every predicate and function symbol. Empty when
/// the signature does not use `=`.
std::vector<Clause> congruence_axioms(const Signature& signature);

}  // namespace logquest
