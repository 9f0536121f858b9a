#include "logquest/transform.hpp"

#include <algorithm>
#include <string>

namespace logquest {

namespace {

bool entry_less(const SignatureEntry& a, const SignatureEntry& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.symbol != b.symbol) return a.symbol.name() < b.symbol.name();
    return a.arity < b.arity;
}

bool is_reserved_predicate(Symbol s) { return s == reserved::dom() || s == reserved::answer(); }

}  // namespace

void Signature::insert(SignatureEntry entry) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), entry, entry_less);
    if (it != entries_.end() && *it == entry) return;
    entries_.insert(it, entry);
}

void Signature::add_term(const Term& term) {
    switch (term.kind()) {
        case Term::Kind::Variable: return;
        case Term::Kind::Constant: insert({term.symbol(), 0, SignatureEntry::Kind::Constant}); return;
        case Term::Kind::Compound:
            insert({term.symbol(), term.args().size(), SignatureEntry::Kind::Function});
            for (const auto& a : term.args()) add_term(a);
            return;
    }
}

void Signature::add_atom(const Atom& atom) {
    insert({atom.predicate, atom.arity(), SignatureEntry::Kind::Predicate});
    for (const auto& t : atom.args) add_term(t);
}

void Signature::add_clause(const Clause& clause) {
    for (const auto& a : clause.head) add_atom(a);
    for (const auto& a : clause.body) add_atom(a);
}

bool Signature::uses_equality() const {
    return std::any_of(entries_.begin(), entries_.end(), [](const SignatureEntry& e) {
        return e.kind == SignatureEntry::Kind::Predicate && e.symbol == reserved::equality() && e.arity == 2;
    });
}

std::vector<SignatureEntry> Signature::of_kind(SignatureEntry::Kind kind) const {
    std::vector<SignatureEntry> out;
    for (const auto& e : entries_) {
        if (e.kind == kind) out.push_back(e);
    }
    return out;
}

Signature signature_of(std::span<const Clause> clauses) {
    Signature sig;
    for (const auto& c : clauses) sig.add_clause(c);
    return sig;
}

std::vector<Clause> range_restrict(const Clause& clause) {
    Clause out = clause;
    const auto body_vars = variables_of(clause.body);
    for (Symbol v : variables_of(clause.head)) {
        if (std::find(body_vars.begin(), body_vars.end(), v) == body_vars.end()) {
            out.body.emplace_back(reserved::dom(), std::vector<Term>{Term::variable(v)});
        }
    }
    return {std::move(out)};
}

std::vector<Clause> dom_facts(std::span<const Clause> clauses, std::span<const Atom> extra) {
    Signature sig;
    for (const auto& c : clauses) sig.add_clause(c);
    for (const auto& a : extra) sig.add_atom(a);
    std::vector<Clause> out;
    for (const auto& e : sig.of_kind(SignatureEntry::Kind::Constant)) {
        Clause fact;
        fact.head.emplace_back(reserved::dom(), std::vector<Term>{Term::constant(e.symbol)});
        fact.origin = std::string(origin::builtin);
        out.push_back(std::move(fact));
    }
    return out;
}

std::vector<Clause> range_restrict_all(std::span<const Clause> clauses, std::span<const Atom> extra) {
    std::vector<Clause> out;
    out.reserve(clauses.size());
    for (const auto& c : clauses) {
        for (auto& r : range_restrict(c)) out.push_back(std::move(r));
    }
    for (auto& d : dom_facts(clauses, extra)) out.push_back(std::move(d));
    return out;
}

std::vector<Clause> congruence_axioms(const Signature& signature) {
    std::vector<Clause> out;
    if (!signature.uses_equality()) return out;

    const Symbol eq = reserved::equality();
    const Term x = Term::variable("X");
    const Term y = Term::variable("Y");
    const Term z = Term::variable("Z");
    auto make = [](std::vector<Atom> head, std::vector<Atom> body) {
        return Clause{std::move(head), std::move(body), std::string(origin::builtin)};
    };

    out.push_back(make({Atom(eq, {x, x})}, {Atom(reserved::dom(), {x})}));
    out.push_back(make({Atom(eq, {y, x})}, {Atom(eq, {x, y})}));
    out.push_back(make({Atom(eq, {x, z})}, {Atom(eq, {x, y}), Atom(eq, {y, z})}));

    // Argument variables are X (arity 1) or X1..Xn; Y is the replacement.
    auto arg_vars = [](std::size_t arity) {
        std::vector<Term> vars;
        for (std::size_t i = 0; i < arity; ++i) {
            vars.push_back(Term::variable(arity == 1 ? std::string("X") : "X" + std::to_string(i + 1)));
        }
        return vars;
    };

    for (const auto& p : signature.of_kind(SignatureEntry::Kind::Predicate)) {
        if (p.symbol == eq || is_reserved_predicate(p.symbol)) continue;
        const auto vars = arg_vars(p.arity);
        for (std::size_t i = 0; i < p.arity; ++i) {
            auto replaced = vars;
            replaced[i] = y;
            out.push_back(make({Atom(p.symbol, replaced)}, {Atom(p.symbol, vars), Atom(eq, {vars[i], y})}));
        }
    }
    for (const auto& f : signature.of_kind(SignatureEntry::Kind::Function)) {
        const auto vars = arg_vars(f.arity);
        for (std::size_t i = 0; i < f.arity; ++i) {
            auto replaced = vars;
            replaced[i] = y;
            out.push_back(make({Atom(eq, {Term::compound(f.symbol, vars), Term::compound(f.symbol, replaced)})},
                               {Atom(eq, {vars[i], y})}));
        }
    }
    return out;
}

}  // namespace logquest
