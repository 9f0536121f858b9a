#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "logquest/symbol.hpp"

namespace logquest {

/// First-order term: a variable, a constant, or a compound `f(t1, ..., tn)`.
class Term {
public:
    enum class Kind : std::uint8_t { Variable, Constant, Compound };

    Term() = default;

    static Term variable(Symbol name) { return Term(Kind::Variable, name, {}); }
    static Term variable(std::string_view name) { return variable(Symbol::intern(name)); }
    static Term constant(Symbol name) { return Term(Kind::Constant, name, {}); }
    static Term constant(std::string_view name) { return constant(Symbol::intern(name)); }
    static Term compound(Symbol functor, std::vector<Term> args);
    static Term compound(std::string_view functor, std::vector<Term> args) {
        return compound(Symbol::intern(functor), std::move(args));
    }

    Kind kind() const { return kind_; }
    bool is_variable() const { return kind_ == Kind::Variable; }
    bool is_constant() const { return kind_ == Kind::Constant; }
    bool is_compound() const { return kind_ == Kind::Compound; }

    /// Variable name, constant name or functor.
    Symbol symbol() const { return symbol_; }
    const std::vector<Term>& args() const { return args_; }

    bool is_ground() const;
    bool contains_variable(Symbol var) const;
    void collect_variables(std::vector<Symbol>& out) const;

    std::size_t hash() const;

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

private:
    Term(Kind kind, Symbol symbol, std::vector<Term> args)
        : kind_(kind), symbol_(symbol), args_(std::move(args)) {}

    Kind kind_ = Kind::Constant;
    Symbol symbol_;
    std::vector<Term> args_;
};

/// Name-based total order, independent of interning order.
std::strong_ordering compare(const Term& a, const Term& b);

struct Atom {
    Symbol predicate;
    std::vector<Term> args;

    Atom() = default;
    Atom(Symbol pred, std::vector<Term> arguments) : predicate(pred), args(std::move(arguments)) {}
    Atom(std::string_view pred, std::vector<Term> arguments)
        : predicate(Symbol::intern(pred)), args(std::move(arguments)) {}

    std::size_t arity() const { return args.size(); }
    bool is_ground() const;
    void collect_variables(std::vector<Symbol>& out) const;
    std::size_t hash() const;

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.predicate == b.predicate && a.args == b.args;
    }
    friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
};

std::strong_ordering compare(const Atom& a, const Atom& b);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);

/// Distinct variables in first-occurrence order.
std::vector<Symbol> variables_of(const std::vector<Atom>& atoms);

}  // namespace logquest

template <>
struct std::hash<logquest::Term> {
    std::size_t operator()(const logquest::Term& t) const noexcept { return t.hash(); }
};

template <>
struct std::hash<logquest::Atom> {
    std::size_t operator()(const logquest::Atom& a) const noexcept { return a.hash(); }
};
