#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "logquest/clause.hpp"
#include "logquest/errors.hpp"

namespace logquest {

struct ParseOptions {
    /// Accept `dom` and `__ans`; used when re-reading compiled problem dumps.
    bool allow_reserved = false;
    /// Line number reported in errors.
    std::size_t line = 1;
};

/// Parses one clause:
///
///     fact.            p(a, f(b)).
///     rule.            h(X) :- b1(X), b2(X, Y).
///     disjunction.     a(X) ; b(X) :- c(X).
///     constraint.      false :- p(X).     or     :- p(X).
///
/// Lowercase-initial identifiers (and numbers) are constants, functors or
/// predicates; uppercase- or `_`-initial ones are variables. `%` starts a
/// comment. Equality is written `=(s, t)` or `s = t`.
Clause parse_clause(std::string_view text, std::string_view origin_tag = origin::background,
                    const ParseOptions& options = {});

/// `?- a1, ..., an.` Answer variables are all subgoal variables in first
/// occurrence order.
Query parse_query(std::string_view text, const ParseOptions& options = {});

/// One clause per line; blank and comment-only lines are skipped.
std::vector<Clause> parse_kb(std::string_view text, std::string_view origin_tag = origin::background,
                             const ParseOptions& options = {});

std::vector<Clause> load_kb_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Throws ReservedPredicateError for `dom`/`__ans` anywhere or `=` not binary.
void check_reserved(const Atom& atom);

}  // namespace logquest
