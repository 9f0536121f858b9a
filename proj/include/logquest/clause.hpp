#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "logquest/term.hpp"

namespace logquest {

/// Origin tags. Anything else is a passage id.
namespace origin {
inline constexpr std::string_view background = "background";
inline constexpr std::string_view query = "query";
inline constexpr std::string_view builtin = "builtin";

bool is_passage(std::string_view tag);
}  // namespace origin

/// `h1 ; ... ; hn :- b1, ..., bm.` An empty head is an integrity
/// constraint, an empty body a fact.
struct Clause {
    std::vector<Atom> head;
    std::vector<Atom> body;
    std::string origin{origin::background};

    bool is_fact() const { return body.empty(); }
    bool is_constraint() const { return head.empty(); }
    bool is_definite() const { return head.size() == 1; }
    bool is_range_restricted() const;

    friend bool operator==(const Clause& a, const Clause& b) {
        return a.head == b.head && a.body == b.body && a.origin == b.origin;
    }
};

/// Conjunctive query; answer_vars is a subset of the subgoal variables.
struct Query {
    std::vector<Atom> subgoals;
    std::vector<Symbol> answer_vars;

    friend bool operator==(const Query& a, const Query& b) {
        return a.subgoals == b.subgoals && a.answer_vars == b.answer_vars;
    }
};

/// Query whose answer variables are all subgoal variables, first occurrence order.
Query make_query(std::vector<Atom> subgoals);

std::string to_string(const Clause& c);
std::string to_string(const Query& q);

}  // namespace logquest
