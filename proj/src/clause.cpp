#include "logquest/clause.hpp"

#include <algorithm>

namespace logquest {

bool origin::is_passage(std::string_view tag) {
    return tag != background && tag != query && tag != builtin;
}

bool Clause::is_range_restricted() const {
    const auto body_vars = variables_of(body);
    for (Symbol v : variables_of(head)) {
        if (std::find(body_vars.begin(), body_vars.end(), v) == body_vars.end()) return false;
    }
    return true;
}

Query make_query(std::vector<Atom> subgoals) {
    Query q;
    q.answer_vars = variables_of(subgoals);
    q.subgoals = std::move(subgoals);
    return q;
}

namespace {

std::string join_atoms(const std::vector<Atom>& atoms, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i) out += sep;
        out += to_string(atoms[i]);
    }
    return out;
}

}  // namespace

std::string to_string(const Clause& c) {
    std::string out = c.head.empty() ? "false" : join_atoms(c.head, " ; ");
    if (!c.body.empty()) {
        out += " :- ";
        out += join_atoms(c.body, ", ");
    }
    out += '.';
    return out;
}

std::string to_string(const Query& q) { return "?- " + join_atoms(q.subgoals, ", ") + "."; }

}  // namespace logquest
