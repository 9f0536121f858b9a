#include "logquest/relaxation.hpp"

#include <algorithm>
#include <stdexcept>

#include "logquest/errors.hpp"

namespace logquest {

PredicateSupport fact_support(const std::vector<Clause>& background, const std::vector<Clause>& passage_facts) {
    PredicateSupport support;
    auto count = [&](const std::vector<Clause>& clauses) {
        for (const auto& c : clauses) {
            if (c.is_fact() && c.is_definite() && c.head.front().is_ground()) ++support[c.head.front().predicate];
        }
    };
    count(background);
    count(passage_facts);
    return support;
}

bool droppable(const Query& q, std::size_t index) {
    if (q.subgoals.size() < 2 || index >= q.subgoals.size()) return false;
    std::vector<Atom> rest;
    for (std::size_t i = 0; i < q.subgoals.size(); ++i) {
        if (i != index) rest.push_back(q.subgoals[i]);
    }
    const auto remaining = variables_of(rest);
    return std::all_of(q.answer_vars.begin(), q.answer_vars.end(), [&](Symbol v) {
        return std::find(remaining.begin(), remaining.end(), v) != remaining.end();
    });
}

RelaxedQuery relax_once(const RelaxedQuery& rq, const PredicateSupport& support) {
    const auto& goals = rq.query.subgoals;
    std::size_t best = goals.size();
    std::size_t best_support = 0;
    for (std::size_t i = 0; i < goals.size(); ++i) {
        if (!droppable(rq.query, i)) continue;
        auto it = support.find(goals[i].predicate);
        const std::size_t s = it == support.end() ? 0 : it->second;
        if (best == goals.size() || s <= best_support) {
            best = i;
            best_support = s;
        }
    }
    if (best == goals.size()) throw NothingDroppable();

    RelaxedQuery out = rq;
    out.dropped.push_back(goals[best]);
    out.query.subgoals.erase(out.query.subgoals.begin() + static_cast<std::ptrdiff_t>(best));
    ++out.relax_count;
    return out;
}

RelaxedProof prove_with_relaxation(const std::vector<Clause>& background, const std::vector<Clause>& passage_facts,
                                   const Query& query, const Limits& limits, int max_relax,
                                   const SaturateOptions& options) {
    if (max_relax < 0) throw std::invalid_argument("max_relax must be non-negative");
    RelaxedProof attempt{prove(background, passage_facts, query, limits, options), RelaxedQuery::of(query)};
    if (attempt.result.status == ProofStatus::AnswersFound) return attempt;

    const PredicateSupport support = fact_support(background, passage_facts);
    while (attempt.query.relax_count < max_relax) {
        RelaxedQuery next;
        try {
            next = relax_once(attempt.query, support);
        } catch (const NothingDroppable&) {
            break;
        }
        SaturateOptions relaxed = options;
        relaxed.domain_atoms.insert(relaxed.domain_atoms.end(), next.dropped.begin(), next.dropped.end());
        attempt = RelaxedProof{prove(background, passage_facts, next.query, limits, relaxed), next};
        if (attempt.result.status == ProofStatus::AnswersFound) break;
    }
    return attempt;
}

RelaxedProof prove_with_relaxation(const std::vector<Clause>& background, const Passage& passage,
                                   const Query& query, const Limits& limits, int max_relax,
                                   const SaturateOptions& options) {
    return prove_with_relaxation(background, passage.facts, query, limits, max_relax, options);
}

}  // namespace logquest
