#pragma once

#include <map>
#include <vector>

#include "logquest/prover.hpp"

namespace logquest {

/// A query with some subgoals dropped. Every answer variable still occurs
/// in the remaining subgoals and at least one subgoal remains.
struct RelaxedQuery {
    Query query;
    std::vector<Atom> dropped;
    int relax_count = 0;

    static RelaxedQuery of(Query q) { return RelaxedQuery{std::move(q), {}, 0}; }
};

using PredicateSupport = std::map<Symbol, std::size_t>;

/// Ground single-head facts per predicate.
PredicateSupport fact_support(const std::vector<Clause>& background, const std::vector<Clause>& passage_facts);

/// Whether removing subgoal `index` keeps the RelaxedQuery invariants.
bool droppable(const Query& q, std::size_t index);

/// Drops the droppable subgoal with the fewest supporting facts; ties go to
/// the rightmost one. Throws NothingDroppable.
RelaxedQuery relax_once(const RelaxedQuery& rq, const PredicateSupport& support);

struct RelaxedProof {
    ProofResult result;
    RelaxedQuery query;  // the query that produced `result`
    int relax_count() const { return query.relax_count; }
};

/// Proves the full query, relaxing one subgoal per failed attempt (each
/// attempt with a fresh time budget) until answers are found, nothing is
/// droppable, or `max_relax` relaxations were spent.
RelaxedProof prove_with_relaxation(const std::vector<Clause>& background, const std::vector<Clause>& passage_facts,
                                   const Query& query, const Limits& limits, int max_relax,
                                   const SaturateOptions& options = {});

RelaxedProof prove_with_relaxation(const std::vector<Clause>& background, const Passage& passage,
                                   const Query& query, const Limits& limits, int max_relax,
                                   const SaturateOptions& options = {});

}  // namespace logquest
