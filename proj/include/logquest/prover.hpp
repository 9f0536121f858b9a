#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "logquest/clause.hpp"
#include "logquest/corpus.hpp"
#include "logquest/substitution.hpp"

namespace logquest {

struct Limits {
    int max_level = 12;
    std::chrono::nanoseconds time_budget = std::chrono::milliseconds(200);
    int max_branches = 64;

    /// Level- and branch-bounded only.
    static Limits untimed(int max_level = 12, int max_branches = 64);
};

enum class ProofStatus { AnswersFound, SaturatedNoAnswer, BudgetExhausted, KbInconsistent };

std::string to_string(ProofStatus status);

/// Brave: an answer holds in some open branch. Cautious: in every one.
enum class AnswerMode { Brave, Cautious };

struct ProofAnswer {
    Substitution bindings;  // restricted to the query's answer variables
    int proof_level = 0;    // level of the answer atom
    /// Share of the answer's derivation cone (dom facts excluded) that
    /// depends on passage facts; 0 when the cone is empty.
    double passage_support = 0.0;
};

struct ProofStats {
    std::size_t derived_atom_count = 0;    // largest over explored branches
    std::size_t passage_derived_count = 0;  // derived atoms tracing to passage facts, same branch
    std::size_t split_count = 0;
    std::size_t branches_explored = 0;     // branches run to an end: open, closed or stopped
    std::size_t redundant_firings = 0;  // only counted with SaturateOptions::check_redundancy
    std::chrono::nanoseconds elapsed{0};
    bool level_limit_hit = false;
    bool time_limit_hit = false;
    bool branch_limit_hit = false;
};

struct ProofResult {
    ProofStatus status = ProofStatus::SaturatedNoAnswer;
    std::vector<ProofAnswer> answers;  // sorted by binding, deduplicated
    ProofStats stats;
};

struct SaturateOptions {
    AnswerMode mode = AnswerMode::Brave;
    /// Records every grounding per branch and counts repeats.
    bool check_redundancy = false;
    /// Receives the compiled clause set in `.lkb` syntax (prove only).
    std::ostream* dump = nullptr;
    /// Constants of these atoms join the domain (prove only). Relaxation
    /// passes the dropped subgoals so the domain never shrinks.
    std::vector<Atom> domain_atoms;
};

/// Range-restricted clause set for one proof attempt: background and
/// passage clauses, congruence axioms when `=` occurs, dom facts, and the
/// answer rule `__ans(answer vars) :- subgoals`.
/// Throws ReservedPredicateError.
std::vector<Clause> compile_problem(const std::vector<Clause>& background, const std::vector<Clause>& passage_facts,
                                    const Query& query, const std::vector<Atom>& domain_atoms = {});

/// Hyper-extension with level saturation inside a branch and depth-first,
/// leftmost-first splitting on disjunctive heads. Every clause must be range
/// restricted (std::invalid_argument otherwise).
ProofResult saturate(const std::vector<Clause>& clauses, const Limits& limits, const SaturateOptions& options = {});

/// compile_problem followed by saturate; the time budget covers both.
ProofResult prove(const std::vector<Clause>& background, const Passage& passage, const Query& query,
                  const Limits& limits, const SaturateOptions& options = {});

ProofResult prove(const std::vector<Clause>& background, const std::vector<Clause>& passage_facts,
                  const Query& query, const Limits& limits, const SaturateOptions& options = {});

/// Clause set in `.lkb` syntax, one clause per line (needs
/// ParseOptions::allow_reserved to read back).
std::string dump_problem(const std::vector<Clause>& clauses);

}  // namespace logquest
