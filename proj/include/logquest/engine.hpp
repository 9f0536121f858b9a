#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logquest/config.hpp"
#include "logquest/corpus.hpp"
#include "logquest/question.hpp"
#include "logquest/ranker.hpp"
#include "logquest/relaxation.hpp"
#include "logquest/retrieval.hpp"

namespace logquest {

struct AnswerRecord {
    std::string answer_text;
    std::vector<std::pair<std::string, std::string>> bindings;  // variable -> constant, by variable name
    double confidence = 0.0;
    std::string passage_id;
    std::string passage_text;
    std::vector<std::pair<std::size_t, std::size_t>> highlight_spans;  // [start, end) byte offsets
    int relax_count = 0;
    std::vector<std::string> dropped_subgoals;
};

namespace diagnostic {
inline constexpr const char* no_passages = "no matching passages";
inline constexpr const char* no_answer = "no answer found";
inline constexpr const char* relaxed_only = "answers found only via relaxation";
}  // namespace diagnostic

/// Per-request overrides.
struct AskOptions {
    std::optional<std::size_t> answers;
    std::optional<int> max_relax;
};

/// Every proved (passage, answer) pair before ranking.
struct ProvedAnswer {
    AnswerCandidate candidate;
    std::string value;  // answer constants joined by ", "; "yes" for ground queries
};

struct AskResult {
    std::vector<AnswerRecord> answers;
    std::vector<ProvedAnswer> pool;
    std::string diagnostic;  // empty when answers were found without relaxation
    Query query;
    std::size_t candidates = 0;       // passages returned by retrieval
    std::size_t candidates_tried = 0;  // passages given to the prover
    std::size_t proved = 0;            // passages with at least one answer
    std::size_t rechecked = 0;         // answers re-proved before emission
    std::size_t recheck_failures = 0;
    bool budget_cut = false;  // stopped launching candidates at question_budget
    std::chrono::nanoseconds elapsed{0};
};

/// Loaded corpus, background KB, patterns and models. Immutable after
/// construction; ask may be called from any number of threads.
class Engine {
public:
    Engine(PipelineConfig config, std::vector<Passage> corpus, std::vector<Clause> background,
           std::vector<QuestionPattern> patterns, SynonymLexicon lexicon, LinearModel passage_model,
           LinearModel answer_model);

    /// Reads every asset named in the config. Throws DataError / ParseError.
    static Engine load(const PipelineConfig& config);

    /// Throws NoPatternMatch.
    AskResult ask(std::string_view question, const AskOptions& options = {}) const;

    const PipelineConfig& config() const { return config_; }
    const Retriever& retriever() const { return retriever_; }
    const std::vector<Clause>& background() const { return background_; }
    const std::vector<QuestionPattern>& patterns() const { return patterns_; }
    const LinearModel& passage_model() const { return passage_model_; }
    const LinearModel& answer_model() const { return answer_model_; }

    /// Limits for one proof attempt under this config.
    Limits candidate_limits() const;

private:
    PipelineConfig config_;
    std::vector<Clause> background_;
    std::vector<QuestionPattern> patterns_;
    Retriever retriever_;
    LinearModel passage_model_;
    LinearModel answer_model_;
};

/// Constant rendered for display: the passage's own spelling when its
/// tokens occur there, else `_` turned into spaces.
std::string answer_surface(const Term& value, std::string_view passage_text);

/// Token spans of `passage_text` whose lowercased text is in `words`;
/// ascending and non-overlapping.
std::vector<std::pair<std::size_t, std::size_t>> highlight(std::string_view passage_text,
                                                           const std::vector<std::string>& words);

/// Canonical `X=berlin` style key of an answer's bindings.
std::string answer_key(const Substitution& bindings, const std::vector<Symbol>& answer_vars);

}  // namespace logquest
