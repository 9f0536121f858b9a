#include "logquest/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "logquest/errors.hpp"
#include "logquest/parser.hpp"
#include "logquest/text.hpp"

namespace logquest {

namespace {

using Clock = std::chrono::steady_clock;

void check_model(const LinearModel& m, ModelKind kind, const char* what) {
    if (m.kind != kind) throw DataError(std::string(what) + " model has the wrong schema tag");
    if (m.weights.size() != feature_dimension(kind)) {
        throw DimensionMismatch(std::string(what) + " model has " + std::to_string(m.weights.size()) +
                                " weights, expected " + std::to_string(feature_dimension(kind)));
    }
}

void collect_constants(const Term& t, std::vector<std::string>& out) {
    if (t.is_constant()) out.push_back(t.symbol().name());
    for (const auto& a : t.args()) collect_constants(a, out);
}

std::vector<std::string> words_of(const std::string& constant) {
    std::vector<std::string> out;
    for (auto& t : tokenize(constant)) {
        if (!is_stopword(t)) out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

std::string answer_surface(const Term& value, std::string_view passage_text) {
    const std::string name = to_string(value);
    if (value.is_constant()) {
        const auto wanted = tokenize(name);
        const auto toks = tokenize_with_offsets(passage_text);
        if (!wanted.empty()) {
            for (std::size_t i = 0; i + wanted.size() <= toks.size(); ++i) {
                bool same = true;
                for (std::size_t k = 0; k < wanted.size() && same; ++k) same = toks[i + k].text == wanted[k];
                if (same) {
                    const auto b = toks[i].begin;
                    return std::string(passage_text.substr(b, toks[i + wanted.size() - 1].end - b));
                }
            }
        }
    }
    std::string out = name;
    std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> highlight(std::string_view passage_text,
                                                           const std::vector<std::string>& words) {
    const std::set<std::string> wanted(words.begin(), words.end());
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (const auto& t : tokenize_with_offsets(passage_text)) {
        if (wanted.count(t.text)) spans.emplace_back(t.begin, t.end);
    }
    return spans;
}

std::string answer_key(const Substitution& bindings, const std::vector<Symbol>& answer_vars) {
    if (answer_vars.empty()) return "yes";
    std::string key;
    for (Symbol v : answer_vars) {
        const Term* t = bindings.lookup(v);
        if (!key.empty()) key += ",";
        key += v.name() + "=" + (t ? to_string(*t) : "?");
    }
    return key;
}

Engine::Engine(PipelineConfig config, std::vector<Passage> corpus, std::vector<Clause> background,
               std::vector<QuestionPattern> patterns, SynonymLexicon lexicon, LinearModel passage_model,
               LinearModel answer_model)
    : config_(std::move(config)),
      background_(std::move(background)),
      patterns_(std::move(patterns)),
      retriever_(std::move(corpus), std::move(lexicon)),
      passage_model_(std::move(passage_model)),
      answer_model_(std::move(answer_model)) {
    config_.validate();
    check_model(passage_model_, ModelKind::Passage, "passage");
    check_model(answer_model_, ModelKind::Answer, "answer");
}

Engine Engine::load(const PipelineConfig& config) {
    config.validate();
    SynonymLexicon lexicon;
    if (!config.synonyms.empty()) lexicon = SynonymLexicon::load(config.synonyms);
    return Engine(config, load_corpus(config.corpus), load_kb_file(config.background), load_patterns(config.patterns),
                  std::move(lexicon), load_model(config.passage_model), load_model(config.answer_model));
}

Limits Engine::candidate_limits() const {
    return Limits{config_.max_level, config_.per_candidate_budget, config_.max_branches};
}

AskResult Engine::ask(std::string_view question, const AskOptions& options) const {
    const auto start = Clock::now();
    const std::size_t wanted = options.answers.value_or(config_.answers_returned);
    const int max_relax = options.max_relax.value_or(config_.max_relax);
    if (wanted == 0) throw DataError("answers must be at least 1");
    if (max_relax < 0) throw DataError("max_relax must not be negative");

    AskResult out;
    const InterpretedQuestion interpreted = interpret_question(question, patterns_);
    out.query = interpreted.query;
    const Query& query = out.query;

    const auto candidates = retriever_.rank(question, passage_model_, config_.top_k_passages);
    out.candidates = candidates.size();
    if (candidates.empty()) {
        out.diagnostic = diagnostic::no_passages;
        out.elapsed = Clock::now() - start;
        return out;
    }

    // Launch cutoff at question_budget; a proof launched just before it may
    // run max_relax + 1 attempts of per_candidate_budget each.
    const auto launch_deadline = start + config_.question_budget;
    const auto proofs_deadline = launch_deadline + (max_relax + 1) * config_.per_candidate_budget;
    const Limits limits = candidate_limits();

    std::vector<std::optional<RelaxedProof>> results(candidates.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> tried{0};
    std::atomic<bool> cut{false};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= candidates.size()) return;
            if (Clock::now() >= launch_deadline) {
                cut = true;
                return;
            }
            const Passage* passage = retriever_.find(candidates[i].passage_id);
            if (passage->facts.empty()) continue;  // nothing to prove from
            ++tried;
            try {
                results[i] = prove_with_relaxation(background_, passage->facts, query, limits, max_relax);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = candidates.size();
                return;
            }
        }
    };
    const std::size_t n_workers = std::min(config_.workers, candidates.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    out.candidates_tried = tried;
    out.budget_cut = cut;

    // Merge in retrieval rank order, independent of completion order.
    std::vector<AnswerCandidate> pool_answers;
    std::vector<std::pair<std::size_t, std::size_t>> origin_of;  // (candidate, answer)
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i] || results[i]->result.status != ProofStatus::AnswersFound) continue;
        ++out.proved;
        const auto& proof = *results[i];
        for (std::size_t a = 0; a < proof.result.answers.size(); ++a) {
            const ProofAnswer& ans = proof.result.answers[a];
            AnswerCandidate c;
            c.answer_key = answer_key(ans.bindings, query.answer_vars);
            c.features.relax_count = proof.relax_count();
            c.features.proof_level = ans.proof_level;
            c.features.retrieval_score = candidates[i].score;
            c.features.passage_support = ans.passage_support;
            c.features.answer_is_ground = true;
            for (const auto& [v, t] : ans.bindings.bindings()) c.features.answer_is_ground &= t.is_ground();
            c.passage_id = candidates[i].passage_id;
            std::string value;
            for (Symbol v : query.answer_vars) {
                if (const Term* t = ans.bindings.lookup(v)) value += (value.empty() ? "" : ", ") + to_string(*t);
            }
            out.pool.push_back({c, query.answer_vars.empty() ? "yes" : value});
            pool_answers.push_back(std::move(c));
            origin_of.emplace_back(i, a);
        }
    }

    const auto ranked = rank_answers(pool_answers, answer_model_, pool_answers.size());
    // Re-checks are ground and normally take microseconds; they share a
    // deadline that never ends before the proofs' own.
    const auto recheck_deadline = std::max(proofs_deadline, Clock::now() + std::chrono::milliseconds(100));

    std::vector<std::string> entity_words;
    {
        std::vector<std::string> constants;
        for (const auto& g : query.subgoals) {
            for (const auto& t : g.args) collect_constants(t, constants);
        }
        for (const auto& c : constants) {
            for (auto& w : words_of(c)) entity_words.push_back(std::move(w));
        }
    }

    for (const auto& r : ranked) {
        if (out.answers.size() >= wanted) break;
        const auto [ci, ai] = origin_of[r.candidate];
        const RelaxedProof& proof = *results[ci];
        const ProofAnswer& ans = proof.result.answers[ai];
        const Passage* passage = retriever_.find(candidates[ci].passage_id);

        // Entailment re-check of the instantiated (relaxed) query.
        ++out.rechecked;
        Query ground = apply(ans.bindings, proof.query.query);
        ground.answer_vars.clear();
        SaturateOptions recheck_options;
        recheck_options.domain_atoms = proof.query.dropped;
        const auto remaining = std::chrono::duration_cast<std::chrono::nanoseconds>(recheck_deadline - Clock::now());
        Limits recheck_limits = limits;
        recheck_limits.time_budget = std::max(remaining, std::chrono::nanoseconds(1));
        const auto verdict = prove(background_, passage->facts, ground, recheck_limits, recheck_options);
        if (verdict.status != ProofStatus::AnswersFound) {
            ++out.recheck_failures;
            continue;
        }

        AnswerRecord rec;
        rec.confidence = r.score;
        rec.passage_id = passage->id;
        rec.passage_text = passage->text;
        rec.relax_count = proof.relax_count();
        for (const auto& d : proof.query.dropped) rec.dropped_subgoals.push_back(to_string(d));
        std::vector<std::string> words = entity_words;
        if (query.answer_vars.empty()) {
            rec.answer_text = "Yes";
        } else {
            for (Symbol v : query.answer_vars) {
                const Term* t = ans.bindings.lookup(v);
                if (!t) continue;
                if (!rec.answer_text.empty()) rec.answer_text += ", ";
                rec.answer_text += answer_surface(*t, passage->text);
                for (auto& w : tokenize(to_string(*t))) words.push_back(std::move(w));
            }
        }
        for (const auto& [v, t] : ans.bindings.bindings()) rec.bindings.emplace_back(v.name(), to_string(t));
        std::sort(rec.bindings.begin(), rec.bindings.end());
        rec.highlight_spans = highlight(passage->text, words);
        out.answers.push_back(std::move(rec));
    }

    if (out.answers.empty()) {
        out.diagnostic = diagnostic::no_answer;
    } else if (std::all_of(out.answers.begin(), out.answers.end(),
                           [](const AnswerRecord& a) { return a.relax_count > 0; })) {
        out.diagnostic = diagnostic::relaxed_only;
    }
    out.elapsed = Clock::now() - start;
    return out;
}

}  // namespace logquest
