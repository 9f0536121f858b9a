#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "logquest/corpus.hpp"
#include "logquest/ranker.hpp"

namespace logquest {

/// Synonym classes over lexemes; one comma-separated class per line.
class SynonymLexicon {
public:
    static SynonymLexicon parse(std::string_view text);
    static SynonymLexicon load(const std::filesystem::path& path);

    void add_class(const std::vector<std::string>& words);

    /// The lexeme itself plus every lexeme sharing a class with it.
    std::vector<std::string> expand(const std::string& lex) const;

    std::size_t class_count() const { return classes_.size(); }

private:
    std::vector<std::vector<std::string>> classes_;
    std::unordered_map<std::string, std::vector<std::size_t>> membership_;
};

struct Posting {
    std::string passage_id;
    std::size_t term_frequency = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Lexeme postings over a passage set.
struct InvertedIndex {
    std::map<std::string, std::vector<Posting>> postings;  // sorted by passage id
    std::map<std::string, std::size_t> df;
    std::map<std::string, std::size_t> doc_length;  // passage id -> token count
    std::size_t doc_count = 0;
    double avg_len = 0.0;

    std::size_t term_frequency(const std::string& lex, const std::string& passage_id) const;
};

/// Throws DataError on duplicate passage ids.
InvertedIndex build_index(const std::vector<Passage>& passages);

inline constexpr double kBm25K1 = 1.2;
inline constexpr double kBm25B = 0.75;

/// Okapi BM25 over the distinct lexemes of `question_tokens`.
double bm25(const InvertedIndex& index, const std::vector<std::string>& question_tokens,
            const std::string& passage_id);

struct FeatureVector {
    double matching_lexeme_count = 0.0;  // f1
    double matching_lexeme_ratio = 0.0;  // f2
    double proper_name_overlap = 0.0;    // f3
    double bm25 = 0.0;                   // f4
    double passage_length_log = 0.0;     // f5

    Eigen::VectorXd to_vector() const;
    static const std::vector<std::string>& names();
};

/// Token-level view of a text used on both sides of feature extraction.
struct TextProfile {
    std::vector<std::string> tokens;      // all lowercased tokens
    std::set<std::string> content;        // lexemes of non-stopword tokens
    std::set<std::string> all_lexemes;    // lexemes of every token
    std::set<std::string> proper_names;   // mid-sentence capitalized tokens
    std::set<std::string> capitalized;    // capitalized tokens anywhere

    static TextProfile of(std::string_view text);
};

/// f1 counts question content lexemes present in the passage directly or
/// through a synonym; f3 counts question proper names that appear
/// capitalized in the passage.
FeatureVector extract_features(const TextProfile& question, const TextProfile& passage, std::size_t token_count,
                               const std::string& passage_id, const InvertedIndex& index,
                               const SynonymLexicon& lexicon);

FeatureVector extract_features(std::string_view question, const Passage& passage, const InvertedIndex& index,
                               const SynonymLexicon& lexicon = {});

struct ScoredPassage {
    std::string passage_id;
    double score = 0.0;
    FeatureVector features;
};

inline constexpr std::size_t kDefaultTopK = 200;

/// Passage store plus index; immutable after construction.
class Retriever {
public:
    Retriever(std::vector<Passage> passages, SynonymLexicon lexicon = {});

    /// Passages with f1 + f3 > 0 scored by `model`, best first (ties by
    /// ascending id), at most `k` of them.
    std::vector<ScoredPassage> rank(std::string_view question, const LinearModel& model,
                                    std::size_t k = kDefaultTopK) const;

    FeatureVector features(std::string_view question, const std::string& passage_id) const;

    const std::vector<Passage>& passages() const { return passages_; }
    const Passage* find(const std::string& id) const;
    const InvertedIndex& index() const { return index_; }
    const SynonymLexicon& lexicon() const { return lexicon_; }

private:
    std::vector<Passage> passages_;
    std::vector<TextProfile> profiles_;
    std::unordered_map<std::string, std::size_t> by_id_;
    SynonymLexicon lexicon_;
    InvertedIndex index_;
};

std::vector<ScoredPassage> rank_passages(std::string_view question, const Retriever& retriever,
                                         const LinearModel& model, std::size_t k = kDefaultTopK);

}  // namespace logquest
