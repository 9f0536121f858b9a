#include "logquest/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "logquest/errors.hpp"
#include "logquest/text.hpp"

namespace logquest {

SynonymLexicon SynonymLexicon::parse(std::string_view text) {
    SynonymLexicon lex;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#' || line[first] == '%') continue;
        std::vector<std::string> words;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            // Matching is per lexeme, so multi-word entries are skipped.
            const auto toks = tokenize(cell);
            if (toks.size() == 1) words.push_back(toks.front());
        }
        if (words.size() >= 2) lex.add_class(words);
    }
    return lex;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open synonym lexicon: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

void SynonymLexicon::add_class(const std::vector<std::string>& words) {
    std::vector<std::string> cls;
    for (const auto& w : words) {
        std::string lex = lexeme(w);
        if (std::find(cls.begin(), cls.end(), lex) == cls.end()) cls.push_back(std::move(lex));
    }
    const std::size_t id = classes_.size();
    for (const auto& l : cls) membership_[l].push_back(id);
    classes_.push_back(std::move(cls));
}

std::vector<std::string> SynonymLexicon::expand(const std::string& lex) const {
    std::vector<std::string> out{lex};
    auto it = membership_.find(lex);
    if (it == membership_.end()) return out;
    for (std::size_t id : it->second) {
        for (const auto& other : classes_[id]) {
            if (std::find(out.begin(), out.end(), other) == out.end()) out.push_back(other);
        }
    }
    return out;
}

std::size_t InvertedIndex::term_frequency(const std::string& lex, const std::string& passage_id) const {
    auto it = postings.find(lex);
    if (it == postings.end()) return 0;
    const auto& list = it->second;
    auto pos = std::lower_bound(list.begin(), list.end(), passage_id,
                                [](const Posting& p, const std::string& id) { return p.passage_id < id; });
    return pos != list.end() && pos->passage_id == passage_id ? pos->term_frequency : 0;
}

InvertedIndex build_index(const std::vector<Passage>& passages) {
    InvertedIndex index;
    std::vector<const Passage*> sorted;
    for (const auto& p : passages) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(), [](const Passage* a, const Passage* b) { return a->id < b->id; });
    std::size_t total_len = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const Passage& p = *sorted[i];
        if (i > 0 && sorted[i - 1]->id == p.id) throw DataError("duplicate passage id '" + p.id + "'");
        const auto tokens = tokenize(p.text);
        index.doc_length[p.id] = tokens.size();
        total_len += tokens.size();
        std::map<std::string, std::size_t> tf;
        for (const auto& t : tokens) ++tf[lexeme(t)];
        for (const auto& [lex, count] : tf) {
            index.postings[lex].push_back({p.id, count});
            ++index.df[lex];
        }
    }
    index.doc_count = sorted.size();
    index.avg_len = sorted.empty() ? 0.0 : static_cast<double>(total_len) / static_cast<double>(sorted.size());
    return index;
}

double bm25(const InvertedIndex& index, const std::vector<std::string>& question_tokens,
            const std::string& passage_id) {
    auto len_it = index.doc_length.find(passage_id);
    if (len_it == index.doc_length.end() || index.avg_len <= 0.0) return 0.0;
    const double dl = static_cast<double>(len_it->second);
    const double n = static_cast<double>(index.doc_count);
    std::set<std::string> terms;
    for (const auto& t : question_tokens) terms.insert(lexeme(t));
    double total = 0.0;
    for (const auto& t : terms) {
        const auto tf = static_cast<double>(index.term_frequency(t, passage_id));
        if (tf == 0.0) continue;
        const double df = static_cast<double>(index.df.at(t));
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        total += idf * tf * (kBm25K1 + 1.0) / (tf + kBm25K1 * (1.0 - kBm25B + kBm25B * dl / index.avg_len));
    }
    return total;
}

Eigen::VectorXd FeatureVector::to_vector() const {
    Eigen::VectorXd v(5);
    v << matching_lexeme_count, matching_lexeme_ratio, proper_name_overlap, bm25, passage_length_log;
    return v;
}

const std::vector<std::string>& FeatureVector::names() {
    static const std::vector<std::string> n = {"matching_lexemes", "matching_ratio", "proper_names", "bm25",
                                               "length_log"};
    return n;
}

TextProfile TextProfile::of(std::string_view text) {
    TextProfile p;
    for (auto& t : tokenize_with_offsets(text)) {
        std::string lex = lexeme(t.text);
        if (!is_stopword(t.text)) p.content.insert(lex);
        p.all_lexemes.insert(lex);
        if (t.proper_name_candidate()) p.proper_names.insert(t.text);
        if (t.capitalized) p.capitalized.insert(t.text);
        p.tokens.push_back(std::move(t.text));
    }
    return p;
}

FeatureVector extract_features(const TextProfile& question, const TextProfile& passage, std::size_t token_count,
                               const std::string& passage_id, const InvertedIndex& index,
                               const SynonymLexicon& lexicon) {
    FeatureVector f;
    std::size_t matched = 0;
    for (const auto& q : question.content) {
        const auto alternatives = lexicon.expand(q);
        if (std::any_of(alternatives.begin(), alternatives.end(),
                        [&](const std::string& a) { return passage.content.count(a) > 0; })) {
            ++matched;
        }
    }
    f.matching_lexeme_count = static_cast<double>(matched);
    f.matching_lexeme_ratio =
        question.content.empty() ? 0.0 : static_cast<double>(matched) / static_cast<double>(question.content.size());
    std::size_t names = 0;
    for (const auto& n : question.proper_names) names += passage.capitalized.count(n);
    f.proper_name_overlap = static_cast<double>(names);
    f.bm25 = bm25(index, question.tokens, passage_id);
    f.passage_length_log = std::log1p(static_cast<double>(token_count));
    return f;
}

FeatureVector extract_features(std::string_view question, const Passage& passage, const InvertedIndex& index,
                               const SynonymLexicon& lexicon) {
    return extract_features(TextProfile::of(question), TextProfile::of(passage.text), passage.token_count,
                            passage.id, index, lexicon);
}

Retriever::Retriever(std::vector<Passage> passages, SynonymLexicon lexicon)
    : passages_(std::move(passages)), lexicon_(std::move(lexicon)), index_(build_index(passages_)) {
    profiles_.reserve(passages_.size());
    for (std::size_t i = 0; i < passages_.size(); ++i) {
        profiles_.push_back(TextProfile::of(passages_[i].text));
        by_id_.emplace(passages_[i].id, i);
    }
}

const Passage* Retriever::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &passages_[it->second];
}

FeatureVector Retriever::features(std::string_view question, const std::string& passage_id) const {
    auto it = by_id_.find(passage_id);
    if (it == by_id_.end()) throw DataError("unknown passage id '" + passage_id + "'");
    return extract_features(TextProfile::of(question), profiles_[it->second], passages_[it->second].token_count,
                            passage_id, index_, lexicon_);
}

std::vector<ScoredPassage> Retriever::rank(std::string_view question, const LinearModel& model,
                                           std::size_t k) const {
    if (k == 0) throw DataError("k must be at least 1");
    const TextProfile q = TextProfile::of(question);

    // Any passage with f1 + f3 > 0 shares an indexed lexeme with the
    // expanded question content or its proper names.
    std::set<std::string> probe;
    for (const auto& c : q.content) {
        for (auto& alt : lexicon_.expand(c)) probe.insert(std::move(alt));
    }
    for (const auto& n : q.proper_names) probe.insert(lexeme(n));
    std::set<std::string> candidate_ids;
    for (const auto& lex : probe) {
        auto it = index_.postings.find(lex);
        if (it == index_.postings.end()) continue;
        for (const auto& posting : it->second) candidate_ids.insert(posting.passage_id);
    }

    std::vector<ScoredPassage> scored;
    for (const auto& id : candidate_ids) {
        const std::size_t i = by_id_.at(id);
        FeatureVector f = extract_features(q, profiles_[i], passages_[i].token_count, id, index_, lexicon_);
        if (f.matching_lexeme_count + f.proper_name_overlap <= 0.0) continue;
        scored.push_back({id, score(model, f.to_vector()), f});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredPassage& a, const ScoredPassage& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.passage_id < b.passage_id;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

std::vector<ScoredPassage> rank_passages(std::string_view question, const Retriever& retriever,
                                         const LinearModel& model, std::size_t k) {
    return retriever.rank(question, model, k);
}

}  // namespace logquest
