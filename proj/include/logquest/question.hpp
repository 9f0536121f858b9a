#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logquest/clause.hpp"

namespace logquest {

/// Controlled-English question template, e.g.
/// `what is the <r> of <e>` paired with `?- <r>(<e>, X).`
struct QuestionPattern {
    struct Piece {
        std::string text;  // literal token or slot name
        bool slot = false;
    };

    std::vector<Piece> pieces;
    std::string query_template;
    /// First variable of the query template; empty for yes/no questions.
    /// Any further template variables are existential.
    std::optional<Symbol> answer_var;
    std::size_t line = 0;
};

/// Parses one `.qpat` line: template TAB query-template.
QuestionPattern parse_pattern(std::string_view line, std::size_t line_no = 1);

/// Whole pattern file; `#` lines and blank lines are skipped.
std::vector<QuestionPattern> parse_patterns(std::string_view text);
std::vector<QuestionPattern> load_patterns(const std::filesystem::path& path);

struct InterpretedQuestion {
    Query query;
    std::size_t pattern_index = 0;
    std::vector<std::pair<std::string, std::string>> slots;  // name -> constant
};

/// First pattern in file order whose template matches the lowercased,
/// tokenized question. Slots take the shortest span that lets the rest of
/// the template match; multi-token spans are joined with `_`.
/// Throws NoPatternMatch.
InterpretedQuestion interpret_question(std::string_view question, const std::vector<QuestionPattern>& patterns);

Query parse_question(std::string_view question, const std::vector<QuestionPattern>& patterns);

}  // namespace logquest
