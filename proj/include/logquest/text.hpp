#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace logquest {

struct TextToken {
    std::string text;         // lowercased
    std::size_t begin = 0;    // byte offsets into the source text
    std::size_t end = 0;
    bool capitalized = false;
    bool sentence_initial = false;

    /// Capitalized somewhere other than the start of a sentence.
    bool proper_name_candidate() const { return capitalized && !sentence_initial; }
};

/// Splits UTF-8 text on non-alphanumeric code points and lowercases each
/// piece. Multibyte letters (umlauts, accented Latin, Greek, Cyrillic) are
/// kept intact and case-folded.
std::vector<TextToken> tokenize_with_offsets(std::string_view text);

/// Lowercased tokens only.
std::vector<std::string> tokenize(std::string_view text);

/// Lowercased token with a final "es" or "s" stripped.
std::string lexeme(std::string_view token);

/// Built-in list of 25 English function words.
bool is_stopword(std::string_view token);

std::string to_lower(std::string_view text);

}  // namespace logquest
