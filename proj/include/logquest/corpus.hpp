#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "logquest/clause.hpp"

namespace logquest {

/// Retrievable text snippet together with its clause translation.
struct Passage {
    std::string id;
    std::string text;
    std::vector<Clause> facts;  // origin = id
    std::size_t token_count = 0;
};

Passage make_passage(std::string id, std::string text, std::vector<Clause> facts = {});

/// JSON Lines: {"id": ..., "text": ..., "facts": ["clause.", ...]} per line.
/// Errors name the 1-based record number.
std::vector<Passage> parse_corpus(std::string_view jsonl);
std::vector<Passage> load_corpus(const std::filesystem::path& path);

}  // namespace logquest
