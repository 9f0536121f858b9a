#include "logquest/corpus.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "logquest/errors.hpp"
#include "logquest/parser.hpp"
#include "logquest/text.hpp"

namespace logquest {

Passage make_passage(std::string id, std::string text, std::vector<Clause> facts) {
    Passage p;
    p.token_count = tokenize(text).size();
    p.id = std::move(id);
    p.text = std::move(text);
    p.facts = std::move(facts);
    for (auto& c : p.facts) c.origin = p.id;
    return p;
}

std::vector<Passage> parse_corpus(std::string_view jsonl) {
    std::vector<Passage> out;
    std::set<std::string> ids;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t record = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++record;
        const std::string where = "record " + std::to_string(record);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(where + ": invalid JSON: " + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("text") ||
            !j["text"].is_string()) {
            throw DataError(where + ": needs string fields 'id' and 'text'");
        }
        std::string id = j["id"].get<std::string>();
        if (id.empty() || !origin::is_passage(id)) throw DataError(where + ": invalid passage id '" + id + "'");
        if (!ids.insert(id).second) throw DataError(where + ": duplicate passage id '" + id + "'");

        std::vector<Clause> facts;
        if (j.contains("facts")) {
            if (!j["facts"].is_array()) throw DataError(where + ": 'facts' must be an array");
            for (const auto& f : j["facts"]) {
                if (!f.is_string()) throw DataError(where + ": facts must be clause strings");
                try {
                    facts.push_back(parse_clause(f.get<std::string>(), id));
                } catch (const ParseError& e) {
                    throw DataError(where + ": " + e.what());
                }
            }
        }
        out.push_back(make_passage(std::move(id), j["text"].get<std::string>(), std::move(facts)));
    }
    return out;
}

std::vector<Passage> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_corpus(buffer.str());
}

}  // namespace logquest
