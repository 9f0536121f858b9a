#include "logquest/question.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "logquest/errors.hpp"
#include "logquest/parser.hpp"
#include "logquest/text.hpp"

namespace logquest {

namespace {

std::string fill_template(std::string_view query_template,
                          const std::vector<std::pair<std::string, std::string>>& slots, std::size_t line_no) {
    std::string out;
    std::size_t i = 0;
    while (i < query_template.size()) {
        if (query_template[i] != '<') {
            out += query_template[i++];
            continue;
        }
        const std::size_t close = query_template.find('>', i);
        if (close == std::string_view::npos) throw ParseError("unterminated slot", line_no, i + 1, "<");
        const std::string name(query_template.substr(i + 1, close - i - 1));
        auto it = std::find_if(slots.begin(), slots.end(), [&](const auto& s) { return s.first == name; });
        if (it == slots.end()) throw ParseError("slot not in question template", line_no, i + 1, "<" + name + ">");
        out += it->second;
        i = close + 1;
    }
    return out;
}

bool match_pieces(const std::vector<QuestionPattern::Piece>& pieces, std::size_t pi,
                  const std::vector<std::string>& tokens, std::size_t ti,
                  std::vector<std::pair<std::string, std::string>>& slots) {
    if (pi == pieces.size()) return ti == tokens.size();
    const auto& piece = pieces[pi];
    if (!piece.slot) {
        return ti < tokens.size() && tokens[ti] == piece.text && match_pieces(pieces, pi + 1, tokens, ti + 1, slots);
    }
    std::string value;
    for (std::size_t end = ti + 1; end <= tokens.size(); ++end) {
        if (!value.empty()) value += '_';
        value += tokens[end - 1];
        slots.emplace_back(piece.text, value);
        if (match_pieces(pieces, pi + 1, tokens, end, slots)) return true;
        slots.pop_back();
    }
    return false;
}

}  // namespace

QuestionPattern parse_pattern(std::string_view line, std::size_t line_no) {
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError("expected template TAB query", line_no, 1, "");
    QuestionPattern pattern;
    pattern.line = line_no;
    std::istringstream words{std::string(line.substr(0, tab))};
    std::string word;
    std::vector<std::pair<std::string, std::string>> placeholders;
    while (words >> word) {
        if (word.size() > 2 && word.front() == '<' && word.back() == '>') {
            std::string name = word.substr(1, word.size() - 2);
            placeholders.emplace_back(name, "slot_" + name);
            pattern.pieces.push_back({std::move(name), true});
        } else {
            for (auto& t : tokenize(word)) pattern.pieces.push_back({std::move(t), false});
        }
    }
    if (pattern.pieces.empty()) throw ParseError("empty question template", line_no, 1, "");
    pattern.query_template = std::string(line.substr(tab + 1));
    while (!pattern.query_template.empty() && std::isspace(static_cast<unsigned char>(pattern.query_template.back()))) {
        pattern.query_template.pop_back();
    }

    // Validate by instantiating every slot with a placeholder constant.
    ParseOptions options;
    options.line = line_no;
    const Query probe = parse_query(fill_template(pattern.query_template, placeholders, line_no), options);
    if (!probe.answer_vars.empty()) pattern.answer_var = probe.answer_vars.front();
    return pattern;
}

std::vector<QuestionPattern> parse_patterns(std::string_view text) {
    std::vector<QuestionPattern> out;
    std::size_t line_no = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string_view::npos && line[first] != '#') out.push_back(parse_pattern(line, line_no));
        ++line_no;
        start = end + 1;
    }
    return out;
}

std::vector<QuestionPattern> load_patterns(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open pattern file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_patterns(buffer.str());
}

InterpretedQuestion interpret_question(std::string_view question, const std::vector<QuestionPattern>& patterns) {
    const auto tokens = tokenize(question);
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        std::vector<std::pair<std::string, std::string>> slots;
        if (!match_pieces(patterns[i].pieces, 0, tokens, 0, slots)) continue;
        InterpretedQuestion out;
        out.pattern_index = i;
        ParseOptions options;
        options.line = patterns[i].line;
        try {
            out.query = parse_query(fill_template(patterns[i].query_template, slots, patterns[i].line), options);
        } catch (const ParseError&) {
            continue;  // e.g. a slot filled with a reserved predicate name
        }
        if (patterns[i].answer_var) {
            out.query.answer_vars = {*patterns[i].answer_var};
        } else {
            out.query.answer_vars.clear();
        }
        out.slots = std::move(slots);
        return out;
    }
    throw NoPatternMatch();
}

Query parse_question(std::string_view question, const std::vector<QuestionPattern>& patterns) {
    return interpret_question(question, patterns).query;
}

}  // namespace logquest
