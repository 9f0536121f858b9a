#include "logquest/text.hpp"

#include <algorithm>
#include <array>

namespace logquest {

namespace {

struct Decoded {
    char32_t cp;
    std::size_t length;
};

Decoded decode(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) -> char32_t {
        if (i + k >= s.size()) return 0xFFFD;
        const auto b = static_cast<unsigned char>(s[i + k]);
        return (b & 0xC0) == 0x80 ? char32_t(b & 0x3F) : char32_t(0xFFFD);
    };
    if (b0 < 0x80) return {b0, 1};
    if ((b0 & 0xE0) == 0xC0 && i + 1 < s.size()) return {(char32_t(b0 & 0x1F) << 6) | cont(1), 2};
    if ((b0 & 0xF0) == 0xE0 && i + 2 < s.size()) {
        return {(char32_t(b0 & 0x0F) << 12) | (cont(1) << 6) | cont(2), 3};
    }
    if ((b0 & 0xF8) == 0xF0 && i + 3 < s.size()) {
        return {(char32_t(b0 & 0x07) << 18) | (cont(1) << 12) | (cont(2) << 6) | cont(3), 4};
    }
    return {0xFFFD, 1};
}

void encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_alnum(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    if (cp == 0xFFFD) return false;
    if (cp >= 0x80 && cp <= 0xBF) return false;      // Latin-1 punctuation and symbols
    if (cp == 0xD7 || cp == 0xF7) return false;      // multiplication, division
    if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, arrows, math, dingbats
    if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
    return true;
}

bool is_upper(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return true;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return true;
    if (cp >= 0x391 && cp <= 0x3A9) return true;
    if (cp >= 0x400 && cp <= 0x42F) return true;
    return false;
}

char32_t fold(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    if (cp >= 0x391 && cp <= 0x3A9) return cp + 0x20;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

bool is_sentence_end(char32_t cp) { return cp == '.' || cp == '!' || cp == '?'; }

constexpr std::array<std::string_view, 25> kStopwords = {
    "a",  "an", "and", "are", "as",   "at",   "be",   "by",   "for",  "from", "has",  "he",  "in",
    "is", "it", "its", "of",  "on",   "that", "the",  "to",   "was",  "were", "will", "with",
};

}  // namespace

std::vector<TextToken> tokenize_with_offsets(std::string_view text) {
    std::vector<TextToken> out;
    bool sentence_start = true;
    std::size_t i = 0;
    while (i < text.size()) {
        Decoded d = decode(text, i);
        if (!is_alnum(d.cp)) {
            if (is_sentence_end(d.cp)) sentence_start = true;
            i += d.length;
            continue;
        }
        TextToken tok;
        tok.begin = i;
        tok.capitalized = is_upper(d.cp);
        tok.sentence_initial = sentence_start;
        while (i < text.size()) {
            d = decode(text, i);
            if (!is_alnum(d.cp)) break;
            encode(fold(d.cp), tok.text);
            i += d.length;
        }
        tok.end = i;
        sentence_start = false;
        out.push_back(std::move(tok));
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    for (auto& t : tokenize_with_offsets(text)) out.push_back(std::move(t.text));
    return out;
}

std::string lexeme(std::string_view token) {
    std::string out = to_lower(token);
    auto ends_with = [&](std::string_view suffix) {
        return out.size() >= suffix.size() && out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (out.size() > 4 && ends_with("es")) {
        out.resize(out.size() - 2);
    } else if (out.size() > 3 && ends_with("s") && !ends_with("ss")) {
        out.resize(out.size() - 1);
    }
    return out;
}

bool is_stopword(std::string_view token) {
    return std::find(kStopwords.begin(), kStopwords.end(), token) != kStopwords.end();
}

std::string to_lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const Decoded d = decode(text, i);
        if (d.cp == 0xFFFD) {
            out.append(text.substr(i, d.length));
        } else {
            encode(fold(d.cp), out);
        }
        i += d.length;
    }
    return out;
}

}  // namespace logquest
