#ifndef CQASUM_TEXT_HPP
#define CQASUM_TEXT_HPP

#include <cctype>
#include <cstddef>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqasum/error.hpp"

namespace cqasum {

// Byte offsets throughout. UTF-8 continuation bytes have the high bit set,
// so they are never mistaken for ASCII terminators or whitespace.
inline bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_sentence_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

// Tokens that end in '.' but do not terminate a sentence. Compared
// case-insensitively against the whole whitespace-delimited word.
inline const std::set<std::string>& default_abbreviation_guards() {
    static const std::set<std::string> guards = {
        "dr.", "mr.", "mrs.", "ms.", "st.", "e.g.", "i.e.", "etc.", "vs.",
    };
    return guards;
}

// One guard token per line; '#' lines and blank lines ignored.
inline std::set<std::string> load_abbreviation_guards(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open abbreviation guard file: " + path);
    std::set<std::string> guards;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && is_ascii_space(line.back())) line.pop_back();
        std::size_t b = 0;
        while (b < line.size() && is_ascii_space(line[b])) ++b;
        line = line.substr(b);
        if (line.empty() || line[0] == '#') continue;
        guards.insert(ascii_lower(line));
    }
    return guards;
}

// Splits text into sentence [start, end) byte ranges. A sentence runs from
// its first non-whitespace byte through its final terminator ('.', '!', '?'
// followed by whitespace or end of text). Trailing text without a terminator
// forms a final sentence ending after its last non-whitespace byte. The
// offsets partition all non-whitespace content.
inline std::vector<std::pair<std::size_t, std::size_t>>
sentence_split(std::string_view text, const std::set<std::string>& guards) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (true) {
        while (i < n && is_ascii_space(text[i])) ++i;
        if (i >= n) break;
        const std::size_t start = i;
        std::size_t j = start;
        bool closed = false;
        while (j < n) {
            if (is_sentence_terminator(text[j]) && (j + 1 == n || is_ascii_space(text[j + 1]))) {
                std::size_t w = j;
                while (w > start && !is_ascii_space(text[w - 1])) --w;
                const std::string word = ascii_lower(text.substr(w, j - w + 1));
                if (guards.count(word) == 0) {
                    out.emplace_back(start, j + 1);
                    i = j + 1;
                    closed = true;
                    break;
                }
            }
            ++j;
        }
        if (!closed) {
            std::size_t last = n;
            while (last > start && is_ascii_space(text[last - 1])) --last;
            out.emplace_back(start, last);
            break;
        }
    }
    return out;
}

inline std::vector<std::pair<std::size_t, std::size_t>> sentence_split(std::string_view text) {
    return sentence_split(text, default_abbreviation_guards());
}

// Shared tokenization for the summarization metrics: lowercase, ASCII
// punctuation split off as single-character tokens, whitespace separated.
// Bytes >= 0x80 are kept as word bytes so UTF-8 words stay intact.
inline std::vector<std::string> metric_tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        const unsigned char uc = static_cast<unsigned char>(c);
        if (uc < 0x80 && is_ascii_space(c)) {
            if (!cur.empty()) { tokens.push_back(cur); cur.clear(); }
        } else if (uc < 0x80 && !std::isalnum(uc)) {
            if (!cur.empty()) { tokens.push_back(cur); cur.clear(); }
            tokens.emplace_back(1, c);
        } else {
            cur.push_back(uc < 0x80 ? static_cast<char>(std::tolower(uc)) : c);
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

// Whitespace-delimited tokens, unmodified. Used by the summarizer stub.
inline std::vector<std::string> whitespace_tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && is_ascii_space(text[i])) ++i;
        std::size_t j = i;
        while (j < n && !is_ascii_space(text[j])) ++j;
        if (j > i) tokens.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return tokens;
}

} // namespace cqasum

#endif // CQASUM_TEXT_HPP
