#ifndef CQASUM_RULES_HPP
#define CQASUM_RULES_HPP

#include <cstdint>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqasum/corpus.hpp"
#include "cqasum/error.hpp"
#include "cqasum/labels.hpp"

namespace cqasum {

// A labeling function: a case-insensitive regex that votes one perspective
// when it matches anywhere in a sentence, and abstains otherwise.
struct LabelingRule {
    std::string name;
    std::string pattern; // regex source
    Perspective label = Perspective::Experience;
    std::regex compiled;
};

inline LabelingRule make_rule(const std::string& name, const std::string& pattern,
                              Perspective label) {
    LabelingRule rule;
    rule.name = name;
    rule.pattern = pattern;
    rule.label = label;
    try {
        rule.compiled = std::regex(pattern, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
        throw_data("rule '" + name + "': pattern does not compile: " + e.what());
    }
    return rule;
}

// Rule file: UTF-8 JSON array of {"name","pattern","label"}.
inline std::vector<LabelingRule> load_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open rule file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw_data("rule file is not valid JSON (" + path + "): " + e.what());
    }
    if (!doc.is_array()) throw_data("rule file must be a JSON array");
    std::vector<LabelingRule> rules;
    std::set<std::string> names;
    for (const auto& jr : doc) {
        if (!jr.is_object() || !jr.contains("name") || !jr.contains("pattern") ||
            !jr.contains("label"))
            throw_data("rule entries must be objects with \"name\", \"pattern\", \"label\"");
        const std::string name = jr["name"].get<std::string>();
        if (!names.insert(name).second) throw_data("duplicate rule name '" + name + "'");
        const std::string label_str = jr["label"].get<std::string>();
        const auto label = perspective_from_string(label_str);
        if (!label) throw_data("rule '" + name + "': unknown label \"" + label_str + "\"");
        rules.push_back(make_rule(name, jr["pattern"].get<std::string>(), *label));
    }
    if (rules.empty()) throw_data("rule file contains no rules: " + path);
    return rules;
}

struct RowKey {
    std::string thread_id;
    std::string answer_id;
    int sentence_index = 0;
};

struct KeyedSentence {
    RowKey key;
    std::string text;
};

// n x m table of rule votes: cell is -1 (abstain) or a label index 0..4.
struct LabelMatrix {
    std::vector<std::string> rule_names;
    std::vector<RowKey> row_keys;
    std::vector<std::int8_t> cells; // row-major, rows() x cols()

    std::size_t rows() const { return row_keys.size(); }
    std::size_t cols() const { return rule_names.size(); }
    std::int8_t at(std::size_t i, std::size_t j) const { return cells[i * cols() + j]; }
    std::int8_t& at(std::size_t i, std::size_t j) { return cells[i * cols() + j]; }

    bool row_all_abstain(std::size_t i) const {
        for (std::size_t j = 0; j < cols(); ++j)
            if (at(i, j) != kAbstain) return false;
        return true;
    }
};

inline LabelMatrix apply_rules(const std::vector<LabelingRule>& rules,
                               const std::vector<KeyedSentence>& sentences) {
    LabelMatrix m;
    m.rule_names.reserve(rules.size());
    for (const auto& r : rules) m.rule_names.push_back(r.name);
    m.row_keys.reserve(sentences.size());
    for (const auto& s : sentences) m.row_keys.push_back(s.key);
    m.cells.assign(sentences.size() * rules.size(), static_cast<std::int8_t>(kAbstain));
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        for (std::size_t j = 0; j < rules.size(); ++j) {
            if (std::regex_search(sentences[i].text, rules[j].compiled))
                m.at(i, j) = static_cast<std::int8_t>(index_of(rules[j].label));
        }
    }
    return m;
}

namespace detail {
inline void check_tsv_safe(const std::string& s, const char* what) {
    if (s.find('\t') != std::string::npos || s.find('\n') != std::string::npos)
        throw_data(std::string(what) + " contains a tab or newline and cannot be persisted: " + s);
}
} // namespace detail

// Compact table file. Header line: tab-joined rule names. Each row:
// thread_id, answer_id, sentence_index, then m cell codes (-1 or 0..4).
inline void save_label_matrix(const std::string& path, const LabelMatrix& m) {
    std::ofstream out(path);
    if (!out) throw_data("cannot write label matrix: " + path);
    for (std::size_t j = 0; j < m.rule_names.size(); ++j) {
        detail::check_tsv_safe(m.rule_names[j], "rule name");
        out << (j ? "\t" : "") << m.rule_names[j];
    }
    out << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        detail::check_tsv_safe(m.row_keys[i].thread_id, "thread id");
        detail::check_tsv_safe(m.row_keys[i].answer_id, "answer id");
        out << m.row_keys[i].thread_id << '\t' << m.row_keys[i].answer_id << '\t'
            << m.row_keys[i].sentence_index;
        for (std::size_t j = 0; j < m.cols(); ++j) out << '\t' << static_cast<int>(m.at(i, j));
        out << '\n';
    }
}

inline LabelMatrix load_label_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open label matrix: " + path);
    std::string line;
    if (!std::getline(in, line)) throw_data("label matrix file is empty: " + path);
    LabelMatrix m;
    {
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, '\t')) m.rule_names.push_back(field);
    }
    if (m.rule_names.empty()) throw_data("label matrix header has no rule names: " + path);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, '\t')) fields.push_back(field);
        if (fields.size() != 3 + m.rule_names.size())
            throw_data("label matrix row " + std::to_string(lineno) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(3 + m.rule_names.size()));
        RowKey key;
        key.thread_id = fields[0];
        key.answer_id = fields[1];
        key.sentence_index = std::stoi(fields[2]);
        m.row_keys.push_back(std::move(key));
        for (std::size_t j = 0; j < m.rule_names.size(); ++j) {
            const int code = std::stoi(fields[3 + j]);
            if (code < kAbstain || code >= kNumPerspectives)
                throw_data("label matrix row " + std::to_string(lineno) +
                           " has invalid cell code " + std::to_string(code));
            m.cells.push_back(static_cast<std::int8_t>(code));
        }
    }
    return m;
}

} // namespace cqasum

#endif // CQASUM_RULES_HPP
