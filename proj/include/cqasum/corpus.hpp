#ifndef CQASUM_CORPUS_HPP
#define CQASUM_CORPUS_HPP

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqasum/error.hpp"
#include "cqasum/labels.hpp"
#include "cqasum/text.hpp"

namespace cqasum {

struct Answer {
    std::string id;
    std::string text;
};

// Character(byte)-offset labeled span inside one answer. Gold spans carry no
// provenance; predicted spans always do.
struct PerspectiveSpan {
    std::string answer_id;
    std::size_t start = 0;
    std::size_t end = 0;
    Perspective label = Perspective::Experience;
    std::optional<Provenance> provenance;
};

struct GoldAnnotation {
    std::vector<PerspectiveSpan> spans;
    std::map<Perspective, std::string> summaries;
};

struct Thread {
    std::string id;
    std::string question;
    std::string context;
    std::vector<Answer> answers;
    std::optional<GoldAnnotation> gold;
};

struct Sentence {
    std::string answer_id;
    std::size_t start = 0;
    std::size_t end = 0;
    std::string text;
};

struct Violation {
    std::string thread_id;
    std::string answer_id; // may be empty
    std::string message;
};

inline std::vector<Sentence> split_answer(const Answer& answer,
                                          const std::set<std::string>& guards) {
    std::vector<Sentence> out;
    for (const auto& [start, end] : sentence_split(answer.text, guards)) {
        out.push_back(Sentence{answer.id, start, end, answer.text.substr(start, end - start)});
    }
    return out;
}

inline std::vector<Sentence> split_answer(const Answer& answer) {
    return split_answer(answer, default_abbreviation_guards());
}

// Label of the span covering the most characters of [start, end) in the
// given answer. Ties go to the earliest span start, then the lowest label
// index. Returns nullopt when nothing overlaps.
inline std::optional<Perspective> dominant_label(const std::vector<PerspectiveSpan>& spans,
                                                 const std::string& answer_id,
                                                 std::size_t start, std::size_t end) {
    std::optional<Perspective> best;
    std::size_t best_overlap = 0;
    std::size_t best_start = 0;
    for (const auto& s : spans) {
        if (s.answer_id != answer_id) continue;
        const std::size_t lo = std::max(start, s.start);
        const std::size_t hi = std::min(end, s.end);
        if (hi <= lo) continue;
        const std::size_t overlap = hi - lo;
        const bool better =
            overlap > best_overlap ||
            (overlap == best_overlap && best &&
             (s.start < best_start ||
              (s.start == best_start && index_of(s.label) < index_of(*best))));
        if (!best || better) {
            best = s.label;
            best_overlap = overlap;
            best_start = s.start;
        }
    }
    return best;
}

namespace detail {

inline std::string trim_copy(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_ascii_space(s[b])) ++b;
    while (e > b && is_ascii_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

[[noreturn]] inline void schema_error(const std::string& thread_id, const std::string& what) {
    throw_data("corpus schema violation in thread '" + thread_id + "': " + what);
}

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key,
                                           const std::string& thread_id) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(thread_id, std::string("missing field \"") + key + "\"");
    return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& thread_id) {
    const auto& v = require_field(obj, key, thread_id);
    if (!v.is_string()) schema_error(thread_id, std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

inline PerspectiveSpan parse_span(const nlohmann::json& j, const Thread& t, std::size_t idx) {
    if (!j.is_object()) schema_error(t.id, "gold span must be an object");
    PerspectiveSpan span;
    span.answer_id = require_string(j, "answer_id", t.id);
    const auto& js = require_field(j, "start", t.id);
    const auto& je = require_field(j, "end", t.id);
    if (!js.is_number_integer() || !je.is_number_integer())
        schema_error(t.id, "span \"start\"/\"end\" must be integers");
    const long long s = js.get<long long>();
    const long long e = je.get<long long>();
    const std::string label_str = require_string(j, "label", t.id);
    const auto label = perspective_from_string(label_str);
    if (!label) schema_error(t.id, "unknown span label \"" + label_str + "\"");
    span.label = *label;

    const Answer* answer = nullptr;
    for (const auto& a : t.answers) {
        if (a.id == span.answer_id) { answer = &a; break; }
    }
    if (!answer) schema_error(t.id, "gold span #" + std::to_string(idx) +
                                        " references unknown answer '" + span.answer_id + "'");
    const long long len = static_cast<long long>(answer->text.size());
    if (s < 0 || e <= s || e > len) {
        std::ostringstream os;
        os << "gold span #" << idx << " (answer '" << span.answer_id << "') has invalid offsets ["
           << s << "," << e << ") for answer length " << len;
        schema_error(t.id, os.str());
    }
    span.start = static_cast<std::size_t>(s);
    span.end = static_cast<std::size_t>(e);
    // Redundant span text, when present, must agree with the offsets.
    if (auto it = j.find("text"); it != j.end()) {
        if (!it->is_string()) schema_error(t.id, "span \"text\" must be a string");
        if (it->get<std::string>() != answer->text.substr(span.start, span.end - span.start))
            schema_error(t.id, "gold span #" + std::to_string(idx) +
                                   " text does not match answer substring");
    }
    return span;
}

} // namespace detail

inline std::vector<Violation> validate_dataset(const std::vector<Thread>& threads) {
    std::vector<Violation> out;
    std::set<std::string> thread_ids;
    for (const auto& t : threads) {
        if (!thread_ids.insert(t.id).second)
            out.push_back({t.id, "", "duplicate thread id '" + t.id + "'"});
        if (t.answers.empty())
            out.push_back({t.id, "", "thread has no answers"});
        std::set<std::string> answer_ids;
        for (const auto& a : t.answers) {
            if (!answer_ids.insert(a.id).second)
                out.push_back({t.id, a.id, "duplicate answer id '" + a.id + "' in thread '" + t.id + "'"});
            if (detail::trim_copy(a.text).empty())
                out.push_back({t.id, a.id, "answer text empty after trim"});
        }
        if (!t.gold) continue;
        std::set<Perspective> span_labels;
        for (std::size_t i = 0; i < t.gold->spans.size(); ++i) {
            const auto& s = t.gold->spans[i];
            span_labels.insert(s.label);
            const Answer* answer = nullptr;
            for (const auto& a : t.answers) {
                if (a.id == s.answer_id) { answer = &a; break; }
            }
            if (!answer) {
                out.push_back({t.id, s.answer_id, "gold span #" + std::to_string(i) +
                                                      " references unknown answer"});
                continue;
            }
            if (s.start >= s.end || s.end > answer->text.size())
                out.push_back({t.id, s.answer_id, "gold span #" + std::to_string(i) +
                                                      " has invalid offsets"});
        }
        for (const auto& [label, summary] : t.gold->summaries) {
            if (span_labels.count(label) == 0)
                out.push_back({t.id, "", std::string("gold summary for ") + to_string(label) +
                                             " has no gold span of that label"});
            (void)summary;
        }
    }
    return out;
}

inline std::vector<Thread> parse_dataset_json(const nlohmann::json& doc) {
    if (!doc.is_array()) throw_data("corpus file must be a top-level JSON array of threads");
    std::vector<Thread> threads;
    std::set<std::string> thread_ids;
    for (const auto& jt : doc) {
        if (!jt.is_object()) throw_data("corpus thread entries must be objects");
        Thread t;
        t.id = detail::require_string(jt, "id", jt.value("id", std::string("<unknown>")));
        if (!thread_ids.insert(t.id).second)
            throw_data("duplicate thread id '" + t.id + "'");
        t.question = detail::require_string(jt, "question", t.id);
        if (auto it = jt.find("context"); it != jt.end()) {
            if (!it->is_string()) detail::schema_error(t.id, "field \"context\" must be a string");
            t.context = it->get<std::string>();
        }
        const auto& answers = detail::require_field(jt, "answers", t.id);
        if (!answers.is_array() || answers.empty())
            detail::schema_error(t.id, "field \"answers\" must be a non-empty array");
        std::set<std::string> answer_ids;
        for (const auto& ja : answers) {
            if (!ja.is_object()) detail::schema_error(t.id, "answer entries must be objects");
            Answer a;
            a.id = detail::require_string(ja, "id", t.id);
            a.text = detail::require_string(ja, "text", t.id);
            if (!answer_ids.insert(a.id).second)
                throw_data("duplicate answer id '" + a.id + "' in thread '" + t.id + "'");
            if (detail::trim_copy(a.text).empty())
                detail::schema_error(t.id, "answer '" + a.id + "' text empty after trim");
            t.answers.push_back(std::move(a));
        }
        if (auto it = jt.find("gold"); it != jt.end() && !it->is_null()) {
            if (!it->is_object()) detail::schema_error(t.id, "field \"gold\" must be an object");
            GoldAnnotation gold;
            if (auto sp = it->find("spans"); sp != it->end()) {
                if (!sp->is_array()) detail::schema_error(t.id, "field \"gold.spans\" must be an array");
                for (std::size_t i = 0; i < sp->size(); ++i)
                    gold.spans.push_back(detail::parse_span((*sp)[i], t, i));
            }
            if (auto su = it->find("summaries"); su != it->end()) {
                if (!su->is_object())
                    detail::schema_error(t.id, "field \"gold.summaries\" must be an object");
                for (auto& [key, value] : su->items()) {
                    const auto label = perspective_from_string(key);
                    if (!label) detail::schema_error(t.id, "unknown summary label \"" + key + "\"");
                    if (!value.is_string())
                        detail::schema_error(t.id, "summary for " + key + " must be a string");
                    gold.summaries[*label] = value.get<std::string>();
                }
            }
            t.gold = std::move(gold);
        }
        threads.push_back(std::move(t));
    }
    return threads;
}

inline std::vector<Thread> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open corpus file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw_data("corpus file is not valid JSON (" + path + "): " + e.what());
    }
    return parse_dataset_json(doc);
}

inline nlohmann::ordered_json dataset_to_json(const std::vector<Thread>& threads) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& t : threads) {
        nlohmann::ordered_json jt;
        jt["id"] = t.id;
        jt["question"] = t.question;
        jt["context"] = t.context;
        jt["answers"] = nlohmann::ordered_json::array();
        for (const auto& a : t.answers) {
            jt["answers"].push_back({{"id", a.id}, {"text", a.text}});
        }
        if (t.gold) {
            nlohmann::ordered_json jg;
            jg["spans"] = nlohmann::ordered_json::array();
            for (const auto& s : t.gold->spans) {
                jg["spans"].push_back({{"answer_id", s.answer_id},
                                       {"start", s.start},
                                       {"end", s.end},
                                       {"label", to_string(s.label)}});
            }
            jg["summaries"] = nlohmann::ordered_json::object();
            for (const auto& [label, summary] : t.gold->summaries)
                jg["summaries"][to_string(label)] = summary;
            jt["gold"] = std::move(jg);
        }
        doc.push_back(std::move(jt));
    }
    return doc;
}

inline void save_dataset(const std::string& path, const std::vector<Thread>& threads) {
    std::ofstream out(path);
    if (!out) throw_data("cannot write corpus file: " + path);
    out << dataset_to_json(threads).dump(2) << '\n';
}

} // namespace cqasum

#endif // CQASUM_CORPUS_HPP
