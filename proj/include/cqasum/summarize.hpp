#ifndef CQASUM_SUMMARIZE_HPP
#define CQASUM_SUMMARIZE_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqasum/corpus.hpp"
#include "cqasum/error.hpp"
#include "cqasum/labels.hpp"
#include "cqasum/text.hpp"

namespace cqasum {

struct GenerationParams {
    int max_length = 150;
    int min_length = 50;
    double length_penalty = 2.0;
    int num_beams = 4;
    int input_truncation = 1024;
    std::string prompt_prefix = "summarize:";
};

inline void validate_generation_params(const GenerationParams& p) {
    if (p.min_length <= 0 || p.min_length > p.max_length)
        throw_config("generation params need 0 < min_length <= max_length");
    if (p.num_beams < 1) throw_config("generation params need num_beams >= 1");
    if (p.input_truncation <= 0) throw_config("generation params need input_truncation > 0");
}

inline GenerationParams default_extractive_params() {
    return {150, 50, 2.0, 4, 1024, "summarize:"};
}

inline GenerationParams default_abstractive_params() {
    return {100, 30, 1.8, 6, 512, "summarize:"};
}

inline nlohmann::ordered_json generation_params_to_json(const GenerationParams& p) {
    nlohmann::ordered_json j;
    j["max_length"] = p.max_length;
    j["min_length"] = p.min_length;
    j["length_penalty"] = p.length_penalty;
    j["num_beams"] = p.num_beams;
    j["input_truncation"] = p.input_truncation;
    j["prompt_prefix"] = p.prompt_prefix;
    return j;
}

enum class SummarizerStage { Extractive, Abstractive };

inline std::string to_string(SummarizerStage s) {
    return s == SummarizerStage::Extractive ? "EXTRACTIVE" : "ABSTRACTIVE";
}

struct SummarizerBackendConfig {
    SummarizerStage stage = SummarizerStage::Extractive;
    std::string kind = "stub"; // "stub" | "external"
    std::string model_id;      // e.g. "facebook/bart-large-cnn", "google/pegasus-xsum"
    std::string endpoint;
};

class SummarizerBackend {
public:
    virtual ~SummarizerBackend() = default;
    virtual std::string summarize(const std::string& text, const GenerationParams& params) = 0;
};

// Offline backend: truncate to input_truncation whitespace tokens, then emit
// the first min(max_length, count) tokens joined by single spaces. The prompt
// prefix never appears in the output, so the stub is idempotent for short
// inputs and its output is a token prefix of the input.
inline std::string stub_summarize(const std::string& text, const GenerationParams& params) {
    validate_generation_params(params);
    std::vector<std::string> tokens = whitespace_tokenize(text);
    if (tokens.size() > static_cast<std::size_t>(params.input_truncation))
        tokens.resize(static_cast<std::size_t>(params.input_truncation));
    const std::size_t k =
        std::min(tokens.size(), static_cast<std::size_t>(params.max_length));
    std::string out;
    for (std::size_t i = 0; i < k; ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

class StubSummarizerBackend : public SummarizerBackend {
public:
    std::string summarize(const std::string& text, const GenerationParams& params) override {
        return stub_summarize(text, params);
    }
};

// Every backend call is recorded before dispatch: the exact params handed to
// the backend plus the pre-truncation input, so parameter fidelity is
// checkable after the fact.
struct SummarizeAuditRecord {
    std::uint64_t job_id = 0;
    std::string thread_id;
    std::string label; // perspective name, or empty for direct stage calls
    SummarizerStage stage = SummarizerStage::Extractive;
    GenerationParams params;
    std::string input; // pre-truncation text as handed to the stage
};

class SummarizeAuditLog {
public:
    std::uint64_t append(SummarizeAuditRecord record) {
        std::lock_guard<std::mutex> lock(mu_);
        record.job_id = next_id_++;
        records_.push_back(std::move(record));
        return records_.back().job_id;
    }

    std::vector<SummarizeAuditRecord> snapshot() const {
        std::lock_guard<std::mutex> lock(mu_);
        return records_;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : snapshot()) {
            nlohmann::ordered_json j;
            j["job_id"] = r.job_id;
            j["thread_id"] = r.thread_id;
            j["label"] = r.label;
            j["stage"] = to_string(r.stage);
            j["params"] = generation_params_to_json(r.params);
            j["input"] = r.input;
            arr.push_back(std::move(j));
        }
        return arr;
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw_data("cannot write summarize audit log: " + path);
        out << to_json().dump(2) << '\n';
    }

private:
    mutable std::mutex mu_;
    std::uint64_t next_id_ = 1;
    std::vector<SummarizeAuditRecord> records_;
};

namespace detail {

inline bool all_whitespace(const std::string& s) {
    for (char c : s)
        if (!is_ascii_space(c)) return false;
    return true;
}

inline std::string run_stage(const std::string& text, SummarizerBackend& backend,
                             const GenerationParams& params, SummarizerStage stage,
                             SummarizeAuditLog* audit, const std::string& thread_id,
                             const std::string& label) {
    validate_generation_params(params);
    if (text.empty() || all_whitespace(text))
        throw_data("summarizer stage received empty input");
    if (audit) audit->append({0, thread_id, label, stage, params, text});
    return backend.summarize(text, params);
}

} // namespace detail

inline std::string extractive_stage(const std::string& text, SummarizerBackend& backend,
                                    const GenerationParams& params,
                                    SummarizeAuditLog* audit = nullptr,
                                    const std::string& thread_id = {},
                                    const std::string& label = {}) {
    return detail::run_stage(text, backend, params, SummarizerStage::Extractive, audit,
                             thread_id, label);
}

inline std::string abstractive_stage(const std::string& text, SummarizerBackend& backend,
                                     const GenerationParams& params,
                                     SummarizeAuditLog* audit = nullptr,
                                     const std::string& thread_id = {},
                                     const std::string& label = {}) {
    return detail::run_stage(text, backend, params, SummarizerStage::Abstractive, audit,
                             thread_id, label);
}

// Concatenate span texts per label, ordered by (answer position in the
// thread, span start). With include_context, each grouped text is prefixed
// with the thread question.
inline std::map<Perspective, std::string> group_spans(const Thread& thread,
                                                      const std::vector<PerspectiveSpan>& spans,
                                                      bool include_context = true) {
    std::map<std::string, std::size_t> answer_pos;
    for (std::size_t i = 0; i < thread.answers.size(); ++i)
        answer_pos[thread.answers[i].id] = i;
    struct Piece {
        std::size_t answer_index;
        std::size_t start;
        std::string text;
    };
    std::map<Perspective, std::vector<Piece>> pieces;
    for (const auto& span : spans) {
        auto it = answer_pos.find(span.answer_id);
        if (it == answer_pos.end())
            throw_data("span references unknown answer '" + span.answer_id + "' in thread " +
                       thread.id);
        const std::string& answer_text = thread.answers[it->second].text;
        if (span.end > answer_text.size() || span.end <= span.start)
            throw_data("span offsets out of range for answer " + span.answer_id);
        pieces[span.label].push_back(
            {it->second, span.start, answer_text.substr(span.start, span.end - span.start)});
    }
    std::map<Perspective, std::string> out;
    for (auto& [label, vec] : pieces) {
        std::stable_sort(vec.begin(), vec.end(), [](const Piece& a, const Piece& b) {
            if (a.answer_index != b.answer_index) return a.answer_index < b.answer_index;
            return a.start < b.start;
        });
        std::string joined;
        if (include_context) joined = "Question: " + thread.question + "\n";
        for (std::size_t i = 0; i < vec.size(); ++i) {
            if (i) joined.push_back(' ');
            joined += vec[i].text;
        }
        out[label] = std::move(joined);
    }
    return out;
}

struct SummaryPair {
    std::string extractive;
    std::string final;
};

struct SummarySet {
    std::string thread_id;
    std::map<Perspective, SummaryPair> summaries;
};

inline SummarySet summarize_thread(const Thread& thread,
                                   const std::vector<PerspectiveSpan>& spans,
                                   SummarizerBackend& extractive_backend,
                                   SummarizerBackend& abstractive_backend,
                                   const GenerationParams& extractive_params,
                                   const GenerationParams& abstractive_params,
                                   bool include_context = true,
                                   SummarizeAuditLog* audit = nullptr) {
    SummarySet out;
    out.thread_id = thread.id;
    for (const auto& [label, text] : group_spans(thread, spans, include_context)) {
        try {
            SummaryPair pair;
            pair.extractive = extractive_stage(text, extractive_backend, extractive_params,
                                               audit, thread.id, to_string(label));
            pair.final = abstractive_stage(pair.extractive, abstractive_backend,
                                           abstractive_params, audit, thread.id,
                                           to_string(label));
            out.summaries[label] = std::move(pair);
        } catch (const Error& e) {
            throw Error(e.kind(), "thread " + thread.id + " label " + to_string(label) + ": " +
                                      e.what());
        }
    }
    return out;
}

inline nlohmann::ordered_json summary_sets_to_json(const std::vector<SummarySet>& sets) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& set : sets) {
        nlohmann::ordered_json j;
        j["thread_id"] = set.thread_id;
        nlohmann::ordered_json summaries = nlohmann::ordered_json::object();
        for (const auto& [label, pair] : set.summaries) {
            nlohmann::ordered_json entry;
            entry["extractive"] = pair.extractive;
            entry["final"] = pair.final;
            summaries[to_string(label)] = std::move(entry);
        }
        j["summaries"] = std::move(summaries);
        arr.push_back(std::move(j));
    }
    return arr;
}

inline std::vector<SummarySet> summary_sets_from_json(const nlohmann::json& arr) {
    if (!arr.is_array()) throw_data("summaries file must be a JSON array");
    std::vector<SummarySet> out;
    for (const auto& j : arr) {
        SummarySet set;
        try {
            set.thread_id = j.at("thread_id").get<std::string>();
            for (const auto& [key, value] : j.at("summaries").items()) {
                auto label = perspective_from_string(key);
                if (!label) throw_data("unknown label in summaries: " + key);
                SummaryPair pair;
                pair.extractive = value.at("extractive").get<std::string>();
                pair.final = value.at("final").get<std::string>();
                set.summaries[*label] = std::move(pair);
            }
        } catch (const nlohmann::json::exception& e) {
            throw_data("malformed summary set: " + std::string(e.what()));
        }
        out.push_back(std::move(set));
    }
    return out;
}

inline void save_summary_sets(const std::vector<SummarySet>& sets, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw_data("cannot write summaries: " + path);
    out << summary_sets_to_json(sets).dump(2) << '\n';
}

inline std::vector<SummarySet> load_summary_sets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open summaries: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw_data("summaries file is not valid JSON: " + std::string(e.what()));
    }
    return summary_sets_from_json(j);
}

} // namespace cqasum

#endif // CQASUM_SUMMARIZE_HPP
