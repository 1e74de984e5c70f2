#ifndef CQASUM_CASCADE_HPP
#define CQASUM_CASCADE_HPP

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqasum/corpus.hpp"
#include "cqasum/error.hpp"
#include "cqasum/label_model.hpp"
#include "cqasum/labels.hpp"
#include "cqasum/svm.hpp"
#include "cqasum/zero_shot.hpp"

namespace cqasum {

struct CascadeConfig {
    double svm_margin_threshold = 0.25; // tau; 0 makes the SVM always answer
    bool svm_enabled = true;
    bool zsl_enabled = true;
};

struct LabeledSentence {
    Sentence sentence;
    Perspective label;
    Provenance provenance;
    // RULE: label-model posterior; ZSL: probability; SVM: margin (>= 0,
    // unbounded above).
    double confidence;
};

// Hierarchical decision: rule-stage label if the label model did not abstain,
// else the SVM when its margin clears tau, else zero-shot. The zsl callable
// is only invoked when the decision actually reaches that stage.
inline LabeledSentence classify_sentence(const Sentence& s, const ProbabilisticLabel& lm_out,
                                         const std::optional<SvmPrediction>& svm_out,
                                         const std::function<std::array<double, 5>()>& zsl,
                                         const CascadeConfig& cfg) {
    if (!(cfg.svm_margin_threshold >= 0.0) || !std::isfinite(cfg.svm_margin_threshold))
        throw_config("cascade svm_margin_threshold must be finite and >= 0");
    if (lm_out.hard_label != kAbstain) {
        const auto idx = static_cast<std::size_t>(lm_out.hard_label);
        return {s, perspective_from_index(lm_out.hard_label), Provenance::Rule,
                lm_out.posterior[idx]};
    }
    const bool svm_available = cfg.svm_enabled && svm_out.has_value();
    if (svm_available && svm_out->margin >= cfg.svm_margin_threshold)
        return {s, svm_out->label, Provenance::Svm, svm_out->margin};
    if (cfg.zsl_enabled) {
        if (!zsl) throw_internal("cascade reached ZSL stage without a zsl callable");
        const std::array<double, 5> probs = zsl();
        const int best = argmax5(probs);
        return {s, perspective_from_index(best), Provenance::Zsl,
                probs[static_cast<std::size_t>(best)]};
    }
    if (svm_available) // ZSL disabled: low-margin SVM answers anyway
        return {s, svm_out->label, Provenance::Svm, svm_out->margin};
    throw_data("unclassifiable sentence: label model abstained and no later stage is enabled"
               " (answer " + s.answer_id + " [" + std::to_string(s.start) + "," +
               std::to_string(s.end) + "))");
}

struct MergedSpan {
    PerspectiveSpan span;
    double confidence;
};

// Merge maximal runs of consecutive same-label sentences within one answer.
// Input must be ordered by (answer_id, start) with no overlap inside an
// answer. Span provenance is the strongest member stage (RULE > SVM > ZSL);
// span confidence is the best confidence among members of that stage.
inline std::vector<MergedSpan> merge_spans(const std::vector<LabeledSentence>& labeled) {
    std::vector<MergedSpan> out;
    std::size_t i = 0;
    while (i < labeled.size()) {
        const auto& first = labeled[i];
        std::size_t j = i;
        while (j + 1 < labeled.size() &&
               labeled[j + 1].sentence.answer_id == first.sentence.answer_id &&
               labeled[j + 1].label == first.label) {
            ++j;
        }
        // validate ordering/overlap across the whole answer, not only the run
        for (std::size_t k = i; k + 1 < labeled.size() &&
                                labeled[k + 1].sentence.answer_id == first.sentence.answer_id &&
                                k + 1 <= j;
             ++k) {
            if (labeled[k + 1].sentence.start < labeled[k].sentence.end)
                throw_data("overlapping labeled sentences in answer " + first.sentence.answer_id);
        }
        bool has_rule = false, has_svm = false;
        for (std::size_t k = i; k <= j; ++k) {
            if (labeled[k].provenance == Provenance::Rule) has_rule = true;
            if (labeled[k].provenance == Provenance::Svm) has_svm = true;
        }
        const Provenance prov =
            has_rule ? Provenance::Rule : (has_svm ? Provenance::Svm : Provenance::Zsl);
        double conf = 0.0;
        bool any = false;
        for (std::size_t k = i; k <= j; ++k) {
            if (labeled[k].provenance != prov) continue;
            if (!any || labeled[k].confidence > conf) conf = labeled[k].confidence;
            any = true;
        }
        MergedSpan m;
        m.span.answer_id = first.sentence.answer_id;
        m.span.start = first.sentence.start;
        m.span.end = labeled[j].sentence.end;
        m.span.label = first.label;
        m.span.provenance = prov;
        m.confidence = conf;
        out.push_back(std::move(m));
        // overlap check across run boundary within the same answer
        if (j + 1 < labeled.size() &&
            labeled[j + 1].sentence.answer_id == first.sentence.answer_id &&
            labeled[j + 1].sentence.start < labeled[j].sentence.end)
            throw_data("overlapping labeled sentences in answer " + first.sentence.answer_id);
        i = j + 1;
    }
    return out;
}

struct PredictionRecord {
    std::string thread_id;
    std::string answer_id;
    std::size_t start = 0;
    std::size_t end = 0;
    Perspective label = Perspective::Experience;
    Provenance provenance = Provenance::Rule;
    double confidence = 0.0;
};

inline nlohmann::ordered_json predictions_to_json(const std::vector<PredictionRecord>& records) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["thread_id"] = r.thread_id;
        j["answer_id"] = r.answer_id;
        j["start"] = r.start;
        j["end"] = r.end;
        j["label"] = to_string(r.label);
        j["provenance"] = to_string(r.provenance);
        j["confidence"] = r.confidence;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline std::vector<PredictionRecord> predictions_from_json(const nlohmann::json& arr) {
    if (!arr.is_array()) throw_data("predictions file must be a JSON array");
    std::vector<PredictionRecord> out;
    out.reserve(arr.size());
    for (const auto& j : arr) {
        PredictionRecord r;
        try {
            r.thread_id = j.at("thread_id").get<std::string>();
            r.answer_id = j.at("answer_id").get<std::string>();
            r.start = j.at("start").get<std::size_t>();
            r.end = j.at("end").get<std::size_t>();
            const auto label = perspective_from_string(j.at("label").get<std::string>());
            if (!label) throw_data("unknown label in predictions: " + j.at("label").dump());
            r.label = *label;
            const auto prov = provenance_from_string(j.at("provenance").get<std::string>());
            if (!prov) throw_data("unknown provenance in predictions: " + j.at("provenance").dump());
            r.provenance = *prov;
            r.confidence = j.at("confidence").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw_data("malformed prediction record: " + std::string(e.what()));
        }
        if (r.end <= r.start) throw_data("prediction span with end <= start in answer " + r.answer_id);
        out.push_back(std::move(r));
    }
    return out;
}

inline void save_predictions(const std::vector<PredictionRecord>& records,
                             const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw_data("cannot write predictions: " + path);
    out << predictions_to_json(records).dump(2) << '\n';
}

inline std::vector<PredictionRecord> load_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open predictions: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw_data("predictions file is not valid JSON: " + std::string(e.what()));
    }
    return predictions_from_json(j);
}

} // namespace cqasum

#endif // CQASUM_CASCADE_HPP
