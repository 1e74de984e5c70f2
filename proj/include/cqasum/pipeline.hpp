#ifndef CQASUM_PIPELINE_HPP
#define CQASUM_PIPELINE_HPP

#include <fcntl.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqasum/cascade.hpp"
#include "cqasum/config.hpp"
#include "cqasum/corpus.hpp"
#include "cqasum/embedding.hpp"
#include "cqasum/error.hpp"
#include "cqasum/hashing.hpp"
#include "cqasum/http_backends.hpp"
#include "cqasum/label_model.hpp"
#include "cqasum/metrics.hpp"
#include "cqasum/rules.hpp"
#include "cqasum/summarize.hpp"
#include "cqasum/svm.hpp"
#include "cqasum/text.hpp"
#include "cqasum/zero_shot.hpp"

namespace cqasum {

inline constexpr const char* kNormalizedCorpusFile = "normalized_corpus.json";
inline constexpr const char* kSentencesFile = "sentences.json";
inline constexpr const char* kLabelMatrixFile = "label_matrix.tsv";
inline constexpr const char* kLabelModelFile = "label_model.json";
inline constexpr const char* kSvmModelFile = "svm_model.bin";
inline constexpr const char* kPredictionsFile = "predictions.json";
inline constexpr const char* kSummariesFile = "summaries.json";
inline constexpr const char* kSummarizeAuditFile = "summarize_audit.json";
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kReportCsvFile = "report.csv";

struct SentenceRecord {
    RowKey key;
    std::size_t start = 0;
    std::size_t end = 0;
    std::string text;
};

inline void save_sentences(const std::string& path, const std::vector<SentenceRecord>& records) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["thread_id"] = r.key.thread_id;
        j["answer_id"] = r.key.answer_id;
        j["sentence_index"] = r.key.sentence_index;
        j["start"] = r.start;
        j["end"] = r.end;
        j["text"] = r.text;
        arr.push_back(std::move(j));
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw_data("cannot write sentences: " + path);
    out << arr.dump(2) << '\n';
}

inline std::vector<SentenceRecord> load_sentences(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open sentences: " + path);
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw_data("sentences file is not valid JSON: " + std::string(e.what()));
    }
    if (!arr.is_array()) throw_data("sentences file must be a JSON array");
    std::vector<SentenceRecord> out;
    out.reserve(arr.size());
    for (const auto& j : arr) {
        SentenceRecord r;
        try {
            r.key.thread_id = j.at("thread_id").get<std::string>();
            r.key.answer_id = j.at("answer_id").get<std::string>();
            r.key.sentence_index = j.at("sentence_index").get<int>();
            r.start = j.at("start").get<std::size_t>();
            r.end = j.at("end").get<std::size_t>();
            r.text = j.at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw_data("malformed sentence record: " + std::string(e.what()));
        }
        out.push_back(std::move(r));
    }
    return out;
}

namespace detail {

inline std::string file_sha256(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_data("cannot open file for hashing: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

} // namespace detail

// Exclusive ownership of an output directory via an O_EXCL lock file.
class OutDirLock {
public:
    explicit OutDirLock(const std::string& out_dir) {
        std::filesystem::create_directories(out_dir);
        path_ = (std::filesystem::path(out_dir) / ".lock").string();
        const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0)
            throw_data("output directory is locked (another run owns " + path_ +
                       "); remove the lock file if no run is active");
        const std::string pid = std::to_string(::getpid()) + "\n";
        (void)!::write(fd, pid.data(), pid.size());
        ::close(fd);
    }

    ~OutDirLock() {
        if (!path_.empty()) ::unlink(path_.c_str());
    }

    OutDirLock(const OutDirLock&) = delete;
    OutDirLock& operator=(const OutDirLock&) = delete;

private:
    std::string path_;
};

inline std::unique_ptr<EmbeddingBackend> make_embedding_backend(const EmbeddingBackendConfig& cfg) {
    if (cfg.kind == "stub") return std::make_unique<StubEmbeddingBackend>(cfg);
    return std::make_unique<HttpEmbeddingBackend>(cfg);
}

inline std::unique_ptr<NliBackend> make_nli_backend(const ZslBackendConfig& zsl,
                                                    const EmbeddingBackendConfig& embedding) {
    if (zsl.kind == "stub")
        return std::make_unique<StubNliBackend>(embedding.dimension, embedding.seed);
    return std::make_unique<HttpNliBackend>(zsl.endpoint, zsl.model_id);
}

inline std::unique_ptr<SummarizerBackend> make_summarizer_backend(
    const SummarizerBackendConfig& cfg) {
    if (cfg.kind == "stub") return std::make_unique<StubSummarizerBackend>();
    return std::make_unique<HttpSummarizerBackend>(cfg);
}

// Stage orchestration over the artifact files in cfg.paths.out_dir. Each
// stage persists its outputs plus a .meta.json sidecar carrying the config
// fingerprint and input list; a stage is skipped when its outputs exist, the
// fingerprints match, and no input is newer than any output. Holding a
// Pipeline object holds the output-directory lock.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig cfg, std::ostream* log = &std::cout)
        : cfg_(std::move(cfg)), fingerprint_(config_fingerprint(cfg_)), log_(log),
          lock_(cfg_.paths.out_dir) {}

    const PipelineConfig& config() const { return cfg_; }
    const std::string& fingerprint() const { return fingerprint_; }

    std::string artifact_path(const char* name) const {
        return (std::filesystem::path(cfg_.paths.out_dir) / name).string();
    }

    bool ingest() {
        std::vector<std::string> inputs = {cfg_.paths.corpus};
        if (!cfg_.paths.abbreviations.empty()) inputs.push_back(cfg_.paths.abbreviations);
        const std::vector<std::string> outputs = {artifact_path(kNormalizedCorpusFile),
                                                  artifact_path(kSentencesFile)};
        if (up_to_date("ingest", inputs, outputs)) return skipped("ingest");

        const std::vector<Thread> threads = load_dataset(cfg_.paths.corpus);
        const std::vector<Violation> violations = validate_dataset(threads);
        if (!violations.empty()) {
            std::string msg = "corpus validation failed:";
            std::size_t shown = 0;
            for (const auto& v : violations) {
                if (shown++ == 10) {
                    msg += " ... (" + std::to_string(violations.size() - 10) + " more)";
                    break;
                }
                msg += "\n  thread " + v.thread_id +
                       (v.answer_id.empty() ? "" : " answer " + v.answer_id) + ": " + v.message;
            }
            throw_data(msg);
        }
        const std::set<std::string> guards = cfg_.paths.abbreviations.empty()
                                                 ? default_abbreviation_guards()
                                                 : load_abbreviation_guards(cfg_.paths.abbreviations);
        save_dataset(artifact_path(kNormalizedCorpusFile), threads);

        std::vector<SentenceRecord> records;
        for (const auto& thread : threads) {
            for (const auto& answer : thread.answers) {
                int index = 0;
                for (const auto& s : split_answer(answer, guards)) {
                    SentenceRecord r;
                    r.key = {thread.id, answer.id, index++};
                    r.start = s.start;
                    r.end = s.end;
                    r.text = s.text;
                    records.push_back(std::move(r));
                }
            }
        }
        save_sentences(artifact_path(kSentencesFile), records);
        write_meta("ingest", inputs, outputs);
        return done("ingest", outputs);
    }

    bool apply_rules() {
        require_artifact(artifact_path(kSentencesFile), "ingest");
        const std::vector<std::string> inputs = {artifact_path(kSentencesFile), cfg_.paths.rules};
        const std::vector<std::string> outputs = {artifact_path(kLabelMatrixFile)};
        if (up_to_date("apply-rules", inputs, outputs)) return skipped("apply-rules");

        const auto rules = load_rules(cfg_.paths.rules);
        const auto records = load_sentences(artifact_path(kSentencesFile));
        std::vector<KeyedSentence> sentences;
        sentences.reserve(records.size());
        for (const auto& r : records) sentences.push_back({r.key, r.text});
        const LabelMatrix matrix = cqasum::apply_rules(rules, sentences);
        save_label_matrix(artifact_path(kLabelMatrixFile), matrix);
        write_meta("apply-rules", inputs, outputs);
        return done("apply-rules", outputs);
    }

    bool train_label_model() {
        require_artifact(artifact_path(kLabelMatrixFile), "apply-rules");
        const std::vector<std::string> inputs = {artifact_path(kLabelMatrixFile)};
        const std::vector<std::string> outputs = {artifact_path(kLabelModelFile)};
        if (up_to_date("train-label-model", inputs, outputs)) return skipped("train-label-model");

        const LabelMatrix matrix = load_label_matrix(artifact_path(kLabelMatrixFile));
        const LabelModelTraining training = cqasum::train_label_model(matrix, cfg_.label_model);
        nlohmann::ordered_json j;
        j["config_fingerprint"] = fingerprint_;
        j["model"] = label_model_to_json(training.params);
        j["log_likelihood"] = training.log_likelihood;
        std::ofstream out(artifact_path(kLabelModelFile), std::ios::trunc);
        if (!out) throw_data("cannot write label model: " + artifact_path(kLabelModelFile));
        out << j.dump(2) << '\n';
        write_meta("train-label-model", inputs, outputs);
        return done("train-label-model", outputs);
    }

    bool train_svm() {
        require_artifact(artifact_path(kNormalizedCorpusFile), "ingest");
        require_artifact(artifact_path(kSentencesFile), "ingest");
        std::vector<std::string> inputs = {artifact_path(kNormalizedCorpusFile),
                                           artifact_path(kSentencesFile)};
        if (cfg_.svm.train_source == "weak") {
            require_artifact(artifact_path(kLabelMatrixFile), "apply-rules");
            require_artifact(artifact_path(kLabelModelFile), "train-label-model");
            inputs.push_back(artifact_path(kLabelMatrixFile));
            inputs.push_back(artifact_path(kLabelModelFile));
        }
        const std::vector<std::string> outputs = {artifact_path(kSvmModelFile)};
        if (up_to_date("train-svm", inputs, outputs)) return skipped("train-svm");

        const auto threads = load_dataset(artifact_path(kNormalizedCorpusFile));
        const auto records = load_sentences(artifact_path(kSentencesFile));
        std::vector<std::string> texts;
        std::vector<Perspective> labels;
        if (cfg_.svm.train_source == "gold") {
            std::map<std::string, const Thread*> by_id;
            for (const auto& t : threads) by_id[t.id] = &t;
            for (const auto& r : records) {
                const auto it = by_id.find(r.key.thread_id);
                if (it == by_id.end() || !it->second->gold) continue;
                const auto label = dominant_label(it->second->gold->spans, r.key.answer_id,
                                                  r.start, r.end);
                if (!label) continue;
                texts.push_back(r.text);
                labels.push_back(*label);
            }
            if (texts.empty())
                throw_data("svm.train_source = \"gold\" but no sentence overlaps a gold span");
        } else {
            const LabelMatrix matrix = load_label_matrix(artifact_path(kLabelMatrixFile));
            const LabelModelParams params = load_label_model_artifact();
            if (matrix.rows() != records.size())
                throw_data("label matrix row count disagrees with sentences; rerun apply-rules");
            const auto predictions = label_model_predict(params, matrix);
            for (std::size_t i = 0; i < records.size(); ++i) {
                if (predictions[i].abstained()) continue;
                texts.push_back(records[i].text);
                labels.push_back(predictions[i].label());
            }
            if (texts.empty())
                throw_data("svm.train_source = \"weak\" but the label model abstained everywhere");
        }
        const auto backend = make_embedding_backend(cfg_.embedding);
        auto cache = open_cache();
        const auto X = embed_batch(texts, *backend, cache.get());
        const LinearModel model = cqasum::train_svm(
            X, labels, cfg_.svm.hyperparams,
            detail::file_sha256(artifact_path(kNormalizedCorpusFile)));
        save_svm_model(model, artifact_path(kSvmModelFile));
        write_meta("train-svm", inputs, outputs);
        return done("train-svm", outputs);
    }

    bool classify() {
        require_artifact(artifact_path(kSentencesFile), "ingest");
        require_artifact(artifact_path(kLabelMatrixFile), "apply-rules");
        require_artifact(artifact_path(kLabelModelFile), "train-label-model");
        std::vector<std::string> inputs = {artifact_path(kSentencesFile),
                                           artifact_path(kLabelMatrixFile),
                                           artifact_path(kLabelModelFile)};
        if (cfg_.cascade.svm_enabled) {
            require_artifact(artifact_path(kSvmModelFile), "train-svm");
            inputs.push_back(artifact_path(kSvmModelFile));
        }
        if (cfg_.cascade.zsl_enabled && !cfg_.paths.hypotheses.empty())
            inputs.push_back(cfg_.paths.hypotheses);
        const std::vector<std::string> outputs = {artifact_path(kPredictionsFile)};
        if (up_to_date("classify", inputs, outputs)) return skipped("classify");

        const auto records = load_sentences(artifact_path(kSentencesFile));
        const LabelMatrix matrix = load_label_matrix(artifact_path(kLabelMatrixFile));
        if (matrix.rows() != records.size())
            throw_data("label matrix row count disagrees with sentences; rerun apply-rules");
        const LabelModelParams params = load_label_model_artifact();
        const auto lm_out = label_model_predict(params, matrix);

        std::optional<LinearModel> svm_model;
        std::vector<EmbeddingVector> embeddings;
        if (cfg_.cascade.svm_enabled) {
            svm_model = load_svm_model(artifact_path(kSvmModelFile));
            std::vector<std::string> texts;
            texts.reserve(records.size());
            for (const auto& r : records) texts.push_back(r.text);
            const auto backend = make_embedding_backend(cfg_.embedding);
            auto cache = open_cache();
            embeddings = embed_batch(texts, *backend, cache.get());
        }
        std::vector<LabelDescription> descriptions;
        std::unique_ptr<NliBackend> nli;
        if (cfg_.cascade.zsl_enabled) {
            descriptions = cfg_.paths.hypotheses.empty()
                               ? default_label_descriptions()
                               : load_label_descriptions(cfg_.paths.hypotheses);
            nli = make_nli_backend(cfg_.zsl, cfg_.embedding);
        }

        std::vector<PredictionRecord> predictions;
        std::vector<LabeledSentence> thread_batch;
        std::string current_thread;
        auto flush = [&]() {
            if (thread_batch.empty()) return;
            for (const auto& m : merge_spans(thread_batch)) {
                PredictionRecord r;
                r.thread_id = current_thread;
                r.answer_id = m.span.answer_id;
                r.start = m.span.start;
                r.end = m.span.end;
                r.label = m.span.label;
                r.provenance = *m.span.provenance;
                r.confidence = m.confidence;
                predictions.push_back(std::move(r));
            }
            thread_batch.clear();
        };
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& rec = records[i];
            if (rec.key.thread_id != current_thread) {
                flush();
                current_thread = rec.key.thread_id;
            }
            Sentence s;
            s.answer_id = rec.key.answer_id;
            s.start = rec.start;
            s.end = rec.end;
            s.text = rec.text;
            std::optional<SvmPrediction> svm_out;
            if (svm_model) svm_out = svm_predict(*svm_model, embeddings[i]);
            const std::string& text = rec.text;
            auto zsl_fn = [&]() { return zsl_classify(text, descriptions, *nli); };
            thread_batch.push_back(classify_sentence(s, lm_out[i], svm_out, zsl_fn, cfg_.cascade));
        }
        flush();
        save_predictions(predictions, artifact_path(kPredictionsFile));
        write_meta("classify", inputs, outputs);
        return done("classify", outputs);
    }

    bool summarize() {
        require_artifact(artifact_path(kNormalizedCorpusFile), "ingest");
        require_artifact(artifact_path(kPredictionsFile), "classify");
        const std::vector<std::string> inputs = {artifact_path(kNormalizedCorpusFile),
                                                 artifact_path(kPredictionsFile)};
        const std::vector<std::string> outputs = {artifact_path(kSummariesFile),
                                                  artifact_path(kSummarizeAuditFile)};
        if (up_to_date("summarize", inputs, outputs)) return skipped("summarize");

        const auto threads = load_dataset(artifact_path(kNormalizedCorpusFile));
        const auto predictions = load_predictions(artifact_path(kPredictionsFile));
        std::map<std::string, std::vector<PerspectiveSpan>> spans_by_thread;
        for (const auto& p : predictions) {
            PerspectiveSpan s;
            s.answer_id = p.answer_id;
            s.start = p.start;
            s.end = p.end;
            s.label = p.label;
            s.provenance = p.provenance;
            spans_by_thread[p.thread_id].push_back(std::move(s));
        }
        const auto extractive = make_summarizer_backend(cfg_.extractive_backend);
        std::unique_ptr<SummarizerBackend> abstractive;
        if (cfg_.summarize.abstractive_enabled)
            abstractive = make_summarizer_backend(cfg_.abstractive_backend);
        SummarizeAuditLog audit;
        std::vector<SummarySet> sets;
        for (const auto& thread : threads) {
            SummarySet set;
            set.thread_id = thread.id;
            const auto it = spans_by_thread.find(thread.id);
            if (it != spans_by_thread.end()) {
                for (const auto& [label, text] :
                     group_spans(thread, it->second, cfg_.summarize.include_context)) {
                    try {
                        SummaryPair pair;
                        pair.extractive =
                            extractive_stage(text, *extractive, cfg_.extractive_params, &audit,
                                             thread.id, to_string(label));
                        pair.final = abstractive
                                         ? abstractive_stage(pair.extractive, *abstractive,
                                                             cfg_.abstractive_params, &audit,
                                                             thread.id, to_string(label))
                                         : pair.extractive;
                        set.summaries[label] = std::move(pair);
                    } catch (const Error& e) {
                        throw Error(e.kind(), "thread " + thread.id + " label " +
                                                  to_string(label) + ": " + e.what());
                    }
                }
            }
            sets.push_back(std::move(set));
        }
        save_summary_sets(sets, artifact_path(kSummariesFile));
        audit.save(artifact_path(kSummarizeAuditFile));
        write_meta("summarize", inputs, outputs);
        return done("summarize", outputs);
    }

    bool evaluate() {
        require_artifact(artifact_path(kNormalizedCorpusFile), "ingest");
        require_artifact(artifact_path(kPredictionsFile), "classify");
        require_artifact(artifact_path(kSummariesFile), "summarize");
        std::vector<std::string> inputs = {artifact_path(kNormalizedCorpusFile),
                                           artifact_path(kPredictionsFile),
                                           artifact_path(kSummariesFile)};
        if (!cfg_.metrics.factuality_file.empty()) inputs.push_back(cfg_.metrics.factuality_file);
        std::vector<std::string> outputs = {artifact_path(kReportFile)};
        if (cfg_.metrics.csv) outputs.push_back(artifact_path(kReportCsvFile));
        if (up_to_date("evaluate", inputs, outputs)) return skipped("evaluate");

        const auto threads = load_dataset(artifact_path(kNormalizedCorpusFile));
        const auto predictions = load_predictions(artifact_path(kPredictionsFile));
        const auto summaries = load_summary_sets(artifact_path(kSummariesFile));
        const auto backend = make_embedding_backend(cfg_.embedding);
        EvaluateConfig ecfg;
        ecfg.avg_weights = cfg_.metrics.avg_weights;
        ecfg.include_context = cfg_.summarize.include_context;
        if (!cfg_.metrics.factuality_file.empty())
            ecfg.factuality = load_factuality(cfg_.metrics.factuality_file);
        const RunReport report = evaluate_run(threads, predictions, summaries, *backend, ecfg);
        save_report(report, artifact_path(kReportFile), fingerprint_);
        if (cfg_.metrics.csv) save_report_csv(report, artifact_path(kReportCsvFile));
        write_meta("evaluate", inputs, outputs);
        return done("evaluate", outputs);
    }

    void run_all() {
        ingest();
        apply_rules();
        train_label_model();
        if (cfg_.cascade.svm_enabled)
            train_svm();
        else if (log_)
            *log_ << "[train-svm] skipped (cascade.svm_enabled = false)\n";
        classify();
        summarize();
        evaluate();
    }

private:
    bool skipped(const char* stage) {
        if (log_) *log_ << "[" << stage << "] up to date, skipped\n";
        return false;
    }

    bool done(const char* stage, const std::vector<std::string>& outputs) {
        if (log_) {
            *log_ << "[" << stage << "] wrote";
            for (const auto& o : outputs)
                *log_ << " " << std::filesystem::path(o).filename().string();
            *log_ << "\n";
        }
        return true;
    }

    static void require_artifact(const std::string& path, const char* producer) {
        if (!std::filesystem::exists(path))
            throw_data("missing artifact " + path + "; run the `" + std::string(producer) +
                       "` subcommand first");
    }

    std::unique_ptr<EmbeddingCache> open_cache() const {
        if (cfg_.paths.embedding_cache.empty()) return nullptr;
        return std::make_unique<EmbeddingCache>(cfg_.paths.embedding_cache,
                                                cfg_.embedding.model_id,
                                                cfg_.embedding.dimension);
    }

    LabelModelParams load_label_model_artifact() const {
        std::ifstream in(artifact_path(kLabelModelFile));
        if (!in) throw_data("cannot open label model: " + artifact_path(kLabelModelFile));
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw_data("label model artifact is not valid JSON: " + std::string(e.what()));
        }
        if (!j.contains("model")) throw_data("label model artifact lacks 'model'");
        return label_model_from_json(j["model"]);
    }

    static std::map<std::string, double> load_factuality(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw_data("cannot open factuality scores: " + path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw_data("factuality file is not valid JSON: " + std::string(e.what()));
        }
        if (!j.is_object()) throw_data("factuality file must be a flat JSON object");
        std::map<std::string, double> out;
        for (const auto& [key, value] : j.items()) {
            if (!value.is_number()) throw_data("factuality value for '" + key + "' is not a number");
            out[key] = value.get<double>();
        }
        return out;
    }

    bool up_to_date(const char* stage, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) const {
        namespace fs = std::filesystem;
        std::optional<fs::file_time_type> newest_input;
        for (const auto& in : inputs) {
            std::error_code ec;
            const auto t = fs::last_write_time(in, ec);
            if (ec) return false; // missing input: let the stage raise its own error
            if (!newest_input || t > *newest_input) newest_input = t;
        }
        for (const auto& out : outputs) {
            std::error_code ec;
            const auto t = fs::last_write_time(out, ec);
            if (ec) return false;
            if (newest_input && *newest_input > t) return false;
            std::ifstream meta(out + ".meta.json");
            if (!meta) return false;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(meta);
            } catch (const nlohmann::json::exception&) {
                return false;
            }
            if (j.value("config_fingerprint", "") != fingerprint_) return false;
            if (j.value("stage", "") != stage) return false;
        }
        return true;
    }

    void write_meta(const char* stage, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) const {
        for (const auto& out : outputs) {
            nlohmann::ordered_json j;
            j["artifact"] = std::filesystem::path(out).filename().string();
            j["stage"] = stage;
            j["config_fingerprint"] = fingerprint_;
            j["inputs"] = inputs;
            std::ofstream f(out + ".meta.json", std::ios::trunc);
            if (!f) throw_data("cannot write artifact metadata: " + out + ".meta.json");
            f << j.dump(2) << '\n';
        }
    }

    PipelineConfig cfg_;
    std::string fingerprint_;
    std::ostream* log_;
    OutDirLock lock_;
};

} // namespace cqasum

#endif // CQASUM_PIPELINE_HPP
