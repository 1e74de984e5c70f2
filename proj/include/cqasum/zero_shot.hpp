#ifndef CQASUM_ZERO_SHOT_HPP
#define CQASUM_ZERO_SHOT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqasum/embedding.hpp"
#include "cqasum/error.hpp"
#include "cqasum/labels.hpp"

namespace cqasum {

struct LabelDescription {
    Perspective label;
    std::string hypothesis;
};

inline std::vector<LabelDescription> default_label_descriptions() {
    return {
        {Perspective::Experience, "This sentence shares an experience."},
        {Perspective::Information, "This sentence provides factual information."},
        {Perspective::Cause, "This sentence states a cause."},
        {Perspective::Suggestion, "This sentence gives a suggestion."},
        {Perspective::Question, "This sentence asks a question."},
    };
}

// JSON file: array of {"label": "...", "hypothesis": "..."}; exactly one
// non-empty hypothesis per perspective.
inline std::vector<LabelDescription> load_label_descriptions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open label descriptions: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw_data("label descriptions are not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_array()) throw_data("label descriptions must be a JSON array");
    std::array<bool, 5> seen{};
    std::vector<LabelDescription> out;
    for (const auto& item : j) {
        if (!item.is_object() || !item.contains("label") || !item.contains("hypothesis"))
            throw_data("label description entries need 'label' and 'hypothesis'");
        auto label = perspective_from_string(item["label"].get<std::string>());
        if (!label) throw_data("unknown label in descriptions: " + item["label"].get<std::string>());
        const std::string hyp = item["hypothesis"].get<std::string>();
        if (hyp.empty()) throw_data("empty hypothesis for label " + to_string(*label));
        if (seen[static_cast<std::size_t>(index_of(*label))])
            throw_data("duplicate hypothesis for label " + to_string(*label));
        seen[static_cast<std::size_t>(index_of(*label))] = true;
        out.push_back({*label, hyp});
    }
    for (int i = 0; i < kNumPerspectives; ++i)
        if (!seen[static_cast<std::size_t>(i)])
            throw_data("missing hypothesis for label " + to_string(perspective_from_index(i)));
    return out;
}

// Max-subtracted softmax over the five raw scores.
inline std::array<double, 5> softmax5(const std::array<double, 5>& scores) {
    for (double s : scores)
        if (!std::isfinite(s)) throw_data("non-finite score in softmax input");
    const double mx = *std::max_element(scores.begin(), scores.end());
    std::array<double, 5> out{};
    double z = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        out[i] = std::exp(scores[i] - mx);
        z += out[i];
    }
    for (double& v : out) v /= z;
    return out;
}

// Offline substitute: softmax of cosine similarities between the sentence
// embedding and each description embedding, sharpened by 1/temperature.
inline std::array<double, 5> similarity_zsl(const EmbeddingVector& text_embedding,
                                            const std::array<EmbeddingVector, 5>& description_embeddings,
                                            double temperature = 0.1) {
    if (temperature <= 0.0) throw_config("similarity_zsl temperature must be > 0");
    std::array<double, 5> sims{};
    for (std::size_t i = 0; i < 5; ++i) {
        sims[i] = cosine(text_embedding, description_embeddings[i]) / temperature;
        if (!std::isfinite(sims[i])) throw_data("non-finite similarity in similarity_zsl");
    }
    return softmax5(sims);
}

// Raw per-label scores from an NLI-style scorer; zsl_classify softmaxes them.
class NliBackend {
public:
    virtual ~NliBackend() = default;
    // hypotheses arrive in Perspective enum order; returns one score each.
    virtual std::array<double, 5> score(const std::string& text,
                                        const std::array<std::string, 5>& hypotheses) = 0;
};

// Offline NLI stand-in: scores a hypothesis by embedding-space similarity to
// the sentence, using the deterministic stub embedder.
class StubNliBackend : public NliBackend {
public:
    explicit StubNliBackend(int dimension = 64, std::uint64_t seed = 7)
        : dimension_(dimension), seed_(seed) {}

    std::array<double, 5> score(const std::string& text,
                                const std::array<std::string, 5>& hypotheses) override {
        const EmbeddingVector te = stub_embed(text, dimension_, seed_);
        std::array<double, 5> out{};
        for (std::size_t i = 0; i < 5; ++i)
            out[i] = cosine(te, stub_embed(hypotheses[i], dimension_, seed_));
        return out;
    }

private:
    int dimension_;
    std::uint64_t seed_;
};

inline std::array<double, 5> zsl_classify(const std::string& text,
                                          const std::vector<LabelDescription>& descriptions,
                                          NliBackend& backend) {
    if (descriptions.size() != 5) throw_data("zsl_classify needs exactly 5 label descriptions");
    std::array<std::string, 5> hypotheses;
    std::array<bool, 5> seen{};
    for (const auto& d : descriptions) {
        const auto idx = static_cast<std::size_t>(index_of(d.label));
        if (seen[idx]) throw_data("duplicate label description for " + to_string(d.label));
        seen[idx] = true;
        hypotheses[idx] = d.hypothesis;
    }
    const std::array<double, 5> raw = backend.score(text, hypotheses);
    return softmax5(raw);
}

inline int argmax5(const std::array<double, 5>& probs) {
    int best = 0;
    for (int i = 1; i < 5; ++i)
        if (probs[static_cast<std::size_t>(i)] > probs[static_cast<std::size_t>(best)]) best = i;
    return best;
}

} // namespace cqasum

#endif // CQASUM_ZERO_SHOT_HPP
