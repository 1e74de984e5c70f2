#ifndef CQASUM_SVM_HPP
#define CQASUM_SVM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqasum/embedding.hpp"
#include "cqasum/error.hpp"
#include "cqasum/hashing.hpp"
#include "cqasum/labels.hpp"

namespace cqasum {

struct SvmHyperparams {
    double lambda = 1e-4;
    int epochs = 20;
    std::uint64_t seed = 42;
};

// One-vs-rest linear classifier. weights is 5 rows of `dimension` floats
// (row-major, label order of the Perspective enum); the bias is kept
// separately even though training folds it in as a constant-1 feature.
struct LinearModel {
    int dimension = 0;
    std::vector<float> weights; // 5 * dimension
    std::array<float, 5> biases{};
    SvmHyperparams hyperparams;
    std::string trained_on; // dataset fingerprint, free-form

    float weight(int label, int i) const {
        return weights[static_cast<std::size_t>(label) * static_cast<std::size_t>(dimension) +
                       static_cast<std::size_t>(i)];
    }
};

struct SvmTraining {
    LinearModel model;
    // objective[e][l] = full-batch Pegasos objective of label l's binary
    // problem after epoch e: lambda/2 * ||w||^2 + mean hinge loss.
    std::vector<std::array<double, 5>> objective;
};

namespace detail {

inline double binary_objective(const std::vector<double>& w,
                               const std::vector<std::vector<double>>& x,
                               const std::vector<int>& sign, double lambda) {
    double norm2 = 0.0;
    for (double v : w) norm2 += v * v;
    double hinge = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dotv = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) dotv += w[k] * x[i][k];
        hinge += std::max(0.0, 1.0 - sign[i] * dotv);
    }
    return 0.5 * lambda * norm2 + hinge / static_cast<double>(x.size());
}

} // namespace detail

// Pegasos stochastic subgradient descent, one binary hinge problem per label.
// Deterministic: per-label mt19937_64 streams, index picked by engine() % n
// (avoids std::uniform_int_distribution, whose output is not pinned by the
// standard). The step count t runs across epochs, step size 1/(lambda*t),
// with the classic 1/sqrt(lambda) ball projection after every update.
inline SvmTraining train_svm_traced(const std::vector<EmbeddingVector>& X,
                                    const std::vector<Perspective>& y,
                                    const SvmHyperparams& hp = {},
                                    std::string trained_on = {}) {
    if (X.size() != y.size()) throw_data("svm: feature/label count mismatch");
    if (X.size() < 2) throw_data("svm: need at least 2 training examples");
    if (hp.lambda <= 0.0) throw_config("svm: lambda must be > 0");
    if (hp.epochs < 1) throw_config("svm: epochs must be >= 1");
    std::set<Perspective> distinct(y.begin(), y.end());
    if (distinct.size() < 2) throw_data("svm: training data contains a single class");
    const std::size_t d = X[0].dimension();
    if (d == 0) throw_data("svm: zero-dimensional embeddings");
    for (const auto& v : X)
        if (v.dimension() != d) throw_data("svm: inconsistent embedding dimensions");

    const std::size_t n = X.size();
    const std::size_t da = d + 1; // constant-1 bias feature appended
    std::vector<std::vector<double>> xa(n, std::vector<double>(da, 1.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) xa[i][k] = static_cast<double>(X[i].values[k]);

    SvmTraining out;
    out.model.dimension = static_cast<int>(d);
    out.model.weights.assign(5 * d, 0.0f);
    out.model.hyperparams = hp;
    out.model.trained_on = std::move(trained_on);
    out.objective.assign(static_cast<std::size_t>(hp.epochs), {});

    const double radius = 1.0 / std::sqrt(hp.lambda);
    for (int label = 0; label < kNumPerspectives; ++label) {
        std::vector<int> sign(n);
        for (std::size_t i = 0; i < n; ++i)
            sign[i] = (index_of(y[i]) == label) ? 1 : -1;
        SplitMix64 seeder(hp.seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(label + 1)));
        std::mt19937_64 rng(seeder.next());
        std::vector<double> w(da, 0.0);
        std::uint64_t t = 0;
        for (int epoch = 0; epoch < hp.epochs; ++epoch) {
            for (std::size_t step = 0; step < n; ++step) {
                ++t;
                const std::size_t i = static_cast<std::size_t>(rng() % n);
                const double eta = 1.0 / (hp.lambda * static_cast<double>(t));
                double dotv = 0.0;
                for (std::size_t k = 0; k < da; ++k) dotv += w[k] * xa[i][k];
                const double shrink = 1.0 - eta * hp.lambda; // = 1 - 1/t
                if (sign[i] * dotv < 1.0) {
                    for (std::size_t k = 0; k < da; ++k)
                        w[k] = shrink * w[k] + eta * sign[i] * xa[i][k];
                } else {
                    for (std::size_t k = 0; k < da; ++k) w[k] *= shrink;
                }
                double norm = 0.0;
                for (double v : w) norm += v * v;
                norm = std::sqrt(norm);
                if (norm > radius)
                    for (double& v : w) v *= radius / norm;
            }
            out.objective[static_cast<std::size_t>(epoch)][static_cast<std::size_t>(label)] =
                detail::binary_objective(w, xa, sign, hp.lambda);
        }
        for (std::size_t k = 0; k < d; ++k)
            out.model.weights[static_cast<std::size_t>(label) * d + k] = static_cast<float>(w[k]);
        out.model.biases[static_cast<std::size_t>(label)] = static_cast<float>(w[d]);
    }
    return out;
}

inline LinearModel train_svm(const std::vector<EmbeddingVector>& X,
                             const std::vector<Perspective>& y,
                             const SvmHyperparams& hp = {}, std::string trained_on = {}) {
    return train_svm_traced(X, y, hp, std::move(trained_on)).model;
}

inline std::array<double, 5> svm_decision(const LinearModel& model, const EmbeddingVector& x) {
    if (static_cast<int>(x.dimension()) != model.dimension)
        throw_data("svm_decision: embedding dimension " + std::to_string(x.dimension()) +
                   " does not match model dimension " + std::to_string(model.dimension));
    std::array<double, 5> scores{};
    for (int label = 0; label < kNumPerspectives; ++label) {
        double s = static_cast<double>(model.biases[static_cast<std::size_t>(label)]);
        for (int i = 0; i < model.dimension; ++i)
            s += static_cast<double>(model.weight(label, i)) *
                 static_cast<double>(x.values[static_cast<std::size_t>(i)]);
        scores[static_cast<std::size_t>(label)] = s;
    }
    return scores;
}

struct SvmPrediction {
    Perspective label;
    double margin; // top score minus runner-up, always >= 0
};

inline SvmPrediction predict_from_scores(const std::array<double, 5>& scores) {
    int best = 0;
    for (int i = 1; i < kNumPerspectives; ++i)
        if (scores[static_cast<std::size_t>(i)] > scores[static_cast<std::size_t>(best)]) best = i;
    double second = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kNumPerspectives; ++i)
        if (i != best) second = std::max(second, scores[static_cast<std::size_t>(i)]);
    return {perspective_from_index(best), scores[static_cast<std::size_t>(best)] - second};
}

inline SvmPrediction svm_predict(const LinearModel& model, const EmbeddingVector& x) {
    return predict_from_scores(svm_decision(model, x));
}

// Model file: u32 little-endian manifest length, JSON manifest, then
// 5*dimension little-endian f32 weights (row-major) and 5 f32 biases.
inline void save_svm_model(const LinearModel& model, const std::string& path) {
    nlohmann::ordered_json manifest;
    manifest["format"] = "cqasum-svm/1";
    manifest["dimension"] = model.dimension;
    manifest["lambda"] = model.hyperparams.lambda;
    manifest["epochs"] = model.hyperparams.epochs;
    manifest["seed"] = model.hyperparams.seed;
    manifest["labels"] = nlohmann::json::array();
    for (Perspective p : kAllPerspectives) manifest["labels"].push_back(to_string(p));
    manifest["trained_on"] = model.trained_on;
    const std::string m = manifest.dump();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw_data("cannot write svm model: " + path);
    const std::uint32_t len = static_cast<std::uint32_t>(m.size());
    unsigned char hdr[4] = {static_cast<unsigned char>(len & 0xff),
                            static_cast<unsigned char>((len >> 8) & 0xff),
                            static_cast<unsigned char>((len >> 16) & 0xff),
                            static_cast<unsigned char>((len >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(hdr), 4);
    out.write(m.data(), static_cast<std::streamsize>(m.size()));
    out.write(reinterpret_cast<const char*>(model.weights.data()),
              static_cast<std::streamsize>(model.weights.size() * sizeof(float)));
    out.write(reinterpret_cast<const char*>(model.biases.data()),
              static_cast<std::streamsize>(model.biases.size() * sizeof(float)));
    if (!out) throw_data("short write while saving svm model: " + path);
}

inline LinearModel load_svm_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_data("cannot open svm model: " + path);
    unsigned char hdr[4];
    if (!in.read(reinterpret_cast<char*>(hdr), 4)) throw_data("svm model truncated: " + path);
    const std::uint32_t len = static_cast<std::uint32_t>(hdr[0]) |
                              (static_cast<std::uint32_t>(hdr[1]) << 8) |
                              (static_cast<std::uint32_t>(hdr[2]) << 16) |
                              (static_cast<std::uint32_t>(hdr[3]) << 24);
    if (len == 0 || len > (1u << 20)) throw_data("svm model manifest length implausible: " + path);
    std::string m(len, '\0');
    if (!in.read(m.data(), len)) throw_data("svm model truncated: " + path);
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(m);
    } catch (const nlohmann::json::exception& e) {
        throw_data("svm model manifest is not valid JSON: " + std::string(e.what()));
    }
    if (manifest.value("format", "") != "cqasum-svm/1")
        throw_data("unrecognized svm model format in " + path);
    LinearModel model;
    model.dimension = manifest.value("dimension", -1);
    if (model.dimension <= 0) throw_data("svm model manifest missing dimension");
    model.hyperparams.lambda = manifest.value("lambda", 1e-4);
    model.hyperparams.epochs = manifest.value("epochs", 20);
    model.hyperparams.seed = manifest.value("seed", std::uint64_t{42});
    model.trained_on = manifest.value("trained_on", "");
    if (manifest.contains("labels")) {
        const auto& labels = manifest["labels"];
        if (!labels.is_array() || labels.size() != 5) throw_data("svm model label order corrupt");
        for (int i = 0; i < kNumPerspectives; ++i)
            if (labels[static_cast<std::size_t>(i)] != to_string(perspective_from_index(i)))
                throw_data("svm model label order does not match this build");
    }
    model.weights.resize(5 * static_cast<std::size_t>(model.dimension));
    if (!in.read(reinterpret_cast<char*>(model.weights.data()),
                 static_cast<std::streamsize>(model.weights.size() * sizeof(float))))
        throw_data("svm model truncated while reading weights: " + path);
    if (!in.read(reinterpret_cast<char*>(model.biases.data()),
                 static_cast<std::streamsize>(model.biases.size() * sizeof(float))))
        throw_data("svm model truncated while reading biases: " + path);
    for (float w : model.weights)
        if (!std::isfinite(w)) throw_data("svm model contains non-finite weights");
    for (float b : model.biases)
        if (!std::isfinite(b)) throw_data("svm model contains non-finite biases");
    return model;
}

} // namespace cqasum

#endif // CQASUM_SVM_HPP
