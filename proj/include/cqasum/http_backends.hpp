#ifndef CQASUM_HTTP_BACKENDS_HPP
#define CQASUM_HTTP_BACKENDS_HPP

// HTTP client implementations of the three external-model interfaces. Kept in
// a separate header so translation units that never talk to a server do not
// pull in httplib.

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "cqasum/embedding.hpp"
#include "cqasum/error.hpp"
#include "cqasum/summarize.hpp"
#include "cqasum/zero_shot.hpp"

namespace cqasum {

namespace detail {

// "http://host:port/some/path" -> {"http://host:port", "/some/path"}; a bare
// base URL keeps the backend's default path.
inline std::pair<std::string, std::string> split_endpoint(const std::string& endpoint,
                                                          const std::string& default_path) {
    if (endpoint.empty()) throw_config("backend endpoint is empty");
    const auto scheme = endpoint.find("://");
    if (scheme == std::string::npos)
        throw_config("backend endpoint must start with http:// or https://: " + endpoint);
    const auto slash = endpoint.find('/', scheme + 3);
    if (slash == std::string::npos) return {endpoint, default_path};
    return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

inline nlohmann::json post_json(const std::string& endpoint, const std::string& default_path,
                                const nlohmann::json& body) {
    const auto [base, path] = split_endpoint(endpoint, default_path);
    httplib::Client client(base);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res)
        throw_backend("cannot reach backend at " + base + path + " (" +
                      httplib::to_string(res.error()) + ")");
    if (res->status != 200)
        throw_backend("backend " + base + path + " returned HTTP " +
                      std::to_string(res->status) + ": " + res->body.substr(0, 200));
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw_backend("backend " + base + path + " returned invalid JSON: " + e.what());
    }
}

} // namespace detail

// POST {"texts":[...]} -> {"vectors":[[...], ...]}
class HttpEmbeddingBackend : public EmbeddingBackend {
public:
    explicit HttpEmbeddingBackend(EmbeddingBackendConfig cfg) : cfg_(std::move(cfg)) {
        if (cfg_.endpoint.empty()) throw_config("external embedding backend needs an endpoint");
    }

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override {
        nlohmann::json body;
        body["texts"] = texts;
        body["model_id"] = cfg_.model_id;
        const auto reply = detail::post_json(cfg_.endpoint, "/embed", body);
        if (!reply.contains("vectors") || !reply["vectors"].is_array())
            throw_backend("embedding backend reply lacks 'vectors' array");
        const auto& vectors = reply["vectors"];
        if (vectors.size() != texts.size())
            throw_backend("embedding backend returned " + std::to_string(vectors.size()) +
                          " vectors for " + std::to_string(texts.size()) + " texts");
        std::vector<EmbeddingVector> out;
        out.reserve(vectors.size());
        for (const auto& v : vectors) {
            if (!v.is_array() || static_cast<int>(v.size()) != cfg_.dimension)
                throw_backend("embedding backend vector has wrong dimension");
            std::vector<double> acc;
            acc.reserve(v.size());
            for (const auto& x : v) acc.push_back(x.get<double>());
            out.push_back(normalized(std::move(acc)));
        }
        return out;
    }

    const EmbeddingBackendConfig& config() const override { return cfg_; }

private:
    EmbeddingBackendConfig cfg_;
};

// POST {"text","hypotheses":[...]} -> {"entailment_scores":[...]}
class HttpNliBackend : public NliBackend {
public:
    HttpNliBackend(std::string endpoint, std::string model_id = "facebook/bart-large-mnli")
        : endpoint_(std::move(endpoint)), model_id_(std::move(model_id)) {
        if (endpoint_.empty()) throw_config("external NLI backend needs an endpoint");
    }

    std::array<double, 5> score(const std::string& text,
                                const std::array<std::string, 5>& hypotheses) override {
        nlohmann::json body;
        body["text"] = text;
        body["hypotheses"] = hypotheses;
        body["model_id"] = model_id_;
        const auto reply = detail::post_json(endpoint_, "/nli", body);
        if (!reply.contains("entailment_scores") || !reply["entailment_scores"].is_array() ||
            reply["entailment_scores"].size() != 5)
            throw_backend("NLI backend reply lacks a 5-entry 'entailment_scores' array");
        std::array<double, 5> out{};
        for (std::size_t i = 0; i < 5; ++i) out[i] = reply["entailment_scores"][i].get<double>();
        return out;
    }

private:
    std::string endpoint_;
    std::string model_id_;
};

// POST {"text","params":{...}} -> {"summary"}
class HttpSummarizerBackend : public SummarizerBackend {
public:
    explicit HttpSummarizerBackend(SummarizerBackendConfig cfg) : cfg_(std::move(cfg)) {
        if (cfg_.endpoint.empty()) throw_config("external summarizer backend needs an endpoint");
    }

    std::string summarize(const std::string& text, const GenerationParams& params) override {
        nlohmann::json body;
        body["text"] = text;
        body["params"] = generation_params_to_json(params);
        body["model_id"] = cfg_.model_id;
        const auto reply = detail::post_json(cfg_.endpoint, "/summarize", body);
        if (!reply.contains("summary") || !reply["summary"].is_string())
            throw_backend("summarizer backend reply lacks 'summary' string");
        return reply["summary"].get<std::string>();
    }

private:
    SummarizerBackendConfig cfg_;
};

} // namespace cqasum

#endif // CQASUM_HTTP_BACKENDS_HPP
