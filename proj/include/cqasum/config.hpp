#ifndef CQASUM_CONFIG_HPP
#define CQASUM_CONFIG_HPP

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqasum/cascade.hpp"
#include "cqasum/embedding.hpp"
#include "cqasum/error.hpp"
#include "cqasum/hashing.hpp"
#include "cqasum/label_model.hpp"
#include "cqasum/metrics.hpp"
#include "cqasum/summarize.hpp"
#include "cqasum/svm.hpp"

namespace cqasum {

// ---------------------------------------------------------------------------
// Minimal TOML-style config reader: [section] headers, key = value pairs,
// strings/integers/floats/booleans, # comments. Unknown keys are errors.
// ---------------------------------------------------------------------------

struct ConfigValue {
    enum class Type { String, Integer, Float, Boolean } type = Type::String;
    std::string str;
    long long integer = 0;
    double number = 0.0;
    bool boolean = false;
    int line = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
            return false;
    }
    return true;
}

inline ConfigValue parse_config_value(const std::string& raw, int line) {
    ConfigValue v;
    v.line = line;
    std::string s = trim(raw);
    if (s.empty()) throw_config("missing value at config line " + std::to_string(line));
    if (s[0] == '"') {
        std::string out;
        std::size_t i = 1;
        bool closed = false;
        for (; i < s.size(); ++i) {
            const char c = s[i];
            if (c == '\\') {
                if (i + 1 >= s.size())
                    throw_config("dangling escape at config line " + std::to_string(line));
                const char e = s[++i];
                switch (e) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    default:
                        throw_config("unsupported escape '\\" + std::string(1, e) +
                                     "' at config line " + std::to_string(line));
                }
            } else if (c == '"') {
                closed = true;
                ++i;
                break;
            } else {
                out.push_back(c);
            }
        }
        if (!closed) throw_config("unterminated string at config line " + std::to_string(line));
        const std::string rest = trim(s.substr(i));
        if (!rest.empty() && rest[0] != '#')
            throw_config("trailing characters after string at config line " + std::to_string(line));
        v.type = ConfigValue::Type::String;
        v.str = out;
        return v;
    }
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = trim(s.substr(0, hash));
    if (s.empty()) throw_config("missing value at config line " + std::to_string(line));
    if (s == "true" || s == "false") {
        v.type = ConfigValue::Type::Boolean;
        v.boolean = (s == "true");
        return v;
    }
    bool int_like = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (i == 0 && (c == '+' || c == '-')) continue;
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            int_like = false;
            break;
        }
    }
    if (int_like && s != "+" && s != "-") {
        try {
            v.integer = std::stoll(s);
        } catch (const std::exception&) {
            throw_config("integer out of range at config line " + std::to_string(line));
        }
        v.type = ConfigValue::Type::Integer;
        v.number = static_cast<double>(v.integer);
        return v;
    }
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (end && *end == '\0') {
        v.type = ConfigValue::Type::Float;
        v.number = d;
        return v;
    }
    throw_config("cannot parse value '" + s + "' at config line " + std::to_string(line) +
                 " (strings must be quoted)");
}

} // namespace detail

class ConfigReader {
public:
    static ConfigReader parse(const std::string& content, const std::string& source_name) {
        ConfigReader reader;
        reader.source_ = source_name;
        std::istringstream in(content);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = detail::trim(line);
            if (t.empty() || t[0] == '#') continue;
            if (t[0] == '[') {
                const auto close = t.find(']');
                if (close == std::string::npos)
                    throw_config(source_name + ":" + std::to_string(lineno) +
                                 ": unterminated section header");
                section = detail::trim(t.substr(1, close - 1));
                if (!detail::valid_key(section))
                    throw_config(source_name + ":" + std::to_string(lineno) +
                                 ": invalid section name '" + section + "'");
                const std::string rest = detail::trim(t.substr(close + 1));
                if (!rest.empty() && rest[0] != '#')
                    throw_config(source_name + ":" + std::to_string(lineno) +
                                 ": trailing characters after section header");
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw_config(source_name + ":" + std::to_string(lineno) +
                             ": expected key = value");
            const std::string key = detail::trim(t.substr(0, eq));
            if (!detail::valid_key(key))
                throw_config(source_name + ":" + std::to_string(lineno) + ": invalid key '" +
                             key + "'");
            const std::string full = section.empty() ? key : section + "." + key;
            if (reader.values_.count(full))
                throw_config(source_name + ":" + std::to_string(lineno) + ": duplicate key '" +
                             full + "'");
            reader.values_[full] = detail::parse_config_value(t.substr(eq + 1), lineno);
        }
        return reader;
    }

    static ConfigReader parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw_config("cannot open config file: " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        return parse(buf.str(), path);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) {
        auto v = take(key);
        if (!v) return fallback;
        if (v->type != ConfigValue::Type::String) fail_type(key, *v, "a quoted string");
        return v->str;
    }

    bool get_bool(const std::string& key, bool fallback) {
        auto v = take(key);
        if (!v) return fallback;
        if (v->type != ConfigValue::Type::Boolean) fail_type(key, *v, "true or false");
        return v->boolean;
    }

    long long get_int(const std::string& key, long long fallback) {
        auto v = take(key);
        if (!v) return fallback;
        if (v->type != ConfigValue::Type::Integer) fail_type(key, *v, "an integer");
        return v->integer;
    }

    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) {
        auto v = take(key);
        if (!v) return fallback;
        if (v->type != ConfigValue::Type::Integer || v->integer < 0)
            fail_type(key, *v, "a non-negative integer");
        return static_cast<std::uint64_t>(v->integer);
    }

    double get_double(const std::string& key, double fallback) {
        auto v = take(key);
        if (!v) return fallback;
        if (v->type != ConfigValue::Type::Float && v->type != ConfigValue::Type::Integer)
            fail_type(key, *v, "a number");
        return v->number;
    }

    // Consume every remaining key under `section.` and return them.
    std::map<std::string, ConfigValue> take_section(const std::string& section) {
        std::map<std::string, ConfigValue> out;
        const std::string prefix = section + ".";
        for (const auto& [key, value] : values_) {
            if (key.rfind(prefix, 0) == 0 && !consumed_.count(key)) {
                out[key.substr(prefix.size())] = value;
                consumed_.insert(key);
            }
        }
        return out;
    }

    void finish() const {
        std::vector<std::string> unknown;
        for (const auto& [key, value] : values_)
            if (!consumed_.count(key)) unknown.push_back(key);
        if (!unknown.empty()) {
            std::string msg = source_ + ": unknown config key(s):";
            for (const auto& k : unknown) msg += " " + k;
            throw_config(msg);
        }
    }

private:
    std::optional<ConfigValue> take(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        consumed_.insert(key);
        return it->second;
    }

    [[noreturn]] void fail_type(const std::string& key, const ConfigValue& v,
                                const std::string& expected) {
        throw_config(source_ + ":" + std::to_string(v.line) + ": key '" + key + "' must be " +
                     expected);
    }

    std::string source_;
    std::map<std::string, ConfigValue> values_;
    std::set<std::string> consumed_;
};

// ---------------------------------------------------------------------------
// Pipeline configuration
// ---------------------------------------------------------------------------

struct PathsConfig {
    std::string corpus;
    std::string rules;
    std::string hypotheses;     // empty = built-in defaults
    std::string abbreviations;  // empty = built-in defaults
    std::string out_dir = "out";
    std::string embedding_cache; // empty disables the cache
};

struct ZslBackendConfig {
    std::string kind = "stub"; // "stub" | "external"
    std::string model_id = "facebook/bart-large-mnli";
    std::string endpoint;
};

struct SvmConfig {
    bool enabled = true;
    SvmHyperparams hyperparams;
    std::string train_source = "gold"; // "gold" | "weak"
};

struct SummarizeConfig {
    bool include_context = true;
    bool abstractive_enabled = true; // stage 2; off reproduces extractive-only output
};

struct MetricsConfig {
    std::map<std::string, double> avg_weights;
    bool csv = false;
    std::string factuality_file; // optional external-scorer output, flat name->number JSON
};

struct PipelineConfig {
    PathsConfig paths;
    EmbeddingBackendConfig embedding;
    ZslBackendConfig zsl;
    CascadeConfig cascade;
    LabelModelConfig label_model;
    SvmConfig svm;
    SummarizerBackendConfig extractive_backend;
    GenerationParams extractive_params;
    SummarizerBackendConfig abstractive_backend;
    GenerationParams abstractive_params;
    SummarizeConfig summarize;
    MetricsConfig metrics;
};

namespace detail {

inline std::string resolve_path(const std::string& raw, const std::filesystem::path& base) {
    if (raw.empty()) return raw;
    std::filesystem::path p(raw);
    if (p.is_absolute()) return p.lexically_normal().string();
    return (base / p).lexically_normal().string();
}

inline void check_backend_kind(const std::string& key, const std::string& kind) {
    if (kind != "stub" && kind != "external")
        throw_config(key + " must be \"stub\" or \"external\", got \"" + kind + "\"");
}

inline GenerationParams read_generation_params(ConfigReader& reader, const std::string& section,
                                               const GenerationParams& defaults) {
    GenerationParams p = defaults;
    p.max_length = static_cast<int>(reader.get_int(section + ".max_length", p.max_length));
    p.min_length = static_cast<int>(reader.get_int(section + ".min_length", p.min_length));
    p.length_penalty = reader.get_double(section + ".length_penalty", p.length_penalty);
    p.num_beams = static_cast<int>(reader.get_int(section + ".num_beams", p.num_beams));
    p.input_truncation =
        static_cast<int>(reader.get_int(section + ".input_truncation", p.input_truncation));
    p.prompt_prefix = reader.get_string(section + ".prompt_prefix", p.prompt_prefix);
    validate_generation_params(p);
    return p;
}

inline void apply_env_endpoint(std::string& endpoint, const char* var) {
    const char* value = std::getenv(var);
    if (value && *value) endpoint = value;
}

} // namespace detail

// Parse a config file into the effective PipelineConfig: defaults filled in,
// relative paths resolved against the config file's directory, endpoint
// environment overrides (CQASUM_EMBEDDING_ENDPOINT, CQASUM_NLI_ENDPOINT,
// CQASUM_EXTRACTIVE_ENDPOINT, CQASUM_ABSTRACTIVE_ENDPOINT) applied.
inline PipelineConfig load_pipeline_config(const std::string& path) {
    ConfigReader reader = ConfigReader::parse_file(path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    PipelineConfig cfg;

    cfg.paths.corpus = detail::resolve_path(reader.get_string("paths.corpus", ""), base);
    cfg.paths.rules = detail::resolve_path(reader.get_string("paths.rules", ""), base);
    cfg.paths.hypotheses = detail::resolve_path(reader.get_string("paths.hypotheses", ""), base);
    cfg.paths.abbreviations =
        detail::resolve_path(reader.get_string("paths.abbreviations", ""), base);
    cfg.paths.out_dir = detail::resolve_path(reader.get_string("paths.out_dir", "out"), base);
    cfg.paths.embedding_cache =
        detail::resolve_path(reader.get_string("paths.embedding_cache", ""), base);
    if (cfg.paths.corpus.empty()) throw_config(path + ": paths.corpus is required");
    if (cfg.paths.rules.empty()) throw_config(path + ": paths.rules is required");

    cfg.embedding.kind = reader.get_string("embedding.kind", "stub");
    detail::check_backend_kind("embedding.kind", cfg.embedding.kind);
    cfg.embedding.model_id = reader.get_string("embedding.model_id", "all-MiniLM-L6-v2");
    cfg.embedding.dimension =
        static_cast<int>(reader.get_int("embedding.dimension", cfg.embedding.kind == "stub" ? 64 : 384));
    cfg.embedding.endpoint = reader.get_string("embedding.endpoint", "");
    cfg.embedding.seed = reader.get_seed("embedding.seed", 7);
    cfg.embedding.cache_dir = cfg.paths.embedding_cache;
    if (cfg.embedding.dimension < 8) throw_config("embedding.dimension must be >= 8");

    cfg.zsl.kind = reader.get_string("zsl.kind", "stub");
    detail::check_backend_kind("zsl.kind", cfg.zsl.kind);
    cfg.zsl.model_id = reader.get_string("zsl.model_id", "facebook/bart-large-mnli");
    cfg.zsl.endpoint = reader.get_string("zsl.endpoint", "");

    cfg.cascade.svm_margin_threshold = reader.get_double("cascade.svm_margin_threshold", 0.25);
    cfg.cascade.svm_enabled = reader.get_bool("cascade.svm_enabled", true);
    cfg.cascade.zsl_enabled = reader.get_bool("cascade.zsl_enabled", true);
    if (cfg.cascade.svm_margin_threshold < 0.0)
        throw_config("cascade.svm_margin_threshold must be >= 0");

    cfg.label_model.epochs = static_cast<int>(reader.get_int("label_model.epochs", 500));
    cfg.label_model.seed = reader.get_seed("label_model.seed", 42);
    cfg.label_model.convergence_tol = reader.get_double("label_model.convergence_tol", 1e-6);
    if (cfg.label_model.epochs < 1) throw_config("label_model.epochs must be >= 1");
    if (cfg.label_model.convergence_tol < 0.0)
        throw_config("label_model.convergence_tol must be >= 0");

    cfg.svm.hyperparams.lambda = reader.get_double("svm.lambda", 1e-4);
    cfg.svm.hyperparams.epochs = static_cast<int>(reader.get_int("svm.epochs", 20));
    cfg.svm.hyperparams.seed = reader.get_seed("svm.seed", 42);
    cfg.svm.train_source = reader.get_string("svm.train_source", "gold");
    if (cfg.svm.train_source != "gold" && cfg.svm.train_source != "weak")
        throw_config("svm.train_source must be \"gold\" or \"weak\"");
    if (cfg.svm.hyperparams.lambda <= 0.0) throw_config("svm.lambda must be > 0");
    if (cfg.svm.hyperparams.epochs < 1) throw_config("svm.epochs must be >= 1");

    cfg.extractive_backend.stage = SummarizerStage::Extractive;
    cfg.extractive_backend.kind = reader.get_string("extractive.kind", "stub");
    detail::check_backend_kind("extractive.kind", cfg.extractive_backend.kind);
    cfg.extractive_backend.model_id =
        reader.get_string("extractive.model_id", "facebook/bart-large-cnn");
    cfg.extractive_backend.endpoint = reader.get_string("extractive.endpoint", "");
    cfg.extractive_params =
        detail::read_generation_params(reader, "extractive", default_extractive_params());

    cfg.abstractive_backend.stage = SummarizerStage::Abstractive;
    cfg.abstractive_backend.kind = reader.get_string("abstractive.kind", "stub");
    detail::check_backend_kind("abstractive.kind", cfg.abstractive_backend.kind);
    cfg.abstractive_backend.model_id =
        reader.get_string("abstractive.model_id", "google/pegasus-xsum");
    cfg.abstractive_backend.endpoint = reader.get_string("abstractive.endpoint", "");
    cfg.abstractive_params =
        detail::read_generation_params(reader, "abstractive", default_abstractive_params());
    cfg.summarize.abstractive_enabled = reader.get_bool("abstractive.enabled", true);

    cfg.summarize.include_context = reader.get_bool("summarize.include_context", true);

    cfg.metrics.csv = reader.get_bool("metrics.csv", false);
    cfg.metrics.factuality_file =
        detail::resolve_path(reader.get_string("metrics.factuality_file", ""), base);
    for (const auto& [name, value] : reader.take_section("metrics.weights")) {
        bool known = false;
        for (const char* metric : kMetricNames)
            if (name == metric) known = true;
        if (!known) throw_config("metrics.weights has unknown metric '" + name + "'");
        if (value.type != ConfigValue::Type::Float && value.type != ConfigValue::Type::Integer)
            throw_config("metrics.weights." + name + " must be a number");
        if (value.number < 0.0) throw_config("metrics.weights." + name + " must be >= 0");
        cfg.metrics.avg_weights[name] = value.number;
    }

    reader.finish();

    detail::apply_env_endpoint(cfg.embedding.endpoint, "CQASUM_EMBEDDING_ENDPOINT");
    detail::apply_env_endpoint(cfg.zsl.endpoint, "CQASUM_NLI_ENDPOINT");
    detail::apply_env_endpoint(cfg.extractive_backend.endpoint, "CQASUM_EXTRACTIVE_ENDPOINT");
    detail::apply_env_endpoint(cfg.abstractive_backend.endpoint, "CQASUM_ABSTRACTIVE_ENDPOINT");

    if (cfg.embedding.kind == "external" && cfg.embedding.endpoint.empty())
        throw_config("embedding.kind = \"external\" requires embedding.endpoint");
    if (cfg.zsl.kind == "external" && cfg.zsl.endpoint.empty())
        throw_config("zsl.kind = \"external\" requires zsl.endpoint");
    if (cfg.extractive_backend.kind == "external" && cfg.extractive_backend.endpoint.empty())
        throw_config("extractive.kind = \"external\" requires extractive.endpoint");
    if (cfg.abstractive_backend.kind == "external" && cfg.abstractive_backend.endpoint.empty())
        throw_config("abstractive.kind = \"external\" requires abstractive.endpoint");
    return cfg;
}

// One seed to rule them all: the CLI --seed flag overrides every module seed.
inline void apply_seed_override(PipelineConfig& cfg, std::uint64_t seed) {
    cfg.embedding.seed = seed;
    cfg.label_model.seed = seed;
    cfg.svm.hyperparams.seed = seed;
}

inline nlohmann::ordered_json config_to_canonical_json(const PipelineConfig& cfg) {
    nlohmann::ordered_json j;
    j["format"] = "cqasum-config/1";
    j["paths"] = {{"corpus", cfg.paths.corpus},
                  {"rules", cfg.paths.rules},
                  {"hypotheses", cfg.paths.hypotheses},
                  {"abbreviations", cfg.paths.abbreviations},
                  {"out_dir", cfg.paths.out_dir},
                  {"embedding_cache", cfg.paths.embedding_cache}};
    j["embedding"] = {{"kind", cfg.embedding.kind},
                      {"model_id", cfg.embedding.model_id},
                      {"dimension", cfg.embedding.dimension},
                      {"endpoint", cfg.embedding.endpoint},
                      {"seed", cfg.embedding.seed}};
    j["zsl"] = {{"kind", cfg.zsl.kind},
                {"model_id", cfg.zsl.model_id},
                {"endpoint", cfg.zsl.endpoint}};
    j["cascade"] = {{"svm_margin_threshold", cfg.cascade.svm_margin_threshold},
                    {"svm_enabled", cfg.cascade.svm_enabled},
                    {"zsl_enabled", cfg.cascade.zsl_enabled}};
    j["label_model"] = {{"epochs", cfg.label_model.epochs},
                        {"seed", cfg.label_model.seed},
                        {"convergence_tol", cfg.label_model.convergence_tol}};
    j["svm"] = {{"lambda", cfg.svm.hyperparams.lambda},
                {"epochs", cfg.svm.hyperparams.epochs},
                {"seed", cfg.svm.hyperparams.seed},
                {"train_source", cfg.svm.train_source}};
    auto backend = [](const SummarizerBackendConfig& b, const GenerationParams& p) {
        nlohmann::ordered_json out;
        out["kind"] = b.kind;
        out["model_id"] = b.model_id;
        out["endpoint"] = b.endpoint;
        out["params"] = generation_params_to_json(p);
        return out;
    };
    j["extractive"] = backend(cfg.extractive_backend, cfg.extractive_params);
    j["abstractive"] = backend(cfg.abstractive_backend, cfg.abstractive_params);
    j["abstractive"]["enabled"] = cfg.summarize.abstractive_enabled;
    j["summarize"] = {{"include_context", cfg.summarize.include_context}};
    j["metrics"] = {{"csv", cfg.metrics.csv},
                    {"factuality_file", cfg.metrics.factuality_file},
                    {"weights", cfg.metrics.avg_weights}};
    return j;
}

inline std::string config_fingerprint(const PipelineConfig& cfg) {
    return sha256_hex(config_to_canonical_json(cfg).dump());
}

} // namespace cqasum

#endif // CQASUM_CONFIG_HPP
