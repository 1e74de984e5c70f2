#ifndef CQASUM_EMBEDDING_HPP
#define CQASUM_EMBEDDING_HPP

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqasum/error.hpp"
#include "cqasum/hashing.hpp"
#include "cqasum/text.hpp"

namespace cqasum {

// Unit-L2 sentence embedding. Stored as 32-bit floats; all similarity math
// happens in double.
struct EmbeddingVector {
    std::vector<float> values;

    std::size_t dimension() const { return values.size(); }
};

inline double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.values.size() != b.values.size()) throw_data("embedding dimension mismatch in dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        s += static_cast<double>(a.values[i]) * static_cast<double>(b.values[i]);
    return s;
}

inline double l2_norm(const EmbeddingVector& v) {
    double s = 0.0;
    for (float x : v.values) s += static_cast<double>(x) * static_cast<double>(x);
    return std::sqrt(s);
}

// cos(a,b) with explicit norms so that bitwise-identical vectors score
// exactly 1 even when their stored norm is 1 only to float precision.
inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

inline EmbeddingVector normalized(std::vector<double> acc) {
    double norm = 0.0;
    for (double x : acc) norm += x * x;
    norm = std::sqrt(norm);
    EmbeddingVector out;
    out.values.resize(acc.size());
    if (norm < 1e-12) {
        // degenerate input: basis vector e0
        out.values.assign(acc.size(), 0.0f);
        out.values[0] = 1.0f;
        return out;
    }
    for (std::size_t i = 0; i < acc.size(); ++i)
        out.values[i] = static_cast<float>(acc[i] / norm);
    return out;
}

struct EmbeddingBackendConfig {
    std::string kind = "stub"; // "stub" | "external"
    std::string model_id = "all-MiniLM-L6-v2";
    int dimension = 384;
    std::string endpoint;     // external backend URL, e.g. http://host:port
    std::string cache_dir;    // empty disables the cache
    std::uint64_t seed = 7;   // stub only
};

// Deterministic offline embedding: each lowercased word maps to a fixed
// seeded pseudo-random unit vector (splitmix64 + Box-Muller, so the result
// does not depend on the standard library's distributions); word vectors are
// summed and the sum normalized. Empty or whitespace-only text maps to e0.
inline EmbeddingVector stub_embed(const std::string& text, int dimension, std::uint64_t seed) {
    if (dimension < 8) throw_config("stub embedding dimension must be >= 8");
    std::vector<double> acc(static_cast<std::size_t>(dimension), 0.0);
    for (const std::string& word : whitespace_tokenize(ascii_lower(text))) {
        SplitMix64 rng(seed ^ (fnv1a64(word) * 0x9e3779b97f4a7c15ull));
        std::vector<double> wv(acc.size());
        for (std::size_t i = 0; i < wv.size(); i += 2) {
            double u1 = rng.next_double();
            double u2 = rng.next_double();
            if (u1 < 1e-300) u1 = 1e-300;
            const double r = std::sqrt(-2.0 * std::log(u1));
            wv[i] = r * std::cos(2.0 * M_PI * u2);
            if (i + 1 < wv.size()) wv[i + 1] = r * std::sin(2.0 * M_PI * u2);
        }
        double norm = 0.0;
        for (double x : wv) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-12) continue;
        for (std::size_t i = 0; i < wv.size(); ++i) acc[i] += wv[i] / norm;
    }
    return normalized(std::move(acc));
}

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
    virtual const EmbeddingBackendConfig& config() const = 0;
};

class StubEmbeddingBackend : public EmbeddingBackend {
public:
    explicit StubEmbeddingBackend(EmbeddingBackendConfig cfg) : cfg_(std::move(cfg)) {
        if (cfg_.dimension < 8) throw_config("stub embedding dimension must be >= 8");
    }

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override {
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (const auto& t : texts) out.push_back(stub_embed(t, cfg_.dimension, cfg_.seed));
        return out;
    }

    const EmbeddingBackendConfig& config() const override { return cfg_; }

private:
    EmbeddingBackendConfig cfg_;
};

// Content-addressed on-disk cache: manifest.json records model_id and
// dimension; vectors live in 256 shard files keyed by the first digest byte.
// Shard record layout: 32 raw digest bytes + dimension little-endian f32.
class EmbeddingCache {
public:
    EmbeddingCache(std::string dir, std::string model_id, int dimension)
        : dir_(std::move(dir)), model_id_(std::move(model_id)), dimension_(dimension) {
        namespace fs = std::filesystem;
        fs::create_directories(dir_);
        const fs::path manifest = fs::path(dir_) / "manifest.json";
        if (fs::exists(manifest)) {
            std::ifstream in(manifest);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw_data("embedding cache manifest corrupt: " + std::string(e.what()));
            }
            if (j.value("model_id", "") != model_id_ || j.value("dimension", -1) != dimension_)
                throw_data("embedding cache at " + dir_ + " was built for model '" +
                           j.value("model_id", "") + "' dim " +
                           std::to_string(j.value("dimension", -1)) + ", requested '" + model_id_ +
                           "' dim " + std::to_string(dimension_));
        } else {
            std::ofstream out(manifest);
            nlohmann::ordered_json j;
            j["model_id"] = model_id_;
            j["dimension"] = dimension_;
            out << j.dump(2) << '\n';
        }
        load_shards();
    }

    std::optional<EmbeddingVector> get(const std::string& hex_digest) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = entries_.find(hex_digest);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    void put(const std::string& hex_digest, const EmbeddingVector& vec) {
        if (static_cast<int>(vec.dimension()) != dimension_)
            throw_data("embedding cache dimension mismatch on put");
        std::lock_guard<std::mutex> lock(mu_);
        if (entries_.count(hex_digest)) return;
        entries_[hex_digest] = vec;
        const std::string shard = shard_path(hex_digest);
        std::ofstream out(shard, std::ios::binary | std::ios::app);
        if (!out) throw_data("cannot write embedding cache shard: " + shard);
        out.write(reinterpret_cast<const char*>(digest_bytes(hex_digest).data()), 32);
        out.write(reinterpret_cast<const char*>(vec.values.data()),
                  static_cast<std::streamsize>(vec.values.size() * sizeof(float)));
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return entries_.size();
    }

private:
    static std::vector<unsigned char> digest_bytes(const std::string& hex) {
        if (hex.size() != 64) throw_data("embedding cache key must be a sha256 hex digest");
        std::vector<unsigned char> out(32);
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            throw_data("invalid hex digit in cache key");
        };
        for (std::size_t i = 0; i < 32; ++i)
            out[i] = static_cast<unsigned char>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
        return out;
    }

    static std::string digest_hex(const unsigned char* bytes) {
        static const char* hex = "0123456789abcdef";
        std::string out;
        out.reserve(64);
        for (std::size_t i = 0; i < 32; ++i) {
            out.push_back(hex[bytes[i] >> 4]);
            out.push_back(hex[bytes[i] & 0xf]);
        }
        return out;
    }

    std::string shard_path(const std::string& hex_digest) const {
        return (std::filesystem::path(dir_) / (hex_digest.substr(0, 2) + ".bin")).string();
    }

    void load_shards() {
        namespace fs = std::filesystem;
        const std::size_t record = 32 + static_cast<std::size_t>(dimension_) * sizeof(float);
        for (const auto& entry : fs::directory_iterator(dir_)) {
            if (entry.path().extension() != ".bin") continue;
            std::ifstream in(entry.path(), std::ios::binary);
            std::vector<char> buf(record);
            while (in.read(buf.data(), static_cast<std::streamsize>(record))) {
                EmbeddingVector vec;
                vec.values.resize(static_cast<std::size_t>(dimension_));
                std::memcpy(vec.values.data(), buf.data() + 32,
                            vec.values.size() * sizeof(float));
                entries_[digest_hex(reinterpret_cast<unsigned char*>(buf.data()))] =
                    std::move(vec);
            }
        }
    }

    std::string dir_;
    std::string model_id_;
    int dimension_;
    mutable std::mutex mu_;
    std::map<std::string, EmbeddingVector> entries_;
};

// Batch embed with cache. Output order matches input order; duplicate texts
// hit the cache after the first computation; cached entries bypass the
// backend entirely. Backend results are unit-normalized before caching.
inline std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts,
                                                EmbeddingBackend& backend,
                                                EmbeddingCache* cache = nullptr) {
    const auto& cfg = backend.config();
    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::size_t> miss_index;
    std::vector<std::string> miss_texts;
    std::map<std::string, std::size_t> pending; // digest -> first miss slot
    std::vector<std::string> digests(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        digests[i] = sha256_hex(texts[i]);
        if (cache) {
            if (auto hit = cache->get(digests[i])) {
                out[i] = std::move(*hit);
                continue;
            }
        }
        if (auto it = pending.find(digests[i]); it != pending.end()) {
            // duplicate of an earlier miss in this batch; fill after fetch
            miss_index.push_back(i);
            continue;
        }
        pending[digests[i]] = miss_texts.size();
        miss_index.push_back(i);
        miss_texts.push_back(texts[i]);
    }
    if (!miss_texts.empty()) {
        std::vector<EmbeddingVector> fetched = backend.embed(miss_texts);
        if (fetched.size() != miss_texts.size())
            throw_backend("embedding backend returned " + std::to_string(fetched.size()) +
                          " vectors for " + std::to_string(miss_texts.size()) + " texts");
        for (auto& v : fetched) {
            if (static_cast<int>(v.dimension()) != cfg.dimension)
                throw_backend("embedding backend returned dimension " +
                              std::to_string(v.dimension()) + ", config says " +
                              std::to_string(cfg.dimension));
            std::vector<double> acc(v.values.begin(), v.values.end());
            v = normalized(std::move(acc));
        }
        for (std::size_t i : miss_index) {
            const auto slot = pending.at(digests[i]);
            out[i] = fetched[slot];
        }
        if (cache) {
            for (const auto& [digest, slot] : pending) cache->put(digest, fetched[slot]);
        }
    }
    return out;
}

} // namespace cqasum

#endif // CQASUM_EMBEDDING_HPP
