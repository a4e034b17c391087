#include "patentsum/embed.hpp"

#include <cmath>
#include <stdexcept>

#include "patentsum/error.hpp"
#include "patentsum/text.hpp"

namespace patentsum {

namespace {

constexpr std::uint64_t kSignSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::string_view kHashVersion = "fnv1a64-v1";

void add_feature(std::vector<double>& acc, std::string_view feature) {
    const auto dim = acc.size();
    auto bucket = fnv1a64(feature) % dim;
    auto sign = (fnv1a64(feature, 0xcbf29ce484222325ULL ^ kSignSalt) & 1ULL) ? -1.0 : 1.0;
    acc[bucket] += sign;
}

}  // namespace

double l2_norm(std::span<const float> values) {
    double sum = 0.0;
    for (float v : values) sum += static_cast<double>(v) * v;
    return std::sqrt(sum);
}

void normalize(EmbeddingVector& v) {
    double norm = l2_norm(v.values);
    if (norm == 0.0) {
        v.normalized = false;
        return;
    }
    for (auto& x : v.values) x = static_cast<float>(x / norm);
    v.normalized = true;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("cosine: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()) + ")");
    }
    if (a.is_zero() || b.is_zero()) return 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) dot += static_cast<double>(a.values[i]) * b.values[i];
    return std::clamp(dot, -1.0, 1.0);
}

EmbeddingVector EmbeddingBackend::embed_one(const std::string& text) {
    auto out = embed(std::span<const std::string>(&text, 1));
    if (out.size() != 1) throw BackendError("backend " + id() + " returned " + std::to_string(out.size()) + " vectors for 1 text");
    return std::move(out.front());
}

std::vector<EmbeddingVector> embed_capped(EmbeddingBackend& backend, std::span<const std::string> texts,
                                          std::size_t cap) {
    std::vector<std::string> capped;
    capped.reserve(texts.size());
    for (const auto& t : texts) capped.push_back(cap_tokens(t, cap));
    return backend.embed(capped);
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

EmbeddingVector hashed_embed(std::string_view text, std::size_t dim, HashedFeatures features) {
    if (dim < 2) throw std::invalid_argument("hashed_embed: dim must be >= 2");
    std::vector<double> acc(dim, 0.0);
    auto tokens = alnum_tokens(text);
    for (const auto& t : tokens) add_feature(acc, t);
    if (features == HashedFeatures::UnigramsAndBigrams) {
        std::string bigram;
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            bigram.assign(tokens[i - 1]).append(" ").append(tokens[i]);
            add_feature(acc, bigram);
        }
    }

    EmbeddingVector v;
    v.backend_id = HashedBackend::make_id(dim, features);
    double norm = 0.0;
    for (double x : acc) norm += x * x;
    norm = std::sqrt(norm);
    v.values.resize(dim);
    if (norm == 0.0) {
        v.normalized = false;
        return v;
    }
    for (std::size_t i = 0; i < dim; ++i) v.values[i] = static_cast<float>(acc[i] / norm);
    return v;
}

HashedBackend::HashedBackend(std::size_t dim, HashedFeatures features)
    : dim_(dim), features_(features), id_(make_id(dim, features)) {
    if (dim < 2) throw std::invalid_argument("HashedBackend: dim must be >= 2");
}

std::string HashedBackend::make_id(std::size_t dim, HashedFeatures features) {
    std::string id = "hashed-";
    id += kHashVersion;
    id += features == HashedFeatures::Unigrams ? "-uni" : "-unibi";
    id += "-d" + std::to_string(dim);
    return id;
}

std::vector<EmbeddingVector> HashedBackend::embed(std::span<const std::string> texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(hashed_embed(t, dim_, features_));
    return out;
}

RemoteEmbeddingBackend::RemoteEmbeddingBackend(std::string endpoint, std::size_t cap, RetryPolicy retry,
                                               std::size_t batch_size)
    : endpoint_(std::move(endpoint)), cap_(cap), retry_(retry), batch_size_(std::max<std::size_t>(1, batch_size)) {}

std::string RemoteEmbeddingBackend::id() const {
    return model_.empty() ? "remote:" + endpoint_ : model_;
}

std::vector<EmbeddingVector> RemoteEmbeddingBackend::embed(std::span<const std::string> texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (std::size_t begin = 0; begin < texts.size(); begin += batch_size_) {
        auto batch = texts.subspan(begin, std::min(batch_size_, texts.size() - begin));
        nlohmann::json request = {{"op", "embed"}, {"texts", nlohmann::json::array()}, {"cap_tokens", cap_}};
        for (const auto& t : batch) request["texts"].push_back(cap_tokens(t, cap_));

        auto reply = post_json(endpoint_, "/v1/embed", request, retry_);
        try {
            auto model = reply.at("model").get<std::string>();
            auto dim = reply.at("dim").get<std::size_t>();
            const auto& vectors = reply.at("vectors");
            if (vectors.size() != batch.size()) {
                throw BackendError(endpoint_ + ": expected " + std::to_string(batch.size()) + " vectors, got " +
                                   std::to_string(vectors.size()));
            }
            if (dim_ != 0 && dim != dim_) {
                throw BackendError(endpoint_ + ": dimension changed from " + std::to_string(dim_) + " to " +
                                   std::to_string(dim));
            }
            dim_ = dim;
            model_ = model;
            for (const auto& row : vectors) {
                EmbeddingVector v;
                v.backend_id = model;
                v.values = row.get<std::vector<float>>();
                if (v.values.size() != dim) {
                    throw BackendError(endpoint_ + ": vector of length " + std::to_string(v.values.size()) +
                                       " in a batch of dim " + std::to_string(dim));
                }
                if (std::abs(l2_norm(v.values) - 1.0) > kServerNormTolerance) normalize(v);
                out.push_back(std::move(v));
            }
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(endpoint_ + ": malformed embed response: " + e.what());
        }
    }
    return out;
}

}  // namespace patentsum
