#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patentsum/http.hpp"

namespace patentsum {

/// Unit-norm embedding. The zero vector (produced for text with no features)
/// is the one exception and carries `normalized == false`.
struct EmbeddingVector {
    std::vector<float> values;
    std::string backend_id;
    bool normalized = true;

    std::size_t dim() const { return values.size(); }
    bool is_zero() const { return !normalized; }
};

/// Rescales to unit L2 norm. A zero vector is flagged non-normalized instead.
void normalize(EmbeddingVector& v);
double l2_norm(std::span<const float> values);

/// Dot product of unit vectors; 0.0 when either side is the zero sentinel.
/// Throws std::invalid_argument on dimension mismatch.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;

    /// Provenance tag. For remote backends this is the server-reported model
    /// name once known.
    virtual std::string id() const = 0;

    /// One vector per text, same order. Callers cap the texts beforehand.
    virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;

    EmbeddingVector embed_one(const std::string& text);
};

/// Caps every text to `cap` whitespace tokens, then embeds.
std::vector<EmbeddingVector> embed_capped(EmbeddingBackend& backend, std::span<const std::string> texts,
                                          std::size_t cap);

enum class HashedFeatures { Unigrams, UnigramsAndBigrams };

// Feature hashing: lowercase alphanumeric tokens give unigram features and
// "a b" bigram features. Each feature string f contributes
//   bucket = fnv1a64(f) mod dim
//   sign   = +1 if fnv1a64(f, basis ^ kSignSalt) is even, else -1
// and the accumulated vector is L2-normalized.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL);

EmbeddingVector hashed_embed(std::string_view text, std::size_t dim = 1024,
                             HashedFeatures features = HashedFeatures::UnigramsAndBigrams);

class HashedBackend : public EmbeddingBackend {
public:
    explicit HashedBackend(std::size_t dim = 1024, HashedFeatures features = HashedFeatures::UnigramsAndBigrams);

    std::string id() const override { return id_; }
    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;

    std::size_t dim() const { return dim_; }

    static std::string make_id(std::size_t dim, HashedFeatures features);

private:
    std::size_t dim_;
    HashedFeatures features_;
    std::string id_;
};

/// Client for the model server's `/v1/embed` endpoint.
/// Request:  {"op":"embed","texts":[...],"cap_tokens":N}
/// Response: {"model":"...","dim":D,"vectors":[[...],...]}
class RemoteEmbeddingBackend : public EmbeddingBackend {
public:
    RemoteEmbeddingBackend(std::string endpoint, std::size_t cap = 3000, RetryPolicy retry = {},
                           std::size_t batch_size = 32);

    std::string id() const override;
    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;

    const std::string& endpoint() const { return endpoint_; }

private:
    std::string endpoint_;
    std::size_t cap_;
    RetryPolicy retry_;
    std::size_t batch_size_;
    std::string model_;
    std::size_t dim_ = 0;
};

/// Renormalizes on the client when the server's norm is off by more than this.
inline constexpr double kServerNormTolerance = 1e-3;

}  // namespace patentsum
