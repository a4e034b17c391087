#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patentsum/embed.hpp"
#include "patentsum/summary.hpp"

namespace patentsum {

struct SentenceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Splits after `.`, `!` or `?` when followed by whitespace and then an
/// uppercase letter or digit, unless the `.` closes a known abbreviation
/// (FIG., U.S., e.g., ...). Sentences are trimmed of surrounding whitespace.
std::vector<SentenceSpan> sentence_spans(std::string_view text);
std::vector<std::string> split_sentences(std::string_view text);

const std::vector<std::string>& sentence_abbreviations();

struct ExtractiveConfig {
    std::size_t target_words = 150;
    std::optional<std::size_t> k_override;
    std::uint64_t seed = 42;
    std::size_t max_iters = 100;
    double tol = 1e-6;
    std::size_t embed_cap = 3000;
    std::string method = std::string(method::kExtractiveSentence);

    void validate() const;
};

/// k_override if set, else round(target_words / mean sentence length) clamped to [1, n].
std::size_t choose_k(std::span<const std::string> sentences, const ExtractiveConfig& config);

struct KMeansResult {
    std::vector<std::vector<double>> centroids;
    std::vector<std::size_t> assignment;  // point index -> cluster
    std::size_t iterations = 0;
};

/// Seeded k-means++ then Lloyd iterations (Euclidean) until the largest
/// centroid shift is below `tol` or `max_iters` is reached. Empty clusters are
/// re-seeded with the point farthest from its own centroid, so every cluster
/// ends non-empty. Throws std::invalid_argument for k == 0, k > n, or mixed dims.
KMeansResult kmeans(std::span<const EmbeddingVector> points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iters = 100, double tol = 1e-6);

/// Per cluster, the member with the highest cosine to the centroid (ties go to
/// the smaller index). Returned ascending.
std::vector<std::size_t> select_representatives(std::span<const EmbeddingVector> sentences,
                                                const std::vector<std::vector<double>>& centroids,
                                                const std::vector<std::size_t>& assignment);

struct ExtractiveResult {
    SummaryArtifact summary;
    std::vector<std::string> sentences;
    std::vector<std::size_t> selected;
    std::size_t k = 0;
};

/// Embeds every sentence with `backend`, clusters, and joins the centroid-
/// nearest sentences with single spaces in source order.
ExtractiveResult extractive_summarize(std::string_view text, EmbeddingBackend& backend,
                                      const ExtractiveConfig& config = {});

SummaryArtifact extractive_summary(std::string_view text, EmbeddingBackend& backend,
                                   const ExtractiveConfig& config = {});

}  // namespace patentsum
