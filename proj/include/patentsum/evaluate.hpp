#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "patentsum/corpus.hpp"
#include "patentsum/embed.hpp"
#include "patentsum/retrieve.hpp"

namespace patentsum {

// ---------------------------------------------------------------------------
// Summary quality
// ---------------------------------------------------------------------------

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Lowercase, split on anything non-alphanumeric. No stemming, no stopwords.
std::vector<std::string> rouge_tokens(std::string_view text);

/// Clipped n-gram overlap. Either side without n-grams scores 0 everywhere.
RougeScore rouge_n(std::string_view candidate, std::string_view reference, std::size_t n);

/// LCS over the full token sequences.
RougeScore rouge_l(std::string_view candidate, std::string_view reference);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

struct SimilarityScore {
    double value = 0.0;
    std::string backend_id;
};

SimilarityScore semantic_similarity(std::string_view candidate, std::string_view reference, EmbeddingBackend& backend,
                                    std::size_t cap = kDefaultIndexCap);

// ---------------------------------------------------------------------------
// Retrieval effectiveness
// ---------------------------------------------------------------------------

/// |top-k ∩ relevant| / k; the denominator stays k when fewer results exist.
double precision_at_k(std::span<const std::string> ranked, const std::set<std::string>& relevant, std::size_t k);
/// |top-k ∩ relevant| / |relevant|.
double recall_at_k(std::span<const std::string> ranked, const std::set<std::string>& relevant, std::size_t k);
/// (1/|relevant|) · Σ_{i ≤ K, ranked[i] relevant} P@i.
double average_precision(std::span<const std::string> ranked, const std::set<std::string>& relevant,
                         std::size_t cutoff);

struct MetricSet {
    std::size_t map_cutoff = 100;
    std::vector<std::size_t> precision_cutoffs{5, 10, 30};
    std::vector<std::size_t> recall_cutoffs{5, 10, 30};

    /// "MAP@100", "P@5", ..., "R@30" in table order.
    std::vector<std::string> names() const;
};

struct TopicMetrics {
    std::string topic_id;
    std::map<std::string, double> values;
};

struct MetricReport {
    std::string strategy;
    std::vector<std::string> metric_names;
    std::vector<TopicMetrics> per_topic;
    std::map<std::string, double> mean;
    std::size_t evaluated = 0;
    std::vector<std::string> skipped_topics;  // skipped upstream or lacking positive judgments
    std::vector<std::string> warnings;
    std::optional<double> avg_query_words;

    nlohmann::json to_json() const;
    static MetricReport from_json(const nlohmann::json& j);
};

/// Binary relevance (grade > 0). Topics come from the run; each must be in
/// `qrels` or in `skipped`, otherwise InputError lists the offenders.
/// Means are over evaluated topics only.
MetricReport evaluate_run(const RunTable& run, const QrelsTable& qrels, const MetricSet& metrics,
                          const std::set<std::string>& skipped = {}, std::string strategy = {});

// ---------------------------------------------------------------------------
// Report tables
// ---------------------------------------------------------------------------

struct RenderedTable {
    std::string tsv;   // machine-readable, tab-separated, values as fractions
    std::string text;  // aligned, percentages, best per group marked with '*'
};

struct ExtrinsicRow {
    std::string source;
    std::string method;  // empty for plain section queries
    MetricReport report;
};

/// Columns: Source, Method, Avg. #words, MAP@K, P@.., R@.. . Section rows
/// (empty Method) form one group; generated rows are grouped by Source. The
/// best value in every metric column of a group is marked.
RenderedTable render_extrinsic(std::span<const ExtrinsicRow> rows, const MetricSet& metrics);

struct IntrinsicRow {
    std::string reference;
    std::string method;
    std::string input;
    double avg_words = 0.0;
    double rouge1 = 0.0;
    double rouge_l = 0.0;
    double semantic_similarity = 0.0;
};

/// Columns: Reference, Method, Input, Avg. #words, Rouge-1, Rouge-L, Semantic Similarity.
/// Groups by Reference.
RenderedTable render_intrinsic(std::span<const IntrinsicRow> rows);

/// "27.72%"
std::string format_percent(double fraction);

/// Source/Method labels for a strategy name, e.g. claims -> ("Claims", ""),
/// generated:abstractive:claims:adjusted -> ("Claims", "Abstractive (adjusted)").
std::pair<std::string, std::string> strategy_labels(std::string_view strategy);

}  // namespace patentsum
