#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "patentsum/corpus.hpp"
#include "patentsum/embed.hpp"
#include "patentsum/segmenter.hpp"
#include "patentsum/summary.hpp"

namespace patentsum {

inline constexpr std::size_t kDefaultIndexCap = 3000;

enum class StrategyKind {
    Abstract,
    Claims,
    Description,
    BriefDescription,
    SummarySegment,
    SummaryPlusFirstClaim,
    BriefPlusFirstClaim,
    Generated,
};

/// How a topic patent becomes a query string.
/// Names: abstract, claims, description, brief_description, summary_segment,
/// summary_plus_first_claim, brief_plus_first_claim, and
/// generated:<method>:<source>[:<profile>] for registered summaries.
struct QueryStrategy {
    StrategyKind kind = StrategyKind::Claims;
    std::string method;
    std::string source;
    std::optional<std::string> profile;

    static QueryStrategy parse(std::string_view name);
    std::string name() const;
    /// Key into SummaryRegistry; only meaningful for generated strategies.
    std::string registry_key() const;
};

/// Section text used to represent documents in the index: claims, abstract or description.
std::string representation_text(const PatentDocument& doc, std::string_view representation);

struct IndexEntry {
    std::string doc_id;
    EmbeddingVector vector;
};

struct VectorIndex {
    std::vector<IndexEntry> entries;
    std::string representation = "claims";
    std::size_t cap = kDefaultIndexCap;
    std::string backend_id;
    std::size_t dim = 0;

    std::size_t size() const { return entries.size(); }
};

struct IndexBuild {
    VectorIndex index;
    std::vector<std::string> warnings;
};

/// One entry per document with a non-empty (and non-zero-embedding)
/// representation. Texts are capped to `cap` tokens before embedding.
/// Throws InputError on an empty corpus; backend errors propagate.
IndexBuild build_index(const Corpus& corpus, std::string_view representation, std::size_t cap,
                       EmbeddingBackend& backend, std::size_t batch_size = 64);

void write_index(const std::filesystem::path& path, const VectorIndex& index);
VectorIndex read_index(const std::filesystem::path& path);

struct FormulatedQuery {
    std::optional<std::string> text;
    std::string skip_reason;  // set when text is absent
};

FormulatedQuery formulate_query(const PatentDocument& doc, const DescriptionSegments& segments,
                                const QueryStrategy& strategy, const SummaryRegistry& summaries);

struct Hit {
    std::string doc_id;
    double score = 0.0;
    std::size_t rank = 0;
};

struct SearchResult {
    std::vector<Hit> hits;
    bool backend_mismatch = false;
};

/// Exact cosine scan over every entry; top-k by score desc, ties by doc_id asc.
/// The query is capped to index.cap tokens. Throws InputError on an empty
/// query or k == 0.
SearchResult search(const VectorIndex& index, std::string_view query, std::size_t k,
                    const std::optional<std::string>& exclude, EmbeddingBackend& backend);

/// Same ranking rule applied to an already-embedded query.
std::vector<Hit> rank_entries(const VectorIndex& index, const EmbeddingVector& query, std::size_t k,
                              const std::optional<std::string>& exclude);

struct RunRow {
    std::string topic_id;
    std::string doc_id;
    std::size_t rank = 0;
    double score = 0.0;
    std::string tag;
};

struct RunTable {
    std::vector<RunRow> rows;

    /// topic -> doc_ids in rank order
    std::map<std::string, std::vector<std::string>> rankings() const;
};

/// TREC run format: `topic_id Q0 doc_id rank score tag`, score with 6 decimals.
std::string format_run(const RunTable& run);
void write_run(const std::filesystem::path& path, const RunTable& run);
RunTable read_run(const std::filesystem::path& path);

struct SkippedTopic {
    std::string topic_id;
    std::string reason;
};

/// Sidecar for a run: what was skipped and which queries were issued.
struct RunReport {
    std::string strategy;
    std::string tag;
    std::vector<SkippedTopic> skipped;
    std::map<std::string, std::string> queries;  // topic -> query text as issued (before capping)
    std::map<std::string, std::size_t> query_words;
    bool backend_mismatch = false;
    std::vector<std::string> warnings;

    nlohmann::json to_json(bool include_queries = false) const;
    static RunReport from_json(const nlohmann::json& j);
};

struct RunOptions {
    std::size_t k = 100;
    bool exclude_topic_doc = true;
};

using SegmentStore = std::unordered_map<std::string, DescriptionSegments>;

SegmentStore segment_corpus(const Corpus& corpus, const HeadingDictionary& dict);

struct RunOutput {
    RunTable table;
    RunReport report;
};

/// Formulate, search and collect rows for every topic. Topics whose document
/// is missing or that lack the needed section are skipped and reported.
RunOutput run_strategy(const TopicSet& topics, const Corpus& corpus, const SegmentStore& segments,
                       const SummaryRegistry& summaries, const VectorIndex& index, const QueryStrategy& strategy,
                       EmbeddingBackend& backend, const RunOptions& options = {});

}  // namespace patentsum
