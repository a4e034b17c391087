#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "patentsum/abstractive.hpp"
#include "patentsum/corpus.hpp"
#include "patentsum/embed.hpp"
#include "patentsum/evaluate.hpp"
#include "patentsum/extractive.hpp"
#include "patentsum/retrieve.hpp"
#include "patentsum/segmenter.hpp"

namespace patentsum {

namespace fs = std::filesystem;

/// Every knob of an experiment. Keys in config files are `section.key`
/// (see apply_setting for the full list).
struct RunConfig {
    fs::path corpus;
    std::string corpus_format = "jsonl";
    fs::path topics;
    fs::path qrels;
    fs::path dictionary;  // empty: seed dictionary
    fs::path segments;    // empty: segment on the fly
    std::vector<fs::path> summaries;
    fs::path index;       // empty: <out>/index.jsonl

    std::string representation = "claims";
    std::size_t cap = kDefaultIndexCap;

    std::string backend = "hashed";  // hashed | remote
    std::string endpoint;
    std::size_t dim = 1024;
    int retry_attempts = 3;
    int retry_backoff_ms = 250;

    std::vector<std::string> strategies;
    std::size_t k = 100;
    bool exclude_topic_doc = true;

    MetricSet metrics;

    std::string method = "extractive";  // extractive | abstractive
    std::string extractive_variant = "sentence";  // sentence | bert-class
    std::string source = "description";
    std::string profile = "default";
    double length_penalty = 0.8;
    std::size_t target_words = 150;
    std::optional<std::size_t> clusters;
    bool fallback = true;
    double tokens_per_word = 1.35;

    std::string reference = "summary_segment";  // intrinsic evaluation reference

    std::size_t summary_min_words = 150, summary_max_words = 250;
    std::size_t source_min_words = 700, source_max_words = 800;

    fs::path out = "out";
    std::uint64_t seed = 42;

    fs::path index_path() const { return index.empty() ? out / "index.jsonl" : index; }
    RetryPolicy retry() const;
};

/// Reads `key = value` lines (`#` comments). Throws InputError with the line number on bad lines.
std::map<std::string, std::string> read_config_file(const fs::path& path);

/// Sets one key; throws InputError for unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& settings);
const std::vector<std::string>& config_keys();

std::unique_ptr<EmbeddingBackend> make_embedding_backend(const RunConfig& cfg);
/// Null when no endpoint is configured.
std::unique_ptr<GenerationBackend> make_generation_backend(const RunConfig& cfg);

HeadingDictionary load_dictionary(const RunConfig& cfg);
Corpus load_corpus(const RunConfig& cfg, std::ostream& log);

nlohmann::json segments_to_json(const std::string& doc_id, const DescriptionSegments& seg);
DescriptionSegments segments_from_json(const nlohmann::json& j);
void write_segment_store(const fs::path& path, const Corpus& corpus, const SegmentStore& store);
SegmentStore read_segment_store(const fs::path& path);

/// Segment store from cfg.segments when given, else computed from the corpus.
SegmentStore load_or_segment(const RunConfig& cfg, const Corpus& corpus);

struct IngestStats {
    std::size_t documents = 0;
    std::size_t errors = 0;
};
IngestStats cmd_ingest(const RunConfig& cfg, std::ostream& log);

struct SegmentStats {
    std::size_t documents = 0;
    std::size_t with_summary = 0;
    double coverage = 0.0;
    fs::path output;
};
SegmentStats cmd_segment(const RunConfig& cfg, std::ostream& log);

struct SummarizeStats {
    std::size_t generated = 0;
    std::vector<std::string> skipped;
    fs::path output;
};
/// Text for a summary source tag, or nullopt when the document lacks it.
std::optional<std::string> source_text(const PatentDocument& doc, const DescriptionSegments& seg,
                                       std::string_view source);
SummarizeStats cmd_summarize(const RunConfig& cfg, std::ostream& log);

FinetuneSet cmd_build_finetune_set(const RunConfig& cfg, std::ostream& log);

IndexBuild cmd_index(const RunConfig& cfg, std::ostream& log);

SearchResult cmd_search(const RunConfig& cfg, const std::string& query, std::ostream& log);

/// One run file per strategy under <out>/runs: <name>.run plus <name>.meta.json.
std::vector<fs::path> cmd_run(const RunConfig& cfg, std::ostream& log);

/// File-system-safe name for a strategy.
std::string strategy_file_stem(const std::string& strategy);

/// Evaluates each run (reading its .meta.json sidecar when present) and writes
/// <out>/eval/<stem>.json.
std::vector<fs::path> cmd_eval(const RunConfig& cfg, const std::vector<fs::path>& runs, std::ostream& log);

/// Intrinsic evaluation of cfg.summaries against cfg.reference. Writes <out>/eval/intrinsic.json.
std::vector<IntrinsicRow> cmd_eval_summaries(const RunConfig& cfg, std::ostream& log);

/// Renders extrinsic reports into <out>/report.sections.{tsv,txt} and
/// <out>/report.summaries.{tsv,txt}, and intrinsic rows into report.intrinsic.*.
std::vector<fs::path> cmd_report(const RunConfig& cfg, const std::vector<fs::path>& reports, std::ostream& log);

}  // namespace patentsum
