#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace patentsum {

struct Claim {
    int number = 1;
    std::string text;

    bool operator==(const Claim&) const = default;
};

struct PatentDocument {
    std::string doc_id;
    std::string title;
    std::string abstract_text;
    std::vector<Claim> claims;
    std::string description;
    std::vector<std::string> cpc_codes;
    std::optional<std::string> filing_date;

    /// All claim texts in order, separated by single newlines.
    std::string claims_text() const;

    bool operator==(const PatentDocument&) const = default;
};

/// A record-level problem found while reading an input file.
struct IngestError {
    std::string file;
    std::size_t line = 0;  // 1-based; 0 when the error is not tied to a line
    std::string message;
};

std::string to_string(const IngestError& e);

/// Supported record shapes for corpus files.
///  - `jsonl`: doc_id, title, abstract, claims, description, cpc_codes, filing_date
///  - `hupd`:  HUPD-style names (application_number, full_description, cpc_labels, ...);
///             generic names are accepted as fallbacks.
enum class CorpusFormat { Jsonl, Hupd };

CorpusFormat parse_corpus_format(std::string_view tag);
std::string_view format_tag(CorpusFormat format);

/// Immutable once loaded; lookups are safe from multiple readers.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<PatentDocument> docs, std::vector<IngestError> errors = {});

    const std::vector<PatentDocument>& documents() const { return docs_; }
    const std::vector<IngestError>& errors() const { return errors_; }
    std::size_t size() const { return docs_.size(); }
    bool empty() const { return docs_.empty(); }

    const PatentDocument* find(std::string_view doc_id) const;

private:
    std::vector<PatentDocument> docs_;
    std::vector<IngestError> errors_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

/// Splits a single claims string at lines that open with `N.` or `N)`.
/// Text before the first numbered line, if any, becomes claim 1.
std::vector<Claim> split_claims(std::string_view text);

/// Builds a document from one parsed record. Throws InputError on shape problems.
PatentDocument document_from_json(const nlohmann::json& record, CorpusFormat format);
nlohmann::json document_to_json(const PatentDocument& doc);

/// Reads a file or every `*.jsonl` / `*.json` file in a directory (sorted by name).
/// Throws InputError if the path cannot be read; record problems are collected.
Corpus ingest_corpus(const std::filesystem::path& path, CorpusFormat format);

void write_corpus(const std::filesystem::path& path, const std::vector<PatentDocument>& docs);

struct Topic {
    std::string topic_id;
    std::string doc_id;
};

struct TopicSet {
    std::vector<Topic> topics;
    std::vector<IngestError> errors;
};

TopicSet ingest_topics(const std::filesystem::path& path);

/// Topics whose document is not in the corpus. They stay in the set; callers warn.
std::vector<Topic> missing_topic_documents(const TopicSet& topics, const Corpus& corpus);

class QrelsTable {
public:
    /// Returns false (and leaves the table unchanged) if the pair already exists.
    bool add(const std::string& topic_id, const std::string& doc_id, int grade);

    std::optional<int> grade(const std::string& topic_id, const std::string& doc_id) const;
    /// Documents with grade > 0.
    std::set<std::string> relevant(const std::string& topic_id) const;
    bool has_topic(const std::string& topic_id) const { return judgments_.count(topic_id) > 0; }
    std::vector<std::string> topics() const;
    std::size_t size() const;

    const std::map<std::string, std::map<std::string, int>>& judgments() const { return judgments_; }

    std::vector<IngestError> errors;

private:
    std::map<std::string, std::map<std::string, int>> judgments_;
};

/// TREC qrels: `topic_id 0 doc_id grade`. Throws InputError when the file holds
/// no judgments at all; topics without any positive grade are reported in `errors`.
QrelsTable ingest_qrels(const std::filesystem::path& path);

}  // namespace patentsum
