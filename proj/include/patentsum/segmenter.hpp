#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "patentsum/corpus.hpp"

namespace patentsum {

enum class SegmentLabel { Background, Summary, BriefDescription, Drawings, DetailedDescription, Other };

std::string_view label_name(SegmentLabel label);
SegmentLabel parse_label(std::string_view name);

/// Uppercase, drop leading numbering (digits or roman numerals), turn
/// punctuation into spaces and collapse whitespace.
std::string normalize_heading(std::string_view line);

/// Headings that open description segments. Entries are stored normalized and
/// the three sets are pairwise disjoint.
class HeadingDictionary {
public:
    enum class Section { Summary, Background, Other };

    /// Conventional US headings.
    static HeadingDictionary seed();

    /// Plain-text config: one `summary:|background:|other: HEADING` per line,
    /// `#` comments. Throws InputError for a missing file or bad line.
    static HeadingDictionary load(const std::filesystem::path& path);

    /// Throws InputError if the entry already sits in a different section.
    void add(Section section, std::string_view heading);
    void merge(const HeadingDictionary& other);

    /// Label for a raw line, or nullopt if it is not a heading.
    std::optional<SegmentLabel> classify(std::string_view line) const;

    const std::set<std::string>& summary_headings() const { return summary_; }
    const std::set<std::string>& background_headings() const { return background_; }
    const std::set<std::string>& other_headings() const { return other_; }

    static constexpr std::size_t max_heading_chars = 120;

private:
    std::set<std::string> summary_;
    std::set<std::string> background_;
    std::set<std::string> other_;
};

struct SegmentSpan {
    SegmentLabel label = SegmentLabel::Other;
    std::size_t start = 0;       // heading line start (or 0 for the leading span)
    std::size_t body_start = 0;  // first character after the heading line
    std::size_t end = 0;         // exclusive
    std::string heading_text;    // original heading line, empty for the leading span

    /// Body text with surrounding whitespace trimmed.
    std::string_view body(std::string_view description) const;
};

struct DescriptionSegments {
    std::vector<SegmentSpan> spans;
    std::optional<std::string> summary_segment;
    std::optional<std::string> background;
    std::optional<std::string> brief_description;
    std::optional<Claim> first_claim;
    std::size_t summary_end = 0;  // end offset of the summary text; brief_description == description[0, summary_end)
};

/// Spans tile [0, description.size()) exactly. Empty description gives no spans.
std::vector<SegmentSpan> detect_headings(std::string_view description, const HeadingDictionary& dict);

/// Fills spans, summary_segment, background and brief_description. first_claim is left empty.
DescriptionSegments extract_segments(std::string_view description, const HeadingDictionary& dict);

/// Lowest-numbered claim with no dependency phrase (e.g. "of claim 3").
std::optional<Claim> extract_first_independent_claim(const std::vector<Claim>& claims);
bool is_dependent_claim(std::string_view text);

/// extract_segments plus the first independent claim.
DescriptionSegments segment_document(const PatentDocument& doc, const HeadingDictionary& dict);

struct WordRange {
    std::size_t low = 0;
    std::size_t high = 0;
    bool contains(std::size_t n) const { return n >= low && n <= high; }
};

struct FinetunePair {
    std::string doc_id;
    std::string input;
    std::string target;
};

/// Counts after each filter stage; each is ≤ the one before.
struct FinetuneFunnel {
    std::size_t documents = 0;
    std::size_t has_summary = 0;
    std::size_t has_summary_in_range = 0;
    std::size_t has_first_claim = 0;
    std::size_t source_in_range = 0;
};

struct FinetuneSet {
    std::vector<FinetunePair> pairs;
    FinetuneFunnel funnel;
};

/// Summary segment in `summary_words` and brief description + " " + first claim
/// in `source_words`, both inclusive. Pairs come out in corpus order.
FinetuneSet build_finetune_pairs(const Corpus& corpus, const HeadingDictionary& dict,
                                 WordRange summary_words = {150, 250},
                                 WordRange source_words = {700, 800});

}  // namespace patentsum
