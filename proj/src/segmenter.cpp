#include "patentsum/segmenter.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>

#include "patentsum/error.hpp"
#include "patentsum/text.hpp"

namespace patentsum {

namespace {

bool is_roman_numeral(std::string_view token) {
    if (token.empty() || token.size() > 4) return false;
    return token.find_first_not_of("IVXLCDM") == std::string_view::npos;
}

bool is_number(std::string_view token) {
    return !token.empty() && token.find_first_not_of("0123456789") == std::string_view::npos;
}

SegmentLabel label_for(HeadingDictionary::Section section, const std::string& normalized) {
    switch (section) {
        case HeadingDictionary::Section::Summary: return SegmentLabel::Summary;
        case HeadingDictionary::Section::Background: return SegmentLabel::Background;
        case HeadingDictionary::Section::Other: break;
    }
    if (normalized.find("DRAWING") != std::string::npos || normalized.find("FIGURE") != std::string::npos) {
        return SegmentLabel::Drawings;
    }
    if (normalized.find("DETAILED DESCRIPTION") != std::string::npos ||
        normalized.find("EMBODIMENT") != std::string::npos) {
        return SegmentLabel::DetailedDescription;
    }
    return SegmentLabel::Other;
}

}  // namespace

std::string_view label_name(SegmentLabel label) {
    switch (label) {
        case SegmentLabel::Background: return "background";
        case SegmentLabel::Summary: return "summary";
        case SegmentLabel::BriefDescription: return "brief_description";
        case SegmentLabel::Drawings: return "drawings";
        case SegmentLabel::DetailedDescription: return "detailed_description";
        case SegmentLabel::Other: return "other";
    }
    return "other";
}

SegmentLabel parse_label(std::string_view name) {
    for (auto l : {SegmentLabel::Background, SegmentLabel::Summary, SegmentLabel::BriefDescription,
                   SegmentLabel::Drawings, SegmentLabel::DetailedDescription, SegmentLabel::Other}) {
        if (label_name(l) == name) return l;
    }
    throw InputError("unknown segment label '" + std::string(name) + "'");
}

std::string normalize_heading(std::string_view line) {
    std::string upper = to_upper(line);
    for (auto& c : upper) {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x80 && !std::isalnum(u)) c = ' ';
    }
    auto tokens = split_whitespace(upper);
    std::size_t first = 0;
    while (first + 1 < tokens.size() && (is_number(tokens[first]) || is_roman_numeral(tokens[first]))) ++first;

    std::string out;
    for (std::size_t i = first; i < tokens.size(); ++i) {
        if (!out.empty()) out.push_back(' ');
        out.append(tokens[i]);
    }
    return out;
}

HeadingDictionary HeadingDictionary::seed() {
    HeadingDictionary d;
    for (auto h : {"SUMMARY", "BRIEF SUMMARY", "SUMMARY OF THE INVENTION", "SUMMARY OF THE DISCLOSURE",
                   "SUMMARY OF EMBODIMENTS", "BRIEF SUMMARY OF THE INVENTION"}) {
        d.add(Section::Summary, h);
    }
    for (auto h : {"BACKGROUND", "BACKGROUND OF THE INVENTION", "BACKGROUND ART", "TECHNICAL FIELD",
                   "FIELD OF THE INVENTION"}) {
        d.add(Section::Background, h);
    }
    for (auto h : {"BRIEF DESCRIPTION OF THE DRAWINGS", "DETAILED DESCRIPTION",
                   "DETAILED DESCRIPTION OF THE INVENTION", "DESCRIPTION OF EMBODIMENTS"}) {
        d.add(Section::Other, h);
    }
    return d;
}

HeadingDictionary HeadingDictionary::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read heading dictionary '" + path.string() + "'");

    HeadingDictionary d;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = trim(std::string_view(line).substr(0, line.find('#')));
        if (body.empty()) continue;
        auto colon = body.find(':');
        if (colon == std::string_view::npos) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected 'section: HEADING'");
        }
        auto tag = trim(body.substr(0, colon));
        auto heading = trim(body.substr(colon + 1));
        Section section;
        if (tag == "summary") {
            section = Section::Summary;
        } else if (tag == "background") {
            section = Section::Background;
        } else if (tag == "other") {
            section = Section::Other;
        } else {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": unknown section '" +
                             std::string(tag) + "'");
        }
        try {
            d.add(section, heading);
        } catch (const InputError& e) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return d;
}

void HeadingDictionary::add(Section section, std::string_view heading) {
    auto norm = normalize_heading(heading);
    if (norm.empty()) throw InputError("empty heading");
    std::set<std::string>* target = section == Section::Summary      ? &summary_
                                    : section == Section::Background ? &background_
                                                                     : &other_;
    for (auto* set : {&summary_, &background_, &other_}) {
        if (set != target && set->count(norm)) {
            throw InputError("heading '" + norm + "' already belongs to another section");
        }
    }
    target->insert(std::move(norm));
}

void HeadingDictionary::merge(const HeadingDictionary& other) {
    for (const auto& h : other.summary_) add(Section::Summary, h);
    for (const auto& h : other.background_) add(Section::Background, h);
    for (const auto& h : other.other_) add(Section::Other, h);
}

std::optional<SegmentLabel> HeadingDictionary::classify(std::string_view line) const {
    auto t = trim(line);
    if (t.empty() || t.size() > max_heading_chars) return std::nullopt;
    auto norm = normalize_heading(t);
    if (summary_.count(norm)) return label_for(Section::Summary, norm);
    if (background_.count(norm)) return label_for(Section::Background, norm);
    if (other_.count(norm)) return label_for(Section::Other, norm);
    return std::nullopt;
}

std::string_view SegmentSpan::body(std::string_view description) const {
    return trim(description.substr(body_start, end - body_start));
}

std::vector<SegmentSpan> detect_headings(std::string_view description, const HeadingDictionary& dict) {
    std::vector<SegmentSpan> spans;
    if (description.empty()) return spans;

    std::size_t pos = 0;
    while (pos < description.size()) {
        auto nl = description.find('\n', pos);
        auto line_end = nl == std::string_view::npos ? description.size() : nl;
        auto line = description.substr(pos, line_end - pos);
        auto next = nl == std::string_view::npos ? description.size() : nl + 1;
        if (auto label = dict.classify(line)) {
            if (spans.empty() && pos > 0) {
                spans.push_back({SegmentLabel::Other, 0, 0, pos, {}});
            }
            if (!spans.empty()) spans.back().end = pos;
            spans.push_back({*label, pos, next, description.size(), std::string(trim(line))});
        }
        pos = next;
    }
    if (spans.empty()) spans.push_back({SegmentLabel::Other, 0, 0, description.size(), {}});
    return spans;
}

DescriptionSegments extract_segments(std::string_view description, const HeadingDictionary& dict) {
    DescriptionSegments seg;
    seg.spans = detect_headings(description, dict);

    for (const auto& span : seg.spans) {
        if (span.label == SegmentLabel::Background && !span.heading_text.empty()) {
            auto body = span.body(description);
            if (!body.empty()) seg.background = std::string(body);
            break;
        }
    }

    auto first = std::find_if(seg.spans.begin(), seg.spans.end(),
                              [](const SegmentSpan& s) { return s.label == SegmentLabel::Summary; });
    if (first == seg.spans.end()) return seg;

    std::string merged;
    std::size_t summary_end = 0;
    for (auto it = first; it != seg.spans.end() && it->label == SegmentLabel::Summary; ++it) {
        auto body = it->body(description);
        if (body.empty()) continue;
        if (!merged.empty()) merged += "\n\n";
        merged.append(body);
        summary_end = static_cast<std::size_t>(body.data() - description.data()) + body.size();
    }
    if (merged.empty()) return seg;

    seg.summary_segment = std::move(merged);
    seg.summary_end = summary_end;
    seg.brief_description = std::string(description.substr(0, summary_end));
    return seg;
}

bool is_dependent_claim(std::string_view text) {
    static const std::regex pattern(
        R"(\bclaims?\s+\d+|\bany\s+(one\s+)?of\s+(the\s+)?(preceding|previous)\s+claims|\baccording\s+to\s+claim|\bas\s+claimed\s+in)",
        std::regex::icase | std::regex::optimize);
    return std::regex_search(text.begin(), text.end(), pattern);
}

std::optional<Claim> extract_first_independent_claim(const std::vector<Claim>& claims) {
    for (const auto& claim : claims) {
        if (!is_dependent_claim(claim.text)) return claim;
    }
    return std::nullopt;
}

DescriptionSegments segment_document(const PatentDocument& doc, const HeadingDictionary& dict) {
    auto seg = extract_segments(doc.description, dict);
    seg.first_claim = extract_first_independent_claim(doc.claims);
    return seg;
}

FinetuneSet build_finetune_pairs(const Corpus& corpus, const HeadingDictionary& dict, WordRange summary_words,
                                 WordRange source_words) {
    if (summary_words.low > summary_words.high || source_words.low > source_words.high) {
        throw InputError("word ranges must satisfy low <= high");
    }
    FinetuneSet out;
    for (const auto& doc : corpus.documents()) {
        ++out.funnel.documents;
        auto seg = segment_document(doc, dict);
        if (!seg.summary_segment) continue;
        ++out.funnel.has_summary;
        if (!summary_words.contains(word_count(*seg.summary_segment))) continue;
        ++out.funnel.has_summary_in_range;
        if (!seg.first_claim) continue;
        ++out.funnel.has_first_claim;
        auto input = *seg.brief_description + " " + seg.first_claim->text;
        if (!source_words.contains(word_count(input))) continue;
        ++out.funnel.source_in_range;
        out.pairs.push_back({doc.doc_id, std::move(input), *seg.summary_segment});
    }
    return out;
}

}  // namespace patentsum
