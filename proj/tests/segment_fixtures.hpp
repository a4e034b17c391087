#pragma once

#include <optional>
#include <string>
#include <vector>

#include "patentsum/segmenter.hpp"

namespace testing {

/// A description assembled from parts, with the expected segmentation derived
/// from the construction rather than from the segmenter.
struct SegmentFixture {
    std::string name;
    std::string description;
    std::vector<std::pair<patentsum::SegmentLabel, std::string>> spans;  // label, trimmed body
    std::optional<std::string> summary;
    std::optional<std::string> brief;
};

struct Part {
    std::string heading;  // empty: leading text without a heading
    patentsum::SegmentLabel label;
    std::string body;
};

inline SegmentFixture make_fixture(std::string name, const std::vector<Part>& parts) {
    using patentsum::SegmentLabel;
    SegmentFixture f;
    f.name = std::move(name);
    std::vector<std::size_t> body_end;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) f.description += "\n";
        if (!parts[i].heading.empty()) f.description += parts[i].heading + "\n";
        f.description += parts[i].body;
        body_end.push_back(f.description.size());
        auto b = parts[i].body;
        while (!b.empty() && (b.back() == ' ' || b.back() == '\n')) b.pop_back();
        body_end.back() -= parts[i].body.size() - b.size();
        auto s = b.find_first_not_of(" \n");
        f.spans.emplace_back(parts[i].label, s == std::string::npos ? "" : b.substr(s));
    }
    std::size_t i = 0;
    while (i < parts.size() && parts[i].label != SegmentLabel::Summary) ++i;
    std::string merged;
    std::optional<std::size_t> end;
    for (; i < parts.size() && parts[i].label == SegmentLabel::Summary; ++i) {
        if (f.spans[i].second.empty()) continue;
        if (!merged.empty()) merged += "\n\n";
        merged += f.spans[i].second;
        end = body_end[i];
    }
    if (end) {
        f.summary = merged;
        f.brief = f.description.substr(0, *end);
    }
    return f;
}

inline std::vector<SegmentFixture> segmenter_fixtures() {
    using L = patentsum::SegmentLabel;
    const std::string a = "Prior systems were slow.";
    const std::string b = "The invention makes them fast. It uses a cache.";
    const std::string c = "FIG. 1 shows the system.";
    const std::string d = "In one embodiment, a cache stores results.";
    std::vector<SegmentFixture> out;

    // One fixture per seed summary heading, in the conventional order.
    for (const char* h : {"SUMMARY", "BRIEF SUMMARY", "SUMMARY OF THE INVENTION", "SUMMARY OF THE DISCLOSURE",
                          "SUMMARY OF EMBODIMENTS", "BRIEF SUMMARY OF THE INVENTION"}) {
        out.push_back(make_fixture(std::string("summary heading ") + h,
                                   {{"BACKGROUND", L::Background, a},
                                    {h, L::Summary, b},
                                    {"BRIEF DESCRIPTION OF THE DRAWINGS", L::Drawings, c},
                                    {"DETAILED DESCRIPTION", L::DetailedDescription, d}}));
    }
    // One per seed background heading.
    for (const char* h : {"BACKGROUND OF THE INVENTION", "BACKGROUND ART", "TECHNICAL FIELD", "FIELD OF THE INVENTION"}) {
        out.push_back(make_fixture(std::string("background heading ") + h,
                                   {{h, L::Background, a}, {"SUMMARY", L::Summary, b}}));
    }
    // Remaining other headings.
    out.push_back(make_fixture("detailed description of the invention",
                               {{"SUMMARY OF THE INVENTION", L::Summary, b},
                                {"DETAILED DESCRIPTION OF THE INVENTION", L::DetailedDescription, d}}));
    out.push_back(make_fixture("description of embodiments",
                               {{"BACKGROUND", L::Background, a},
                                {"SUMMARY", L::Summary, b},
                                {"DESCRIPTION OF EMBODIMENTS", L::DetailedDescription, d}}));

    // Ordering permutations.
    out.push_back(make_fixture("summary first",
                               {{"SUMMARY", L::Summary, b}, {"BACKGROUND", L::Background, a},
                                {"DETAILED DESCRIPTION", L::DetailedDescription, d}}));
    out.push_back(make_fixture("drawings before summary",
                               {{"BACKGROUND", L::Background, a},
                                {"BRIEF DESCRIPTION OF THE DRAWINGS", L::Drawings, c},
                                {"SUMMARY", L::Summary, b},
                                {"DETAILED DESCRIPTION", L::DetailedDescription, d}}));
    out.push_back(make_fixture("trailing summary",
                               {{"BACKGROUND", L::Background, a},
                                {"DETAILED DESCRIPTION", L::DetailedDescription, d},
                                {"SUMMARY OF THE INVENTION", L::Summary, b}}));
    out.push_back(make_fixture("only a summary", {{"SUMMARY", L::Summary, b}}));

    // Absent summary.
    out.push_back(make_fixture("no summary heading",
                               {{"BACKGROUND", L::Background, a},
                                {"DETAILED DESCRIPTION", L::DetailedDescription, d}}));
    out.push_back(make_fixture("no headings at all", {{"", L::Other, "1. Field\nSome text about things."}}));
    out.push_back(make_fixture("empty summary body",
                               {{"BACKGROUND", L::Background, a},
                                {"SUMMARY", L::Summary, ""},
                                {"DETAILED DESCRIPTION", L::DetailedDescription, d}}));

    // Multiple and decorated headings.
    out.push_back(make_fixture("two consecutive summary headings",
                               {{"Summary", L::Summary, "B."},
                                {"SUMMARY OF EMBODIMENTS", L::Summary, "B2."},
                                {"DETAILED DESCRIPTION", L::DetailedDescription, "D."}}));
    out.push_back(make_fixture("numbered and punctuated headings",
                               {{"1. Background:", L::Background, a},
                                {"II. Summary of the Invention", L::Summary, b},
                                {"III) Detailed Description.", L::DetailedDescription, d}}));
    out.push_back(make_fixture("leading text before first heading",
                               {{"", L::Other, "CROSS-REFERENCE to related applications is made here."},
                                {"SUMMARY", L::Summary, b},
                                {"DETAILED DESCRIPTION", L::DetailedDescription, d}}));
    out.push_back(make_fixture("heading word inside a paragraph",
                               {{"BACKGROUND", L::Background, "In summary, prior systems were slow.\nSUMMARY of results is below."},
                                {"SUMMARY", L::Summary, b}}));
    out.push_back(make_fixture("indented heading and padded body",
                               {{"   BACKGROUND   ", L::Background, "  " + a + "  "},
                                {"\tSUMMARY OF THE INVENTION", L::Summary, "\n" + b + "\n"},
                                {"DETAILED DESCRIPTION", L::DetailedDescription, d}}));
    out.push_back(make_fixture("mixed case headings with colons",
                               {{"Background of the Invention:", L::Background, a},
                                {"Brief Summary:", L::Summary, b},
                                {"Brief Description of the Drawings:", L::Drawings, c}}));
    return out;
}

}  // namespace testing
