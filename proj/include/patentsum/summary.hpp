#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace patentsum {

namespace method {
inline constexpr std::string_view kExtractiveBertClass = "extractive-bert-class";
inline constexpr std::string_view kExtractiveSentence = "extractive-sentence";
inline constexpr std::string_view kAbstractive = "abstractive";
inline constexpr std::string_view kFallbackSuffix = "-fallback";
}  // namespace method

/// Known summary/query source tags.
namespace source {
inline constexpr std::string_view kAbstract = "abstract";
inline constexpr std::string_view kClaims = "claims";
inline constexpr std::string_view kDescription = "description";
inline constexpr std::string_view kBriefDescription = "brief_description";
inline constexpr std::string_view kSummarySegment = "summary_segment";
inline constexpr std::string_view kBriefPlusFirstClaim = "brief_description+first_claim";
inline constexpr std::string_view kSummaryPlusFirstClaim = "summary_segment+first_claim";
}  // namespace source

bool is_known_method(std::string_view tag);  // accepts the -fallback suffix
bool is_known_source(std::string_view tag);
const std::vector<std::string>& known_methods();
const std::vector<std::string>& known_sources();

struct SummaryArtifact {
    std::string doc_id;
    std::string method;
    std::string source;
    std::optional<std::string> profile;
    std::string backend;  // embedding or generation backend identity
    std::string text;
    std::size_t words = 0;

    bool operator==(const SummaryArtifact&) const = default;
};

nlohmann::json to_json(const SummaryArtifact& s);
SummaryArtifact summary_from_json(const nlohmann::json& j);

/// Summaries keyed by configuration (method, source, profile) and doc_id.
/// The configuration key drops any `-fallback` suffix so that fallback output
/// can stand in for the remote generator in a run.
class SummaryRegistry {
public:
    static std::string config_key(std::string_view method, std::string_view source,
                                  const std::optional<std::string>& profile);

    void add(SummaryArtifact s);
    const SummaryArtifact* find(const std::string& key, const std::string& doc_id) const;
    bool has_config(const std::string& key) const { return by_config_.count(key) > 0; }
    std::vector<std::string> configs() const;
    /// Total artifacts across configurations.
    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& [_, docs] : by_config_) n += docs.size();
        return n;
    }

    void load(const std::filesystem::path& path);
    static void write(const std::filesystem::path& path, const std::vector<SummaryArtifact>& summaries);

private:
    std::map<std::string, std::map<std::string, SummaryArtifact>> by_config_;
};

}  // namespace patentsum
