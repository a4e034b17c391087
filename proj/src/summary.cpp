#include "patentsum/summary.hpp"

#include <algorithm>
#include <fstream>

#include "patentsum/error.hpp"
#include "patentsum/text.hpp"

namespace patentsum {

const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> methods = {std::string(method::kExtractiveBertClass),
                                                     std::string(method::kExtractiveSentence),
                                                     std::string(method::kAbstractive)};
    return methods;
}

const std::vector<std::string>& known_sources() {
    static const std::vector<std::string> sources = {
        std::string(source::kAbstract),          std::string(source::kClaims),
        std::string(source::kDescription),       std::string(source::kBriefDescription),
        std::string(source::kSummarySegment),    std::string(source::kBriefPlusFirstClaim),
        std::string(source::kSummaryPlusFirstClaim)};
    return sources;
}

bool is_known_method(std::string_view tag) {
    if (tag.ends_with(method::kFallbackSuffix)) tag.remove_suffix(method::kFallbackSuffix.size());
    const auto& m = known_methods();
    return std::find(m.begin(), m.end(), tag) != m.end();
}

bool is_known_source(std::string_view tag) {
    const auto& s = known_sources();
    return std::find(s.begin(), s.end(), tag) != s.end();
}

nlohmann::json to_json(const SummaryArtifact& s) {
    nlohmann::json j = {{"doc_id", s.doc_id}, {"method", s.method}, {"source", s.source},
                        {"profile", nullptr}, {"backend", s.backend}, {"text", s.text},
                        {"words", s.words}};
    if (s.profile) j["profile"] = *s.profile;
    return j;
}

SummaryArtifact summary_from_json(const nlohmann::json& j) {
    SummaryArtifact s;
    s.doc_id = j.at("doc_id").get<std::string>();
    s.method = j.at("method").get<std::string>();
    s.source = j.at("source").get<std::string>();
    if (j.contains("profile") && !j["profile"].is_null()) s.profile = j["profile"].get<std::string>();
    s.backend = j.value("backend", "");
    s.text = j.at("text").get<std::string>();
    s.words = word_count(s.text);
    if (j.contains("words") && j["words"].get<std::size_t>() != s.words) {
        throw InputError("summary for '" + s.doc_id + "': stored word count does not match text");
    }
    return s;
}

std::string SummaryRegistry::config_key(std::string_view method, std::string_view source,
                                        const std::optional<std::string>& profile) {
    if (method.ends_with(method::kFallbackSuffix)) method.remove_suffix(method::kFallbackSuffix.size());
    std::string key(method);
    key.append(":").append(source);
    if (profile) key.append(":").append(*profile);
    return key;
}

void SummaryRegistry::add(SummaryArtifact s) {
    auto key = config_key(s.method, s.source, s.profile);
    auto doc = s.doc_id;
    by_config_[key].insert_or_assign(std::move(doc), std::move(s));
}

const SummaryArtifact* SummaryRegistry::find(const std::string& key, const std::string& doc_id) const {
    auto c = by_config_.find(key);
    if (c == by_config_.end()) return nullptr;
    auto d = c->second.find(doc_id);
    return d == c->second.end() ? nullptr : &d->second;
}

std::vector<std::string> SummaryRegistry::configs() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : by_config_) out.push_back(k);
    return out;
}

void SummaryRegistry::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read summary store '" + path.string() + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            add(summary_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void SummaryRegistry::write(const std::filesystem::path& path, const std::vector<SummaryArtifact>& summaries) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    for (const auto& s : summaries) out << to_json(s).dump() << '\n';
}

}  // namespace patentsum
