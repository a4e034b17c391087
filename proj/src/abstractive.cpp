#include "patentsum/abstractive.hpp"

#include "patentsum/error.hpp"
#include "patentsum/extractive.hpp"
#include "patentsum/text.hpp"

namespace patentsum {

std::string_view profile_name(ProfileName name) {
    switch (name) {
        case ProfileName::Default: return "default";
        case ProfileName::Adjusted: return "adjusted";
        case ProfileName::Custom: return "custom";
    }
    return "custom";
}

ProfileName parse_profile_name(std::string_view name) {
    if (name == "default") return ProfileName::Default;
    if (name == "adjusted") return ProfileName::Adjusted;
    if (name == "custom") return ProfileName::Custom;
    throw InputError("unknown generation profile '" + std::string(name) + "' (expected default, adjusted or custom)");
}

GenerationProfile GenerationProfile::default_profile() {
    return {};
}

GenerationProfile GenerationProfile::adjusted_profile(double length_penalty) {
    GenerationProfile p;
    p.name = ProfileName::Adjusted;
    p.min_words = 250;
    p.max_words = 300;
    p.length_penalty = length_penalty;
    return p;
}

GenerationProfile GenerationProfile::named(std::string_view name) {
    switch (parse_profile_name(name)) {
        case ProfileName::Default: return default_profile();
        case ProfileName::Adjusted: return adjusted_profile();
        case ProfileName::Custom: break;
    }
    GenerationProfile p;
    p.name = ProfileName::Custom;
    return p;
}

void GenerationProfile::validate() const {
    if (min_words && *min_words < 1) throw InputError("min_words must be positive");
    if (max_words && *max_words < 1) throw InputError("max_words must be positive");
    if (min_words && max_words && *min_words > *max_words) throw InputError("min_words exceeds max_words");
    if (num_beams < 1) throw InputError("num_beams must be positive");
    if (max_source_words < 1) throw InputError("max_source_words must be positive");
}

nlohmann::json GenerationProfile::to_json() const {
    nlohmann::json j = {
        {"profile", profile_name(name)},
        {"min_words", nullptr},
        {"max_words", nullptr},
        {"num_beams", num_beams},
        {"length_penalty", length_penalty},
        {"no_repeat_ngram", no_repeat_ngram},
        {"max_source_words", max_source_words},
        {"checkpoint", checkpoint},
    };
    if (min_words) j["min_words"] = *min_words;
    if (max_words) j["max_words"] = *max_words;
    return j;
}

GenerationProfile GenerationProfile::from_json(const nlohmann::json& j) {
    GenerationProfile p = named(j.value("profile", "custom"));
    auto opt = [&](const char* key) -> std::optional<std::size_t> {
        if (!j.contains(key) || j[key].is_null()) return std::nullopt;
        return j[key].get<std::size_t>();
    };
    if (j.contains("min_words")) p.min_words = opt("min_words");
    if (j.contains("max_words")) p.max_words = opt("max_words");
    p.num_beams = j.value("num_beams", p.num_beams);
    p.length_penalty = j.value("length_penalty", p.length_penalty);
    p.no_repeat_ngram = j.value("no_repeat_ngram", p.no_repeat_ngram);
    p.max_source_words = j.value("max_source_words", p.max_source_words);
    p.checkpoint = j.value("checkpoint", p.checkpoint);
    p.validate();
    return p;
}

nlohmann::json FinetuneParams::to_json() const {
    return {
        {"max_source_length", max_source_length},
        {"num_beams", num_beams},
        {"length_penalty", length_penalty},
        {"no_repeat_ngram_size", no_repeat_ngram_size},
        {"max_target_length", max_target_length},
        {"min_target_length", min_target_length},
        {"learning_rate", learning_rate},
        {"per_device_train_batch_size", per_device_train_batch_size},
        {"gradient_accumulation_steps", gradient_accumulation_steps},
        {"num_train_epochs", num_train_epochs},
    };
}

RemoteGenerationBackend::RemoteGenerationBackend(std::string endpoint, RetryPolicy retry, double tokens_per_word)
    : endpoint_(std::move(endpoint)), retry_(retry), tokens_per_word_(tokens_per_word) {}

std::string RemoteGenerationBackend::id() const {
    return model_.empty() ? "remote:" + endpoint_ : model_;
}

nlohmann::json RemoteGenerationBackend::request_body(const std::string& text, const GenerationProfile& profile) const {
    auto body = profile.to_json();
    body["op"] = "summarize";
    body["text"] = text;
    body["tokens_per_word"] = tokens_per_word_;
    return body;
}

std::string RemoteGenerationBackend::summarize(const std::string& text, const GenerationProfile& profile) {
    auto reply = post_json(endpoint_, "/v1/summarize", request_body(text, profile), retry_);
    if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string()) {
        throw BackendError(endpoint_ + ": malformed summarize response");
    }
    if (reply.contains("model") && reply["model"].is_string()) model_ = reply["model"].get<std::string>();
    return reply["text"].get<std::string>();
}

std::string fallback_generate(std::string_view text, const GenerationProfile& profile) {
    const std::size_t budget = profile.max_words.value_or(kFallbackDefaultMaxWords);
    auto sentences = split_sentences(text);
    if (sentences.empty()) return {};

    std::string out;
    std::size_t used = 0;
    for (const auto& s : sentences) {
        auto n = word_count(s);
        if (used + n > budget) break;
        if (!out.empty()) out.push_back(' ');
        out += s;
        used += n;
    }
    if (out.empty()) out = cap_tokens(sentences.front(), budget);
    return out;
}

SummaryArtifact generate_summary(std::string_view text, const GenerationProfile& profile, GenerationBackend* backend,
                                 const GenerateOptions& options) {
    profile.validate();
    if (trim(text).empty()) throw InputError("abstractive summary: input text is empty");

    auto payload = cap_tokens(text, profile.max_source_words);
    SummaryArtifact s;
    s.method = std::string(method::kAbstractive);
    s.source = options.source;
    s.profile = std::string(profile_name(profile.name));

    bool use_fallback = backend == nullptr;
    if (backend == nullptr && !options.allow_fallback) {
        throw BackendUnavailable("abstractive summary: no generation endpoint configured and fallback disabled");
    }
    if (backend != nullptr) {
        try {
            s.text = backend->summarize(payload, profile);
            s.backend = backend->id();
        } catch (const BackendUnavailable&) {
            if (!options.allow_fallback) throw;
            use_fallback = true;
        }
    }
    if (use_fallback) {
        s.text = fallback_generate(payload, profile);
        s.method += method::kFallbackSuffix;
        s.backend = "fallback-leading-sentences";
    }
    if (trim(s.text).empty()) throw BackendError("abstractive summary: backend " + s.backend + " returned empty text");
    s.words = word_count(s.text);
    return s;
}

}  // namespace patentsum
