#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "patentsum/http.hpp"
#include "patentsum/summary.hpp"

namespace patentsum {

enum class ProfileName { Default, Adjusted, Custom };

std::string_view profile_name(ProfileName name);
ProfileName parse_profile_name(std::string_view name);

/// Generation settings passed through to the summarizer. Beam and penalty
/// values are never interpreted locally.
struct GenerationProfile {
    ProfileName name = ProfileName::Default;
    std::optional<std::size_t> min_words;
    std::optional<std::size_t> max_words;
    std::size_t num_beams = 4;
    double length_penalty = 0.8;
    std::size_t no_repeat_ngram = 3;
    std::size_t max_source_words = 1024;
    std::string checkpoint;

    /// Backend-default lengths (short summaries).
    static GenerationProfile default_profile();
    /// 250-300 word summaries.
    static GenerationProfile adjusted_profile(double length_penalty = 0.8);
    static GenerationProfile named(std::string_view name);

    void validate() const;
    nlohmann::json to_json() const;
    static GenerationProfile from_json(const nlohmann::json& j);
};

/// Summarizer fine-tuning hyperparameters, carried for the training script.
struct FinetuneParams {
    std::size_t max_source_length = 1024;
    std::size_t num_beams = 4;
    double length_penalty = 0.8;
    std::size_t no_repeat_ngram_size = 3;
    std::size_t max_target_length = 300;
    std::size_t min_target_length = 100;
    double learning_rate = 2e-5;
    std::size_t per_device_train_batch_size = 1;
    std::size_t gradient_accumulation_steps = 16;
    std::size_t num_train_epochs = 2;

    nlohmann::json to_json() const;
};

class GenerationBackend {
public:
    virtual ~GenerationBackend() = default;
    virtual std::string id() const = 0;
    virtual std::string summarize(const std::string& text, const GenerationProfile& profile) = 0;
};

/// Client for `/v1/summarize`.
/// Request:  {"op":"summarize","text":...,<profile fields>,"tokens_per_word":r}
/// Response: {"text":...}
class RemoteGenerationBackend : public GenerationBackend {
public:
    explicit RemoteGenerationBackend(std::string endpoint, RetryPolicy retry = {}, double tokens_per_word = 1.35);

    std::string id() const override;
    std::string summarize(const std::string& text, const GenerationProfile& profile) override;

    nlohmann::json request_body(const std::string& text, const GenerationProfile& profile) const;

private:
    std::string endpoint_;
    RetryPolicy retry_;
    double tokens_per_word_;
    std::string model_;
};

/// Budget used by the fallback when the profile leaves max_words open.
inline constexpr std::size_t kFallbackDefaultMaxWords = 100;

/// Leading whole sentences up to the word budget; if the first sentence is
/// already over budget, its first max_words words.
std::string fallback_generate(std::string_view text, const GenerationProfile& profile);

struct GenerateOptions {
    bool allow_fallback = true;
    std::string source = std::string(source::kDescription);
};

/// Caps the input to profile.max_source_words, dispatches to `backend` (may be
/// null, meaning no endpoint), and wraps the reply. Falls back to
/// fallback_generate when the backend is absent or unreachable and fallback is
/// allowed; the method tag then reads `abstractive-fallback`.
SummaryArtifact generate_summary(std::string_view text, const GenerationProfile& profile,
                                 GenerationBackend* backend, const GenerateOptions& options = {});

}  // namespace patentsum
