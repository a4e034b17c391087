#include "patentsum/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "patentsum/error.hpp"
#include "patentsum/text.hpp"

namespace patentsum {

namespace {

std::size_t parse_size(const std::string& key, const std::string& value) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw InputError("config " + key + ": expected a non-negative integer, got '" + value + "'");
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw InputError("config " + key + ": expected a number, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
    auto v = to_lower(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InputError("config " + key + ": expected true or false, got '" + value + "'");
}

std::vector<std::string> parse_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        auto t = trim(item);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& value) {
    std::vector<std::size_t> out;
    for (const auto& item : parse_list(value)) out.push_back(parse_size(key, item));
    return out;
}

WordRange parse_range(const std::string& key, const std::string& value) {
    auto dash = value.find('-');
    if (dash == std::string::npos) throw InputError("config " + key + ": expected LOW-HIGH, got '" + value + "'");
    WordRange r{parse_size(key, std::string(trim(value.substr(0, dash)))),
                parse_size(key, std::string(trim(value.substr(dash + 1))))};
    if (r.low > r.high) throw InputError("config " + key + ": empty range '" + value + "'");
    return r;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"corpus.path", [](RunConfig& c, auto&, auto& v) { c.corpus = v; }},
        {"corpus.format",
         [](RunConfig& c, auto&, auto& v) {
             parse_corpus_format(v);
             c.corpus_format = v;
         }},
        {"topics.path", [](RunConfig& c, auto&, auto& v) { c.topics = v; }},
        {"qrels.path", [](RunConfig& c, auto&, auto& v) { c.qrels = v; }},
        {"segment.dictionary", [](RunConfig& c, auto&, auto& v) { c.dictionary = v; }},
        {"segment.store", [](RunConfig& c, auto&, auto& v) { c.segments = v; }},
        {"summaries.paths",
         [](RunConfig& c, auto&, auto& v) {
             c.summaries.clear();
             for (const auto& p : parse_list(v)) c.summaries.emplace_back(p);
         }},
        {"index.path", [](RunConfig& c, auto&, auto& v) { c.index = v; }},
        {"index.representation",
         [](RunConfig& c, auto& k, auto& v) {
             if (v != "claims" && v != "abstract" && v != "description") {
                 throw InputError("config " + k + ": expected claims, abstract or description, got '" + v + "'");
             }
             c.representation = v;
         }},
        {"index.cap",
         [](RunConfig& c, auto& k, auto& v) {
             c.cap = parse_size(k, v);
             if (c.cap == 0) throw InputError("config " + k + ": cap must be >= 1");
         }},
        {"backend.kind",
         [](RunConfig& c, auto& k, auto& v) {
             if (v != "hashed" && v != "remote") {
                 throw InputError("config " + k + ": expected hashed or remote, got '" + v + "'");
             }
             c.backend = v;
         }},
        {"backend.endpoint", [](RunConfig& c, auto&, auto& v) { c.endpoint = v; }},
        {"backend.dim",
         [](RunConfig& c, auto& k, auto& v) {
             c.dim = parse_size(k, v);
             if (c.dim < 2) throw InputError("config " + k + ": dim must be >= 2");
         }},
        {"backend.retries",
         [](RunConfig& c, auto& k, auto& v) { c.retry_attempts = static_cast<int>(std::max<std::size_t>(1, parse_size(k, v))); }},
        {"backend.backoff_ms",
         [](RunConfig& c, auto& k, auto& v) { c.retry_backoff_ms = static_cast<int>(parse_size(k, v)); }},
        {"run.strategies",
         [](RunConfig& c, auto&, auto& v) {
             c.strategies = parse_list(v);
             for (const auto& s : c.strategies) QueryStrategy::parse(s);
         }},
        {"run.k",
         [](RunConfig& c, auto& k, auto& v) {
             c.k = parse_size(k, v);
             if (c.k == 0) throw InputError("config " + k + ": k must be >= 1");
         }},
        {"run.exclude_topic_doc", [](RunConfig& c, auto& k, auto& v) { c.exclude_topic_doc = parse_bool(k, v); }},
        {"eval.map_cutoff", [](RunConfig& c, auto& k, auto& v) { c.metrics.map_cutoff = parse_size(k, v); }},
        {"eval.precision_cutoffs",
         [](RunConfig& c, auto& k, auto& v) { c.metrics.precision_cutoffs = parse_size_list(k, v); }},
        {"eval.recall_cutoffs", [](RunConfig& c, auto& k, auto& v) { c.metrics.recall_cutoffs = parse_size_list(k, v); }},
        {"eval.reference",
         [](RunConfig& c, auto& k, auto& v) {
             if (!is_known_source(v)) throw InputError("config " + k + ": unknown source '" + v + "'");
             c.reference = v;
         }},
        {"summarize.method", [](RunConfig& c, auto&, auto& v) { c.method = v; }},
        {"summarize.variant", [](RunConfig& c, auto&, auto& v) { c.extractive_variant = v; }},
        {"summarize.source", [](RunConfig& c, auto&, auto& v) { c.source = v; }},
        {"summarize.profile", [](RunConfig& c, auto&, auto& v) { c.profile = v; }},
        {"summarize.length_penalty", [](RunConfig& c, auto& k, auto& v) { c.length_penalty = parse_double(k, v); }},
        {"summarize.target_words", [](RunConfig& c, auto& k, auto& v) { c.target_words = parse_size(k, v); }},
        {"summarize.clusters", [](RunConfig& c, auto& k, auto& v) { c.clusters = parse_size(k, v); }},
        {"summarize.fallback", [](RunConfig& c, auto& k, auto& v) { c.fallback = parse_bool(k, v); }},
        {"summarize.tokens_per_word", [](RunConfig& c, auto& k, auto& v) { c.tokens_per_word = parse_double(k, v); }},
        {"finetune.summary_words",
         [](RunConfig& c, auto& k, auto& v) {
             auto r = parse_range(k, v);
             c.summary_min_words = r.low;
             c.summary_max_words = r.high;
         }},
        {"finetune.source_words",
         [](RunConfig& c, auto& k, auto& v) {
             auto r = parse_range(k, v);
             c.source_min_words = r.low;
             c.source_max_words = r.high;
         }},
        {"output.dir", [](RunConfig& c, auto&, auto& v) { c.out = v; }},
        {"output.seed",
         [](RunConfig& c, auto& k, auto& v) { c.seed = static_cast<std::uint64_t>(parse_size(k, v)); }},
    };
    return table;
}

void require_file(const fs::path& path, const std::string& what) {
    if (path.empty()) throw InputError(what + " path not configured");
    if (!fs::exists(path)) throw InputError(what + " not found: " + path.string());
}

void ensure_parent(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void open_out(std::ofstream& out, const fs::path& path) {
    ensure_parent(path);
    out.open(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
}

nlohmann::json optional_text(const std::optional<std::string>& s) {
    return s ? nlohmann::json(*s) : nlohmann::json(nullptr);
}

std::optional<std::string> read_optional(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out;
    open_out(out, path);
    out << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string resolve_method(const RunConfig& cfg) {
    if (cfg.method == "extractive") {
        if (cfg.extractive_variant == "sentence") return std::string(method::kExtractiveSentence);
        if (cfg.extractive_variant == "bert-class") return std::string(method::kExtractiveBertClass);
        throw InputError("unknown extractive variant '" + cfg.extractive_variant + "' (valid: sentence, bert-class)");
    }
    if (cfg.method == "abstractive") return std::string(method::kAbstractive);
    if (is_known_method(cfg.method) && cfg.method.find(method::kFallbackSuffix) == std::string::npos) {
        return cfg.method;
    }
    std::string valid = "extractive, abstractive";
    for (const auto& m : known_methods()) valid += ", " + m;
    throw InputError("unknown summarization method '" + cfg.method + "' (valid: " + valid + ")");
}

std::string summaries_stem(const std::string& method_tag, const std::string& source,
                           const std::optional<std::string>& profile) {
    auto stem = method_tag + "." + source;
    if (profile) stem += "." + *profile;
    std::replace(stem.begin(), stem.end(), '+', '_');
    return stem;
}

fs::path sidecar_path(const fs::path& run) {
    auto p = run;
    p.replace_extension(".meta.json");
    return p;
}

}  // namespace

RetryPolicy RunConfig::retry() const {
    return {retry_attempts, std::chrono::milliseconds(retry_backoff_ms)};
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config file not found: " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        auto hash = line.find('#');
        auto body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw InputError(path.string() + ":" + std::to_string(n) + ": expected 'key = value'");
        }
        auto key = std::string(trim(body.substr(0, eq)));
        auto value = std::string(trim(body.substr(eq + 1)));
        if (key.empty()) throw InputError(path.string() + ":" + std::to_string(n) + ": empty key");
        if (!setters().count(key)) {
            throw InputError(path.string() + ":" + std::to_string(n) + ": unknown key '" + key + "'");
        }
        out[key] = value;
    }
    return out;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto it = setters().find(key);
    if (it == setters().end()) throw InputError("unknown config key '" + key + "'");
    it->second(cfg, key, value);
}

void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& settings) {
    for (const auto& [k, v] : settings) apply_setting(cfg, k, v);
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : setters()) k.push_back(name);
        return k;
    }();
    return keys;
}

std::unique_ptr<EmbeddingBackend> make_embedding_backend(const RunConfig& cfg) {
    if (cfg.backend == "hashed") return std::make_unique<HashedBackend>(cfg.dim);
    if (cfg.backend == "remote") {
        if (cfg.endpoint.empty()) throw InputError("backend 'remote' needs --endpoint");
        return std::make_unique<RemoteEmbeddingBackend>(cfg.endpoint, cfg.cap, cfg.retry());
    }
    throw InputError("unknown backend '" + cfg.backend + "' (valid: hashed, remote)");
}

std::unique_ptr<GenerationBackend> make_generation_backend(const RunConfig& cfg) {
    if (cfg.endpoint.empty()) return nullptr;
    return std::make_unique<RemoteGenerationBackend>(cfg.endpoint, cfg.retry(), cfg.tokens_per_word);
}

HeadingDictionary load_dictionary(const RunConfig& cfg) {
    auto dict = HeadingDictionary::seed();
    if (!cfg.dictionary.empty()) dict.merge(HeadingDictionary::load(cfg.dictionary));
    return dict;
}

Corpus load_corpus(const RunConfig& cfg, std::ostream& log) {
    require_file(cfg.corpus, "corpus");
    auto corpus = ingest_corpus(cfg.corpus, parse_corpus_format(cfg.corpus_format));
    for (const auto& e : corpus.errors()) log << "warning: " << to_string(e) << '\n';
    if (corpus.empty()) throw InputError("corpus " + cfg.corpus.string() + " holds no valid documents");
    return corpus;
}

nlohmann::json segments_to_json(const std::string& doc_id, const DescriptionSegments& seg) {
    nlohmann::json spans = nlohmann::json::array();
    for (const auto& s : seg.spans) {
        spans.push_back({{"label", label_name(s.label)},
                         {"start", s.start},
                         {"body_start", s.body_start},
                         {"end", s.end},
                         {"heading", s.heading_text}});
    }
    nlohmann::json first_claim = nullptr;
    if (seg.first_claim) first_claim = {{"number", seg.first_claim->number}, {"text", seg.first_claim->text}};
    return {{"doc_id", doc_id},
            {"spans", spans},
            {"summary_segment", optional_text(seg.summary_segment)},
            {"background", optional_text(seg.background)},
            {"brief_description", optional_text(seg.brief_description)},
            {"first_claim", first_claim},
            {"summary_end", seg.summary_end}};
}

DescriptionSegments segments_from_json(const nlohmann::json& j) {
    DescriptionSegments seg;
    for (const auto& s : j.at("spans")) {
        SegmentSpan span;
        span.label = parse_label(s.at("label").get<std::string>());
        span.start = s.at("start").get<std::size_t>();
        span.body_start = s.at("body_start").get<std::size_t>();
        span.end = s.at("end").get<std::size_t>();
        span.heading_text = s.value("heading", "");
        seg.spans.push_back(std::move(span));
    }
    seg.summary_segment = read_optional(j, "summary_segment");
    seg.background = read_optional(j, "background");
    seg.brief_description = read_optional(j, "brief_description");
    if (j.contains("first_claim") && !j.at("first_claim").is_null()) {
        const auto& c = j.at("first_claim");
        seg.first_claim = Claim{c.at("number").get<int>(), c.at("text").get<std::string>()};
    }
    seg.summary_end = j.value("summary_end", std::size_t{0});
    return seg;
}

void write_segment_store(const fs::path& path, const Corpus& corpus, const SegmentStore& store) {
    std::ofstream out;
    open_out(out, path);
    for (const auto& doc : corpus.documents()) {
        auto it = store.find(doc.doc_id);
        if (it == store.end()) continue;
        out << segments_to_json(doc.doc_id, it->second).dump() << '\n';
    }
}

SegmentStore read_segment_store(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("segment store not found: " + path.string());
    SegmentStore store;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (trim(line).empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            auto id = j.at("doc_id").get<std::string>();
            store[id] = segments_from_json(j);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return store;
}

SegmentStore load_or_segment(const RunConfig& cfg, const Corpus& corpus) {
    if (!cfg.segments.empty()) return read_segment_store(cfg.segments);
    return segment_corpus(corpus, load_dictionary(cfg));
}

IngestStats cmd_ingest(const RunConfig& cfg, std::ostream& log) {
    auto corpus = load_corpus(cfg, log);
    auto path = cfg.out / "corpus.jsonl";
    write_corpus(path, corpus.documents());
    log << "ingested " << corpus.size() << " documents (" << corpus.errors().size() << " rejected) -> "
        << path.string() << '\n';
    if (!cfg.topics.empty()) {
        auto topics = ingest_topics(cfg.topics);
        for (const auto& e : topics.errors) log << "warning: " << to_string(e) << '\n';
        for (const auto& t : missing_topic_documents(topics, corpus)) {
            log << "warning: topic " << t.topic_id << " document " << t.doc_id << " not in corpus\n";
        }
    }
    return {corpus.size(), corpus.errors().size()};
}

SegmentStats cmd_segment(const RunConfig& cfg, std::ostream& log) {
    if (!cfg.dictionary.empty() && !fs::exists(cfg.dictionary)) {
        throw InputError("heading dictionary not found: " + cfg.dictionary.string());
    }
    auto dict = load_dictionary(cfg);
    auto corpus = load_corpus(cfg, log);
    auto store = segment_corpus(corpus, dict);

    SegmentStats stats;
    stats.documents = corpus.size();
    for (const auto& [_, seg] : store) stats.with_summary += seg.summary_segment ? 1 : 0;
    stats.coverage = static_cast<double>(stats.with_summary) / static_cast<double>(stats.documents);
    stats.output = cfg.segments.empty() ? cfg.out / "segments.jsonl" : cfg.segments;
    write_segment_store(stats.output, corpus, store);

    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", stats.coverage);
    log << "summary segment coverage " << stats.with_summary << "/" << stats.documents << " = " << buf << " -> "
        << stats.output.string() << '\n';
    return stats;
}

std::optional<std::string> source_text(const PatentDocument& doc, const DescriptionSegments& seg,
                                       std::string_view source) {
    auto non_empty = [](std::string s) -> std::optional<std::string> {
        if (trim(s).empty()) return std::nullopt;
        return s;
    };
    if (source == source::kAbstract) return non_empty(doc.abstract_text);
    if (source == source::kClaims) return non_empty(doc.claims_text());
    if (source == source::kDescription) return non_empty(doc.description);
    if (source == source::kBriefDescription) return seg.brief_description;
    if (source == source::kSummarySegment) return seg.summary_segment;
    if (source == source::kBriefPlusFirstClaim) {
        if (!seg.brief_description || !seg.first_claim) return std::nullopt;
        return *seg.brief_description + " " + seg.first_claim->text;
    }
    if (source == source::kSummaryPlusFirstClaim) {
        if (!seg.summary_segment || !seg.first_claim) return std::nullopt;
        return *seg.summary_segment + " " + seg.first_claim->text;
    }
    std::string valid;
    for (const auto& s : known_sources()) valid += (valid.empty() ? "" : ", ") + s;
    throw InputError("unknown source '" + std::string(source) + "' (valid: " + valid + ")");
}

SummarizeStats cmd_summarize(const RunConfig& cfg, std::ostream& log) {
    auto method_tag = resolve_method(cfg);
    if (!is_known_source(cfg.source)) source_text({}, {}, cfg.source);  // throws with the valid set

    auto corpus = load_corpus(cfg, log);
    auto segments = load_or_segment(cfg, corpus);
    const DescriptionSegments none;

    std::unique_ptr<EmbeddingBackend> embedder;
    std::unique_ptr<GenerationBackend> generator;
    GenerationProfile profile;
    std::optional<std::string> profile_tag;
    ExtractiveConfig extractive;
    const bool abstractive = method_tag == method::kAbstractive;
    if (abstractive) {
        profile = parse_profile_name(cfg.profile) == ProfileName::Adjusted
                      ? GenerationProfile::adjusted_profile(cfg.length_penalty)
                      : GenerationProfile::named(cfg.profile);
        profile.validate();
        profile_tag = std::string(profile_name(profile.name));
        generator = make_generation_backend(cfg);
        if (!generator && !cfg.fallback) throw BackendUnavailable("no generation endpoint configured and fallback disabled");
    } else {
        embedder = make_embedding_backend(cfg);
        extractive.target_words = cfg.target_words;
        extractive.k_override = cfg.clusters;
        extractive.seed = cfg.seed;
        extractive.embed_cap = cfg.cap;
        extractive.method = method_tag;
        extractive.validate();
    }

    SummarizeStats stats;
    std::vector<SummaryArtifact> artifacts;
    std::size_t fallbacks = 0, out_of_range = 0;
    for (const auto& doc : corpus.documents()) {
        auto it = segments.find(doc.doc_id);
        auto text = source_text(doc, it == segments.end() ? none : it->second, cfg.source);
        if (!text || trim(*text).empty() || split_sentences(*text).empty()) {
            stats.skipped.push_back(doc.doc_id);
            continue;
        }
        SummaryArtifact s;
        if (abstractive) {
            s = generate_summary(*text, profile, generator.get(), {cfg.fallback, cfg.source});
            if (s.method.ends_with(method::kFallbackSuffix)) {
                ++fallbacks;
            } else if ((profile.min_words && s.words < *profile.min_words) ||
                       (profile.max_words && s.words > *profile.max_words)) {
                ++out_of_range;
            }
        } else {
            s = extractive_summary(*text, *embedder, extractive);
            s.source = cfg.source;
        }
        s.doc_id = doc.doc_id;
        artifacts.push_back(std::move(s));
    }
    stats.generated = artifacts.size();
    stats.output = cfg.out / "summaries" / (summaries_stem(method_tag, cfg.source, profile_tag) + ".jsonl");
    ensure_parent(stats.output);
    SummaryRegistry::write(stats.output, artifacts);

    nlohmann::json meta = {{"method", method_tag},
                           {"source", cfg.source},
                           {"generated", stats.generated},
                           {"skipped", stats.skipped},
                           {"fallback", fallbacks},
                           {"out_of_range", out_of_range}};
    if (abstractive) meta["profile"] = profile.to_json();
    auto meta_path = stats.output;
    meta_path.replace_extension(".meta.json");
    write_json_file(meta_path, meta);

    log << "summarized " << stats.generated << " documents with " << method_tag << " over " << cfg.source << " ("
        << stats.skipped.size() << " skipped";
    if (fallbacks) log << ", " << fallbacks << " via fallback";
    log << ") -> " << stats.output.string() << '\n';
    if (out_of_range) {
        log << "warning: " << out_of_range << " summaries fall outside the profile's word range\n";
    }
    return stats;
}

FinetuneSet cmd_build_finetune_set(const RunConfig& cfg, std::ostream& log) {
    auto corpus = load_corpus(cfg, log);
    auto set = build_finetune_pairs(corpus, load_dictionary(cfg), {cfg.summary_min_words, cfg.summary_max_words},
                                    {cfg.source_min_words, cfg.source_max_words});
    auto dir = cfg.out / "finetune";
    std::ofstream out;
    open_out(out, dir / "pairs.jsonl");
    for (const auto& p : set.pairs) {
        out << nlohmann::json{{"doc_id", p.doc_id}, {"input", p.input}, {"target", p.target}}.dump() << '\n';
    }
    const auto& f = set.funnel;
    write_json_file(dir / "funnel.json", {{"documents", f.documents},
                                          {"has_summary", f.has_summary},
                                          {"has_summary_in_range", f.has_summary_in_range},
                                          {"has_first_claim", f.has_first_claim},
                                          {"source_in_range", f.source_in_range}});
    write_json_file(dir / "params.json", FinetuneParams{}.to_json());
    log << "fine-tune funnel: documents " << f.documents << " > summary " << f.has_summary << " > summary in range "
        << f.has_summary_in_range << " > first claim " << f.has_first_claim << " > source in range "
        << f.source_in_range << '\n';
    log << "wrote " << set.pairs.size() << " pairs -> " << (dir / "pairs.jsonl").string() << '\n';
    return set;
}

IndexBuild cmd_index(const RunConfig& cfg, std::ostream& log) {
    auto corpus = load_corpus(cfg, log);
    auto backend = make_embedding_backend(cfg);
    auto build = build_index(corpus, cfg.representation, cfg.cap, *backend);
    for (const auto& w : build.warnings) log << "warning: " << w << '\n';
    ensure_parent(cfg.index_path());
    write_index(cfg.index_path(), build.index);
    log << "indexed " << build.index.size() << " documents by " << cfg.representation << " with "
        << build.index.backend_id << " -> " << cfg.index_path().string() << '\n';
    return build;
}

SearchResult cmd_search(const RunConfig& cfg, const std::string& query, std::ostream& log) {
    require_file(cfg.index_path(), "index");
    auto index = read_index(cfg.index_path());
    auto backend = make_embedding_backend(cfg);
    auto result = search(index, query, cfg.k, std::nullopt, *backend);
    if (result.backend_mismatch) {
        log << "warning: query backend " << backend->id() << " differs from index backend " << index.backend_id
            << '\n';
    }
    return result;
}

std::string strategy_file_stem(const std::string& strategy) {
    std::string out;
    for (char c : strategy) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') out.push_back(c);
        else out.push_back('.');
    }
    return out;
}

std::vector<fs::path> cmd_run(const RunConfig& cfg, std::ostream& log) {
    if (cfg.strategies.empty()) throw InputError("no strategies configured (run.strategies or --strategy)");
    std::vector<QueryStrategy> strategies;
    for (const auto& s : cfg.strategies) strategies.push_back(QueryStrategy::parse(s));

    require_file(cfg.topics, "topics");
    auto corpus = load_corpus(cfg, log);
    auto topics = ingest_topics(cfg.topics);
    for (const auto& e : topics.errors) log << "warning: " << to_string(e) << '\n';
    auto segments = load_or_segment(cfg, corpus);

    SummaryRegistry registry;
    for (const auto& p : cfg.summaries) {
        require_file(p, "summary store");
        registry.load(p);
    }

    auto backend = make_embedding_backend(cfg);
    VectorIndex index;
    if (fs::exists(cfg.index_path())) {
        index = read_index(cfg.index_path());
    } else {
        auto build = build_index(corpus, cfg.representation, cfg.cap, *backend);
        for (const auto& w : build.warnings) log << "warning: " << w << '\n';
        ensure_parent(cfg.index_path());
        write_index(cfg.index_path(), build.index);
        index = std::move(build.index);
    }

    RunOptions options{cfg.k, cfg.exclude_topic_doc};
    std::vector<fs::path> written;
    for (const auto& strategy : strategies) {
        auto out = run_strategy(topics, corpus, segments, registry, index, strategy, *backend, options);
        auto path = cfg.out / "runs" / (strategy_file_stem(strategy.name()) + ".run");
        ensure_parent(path);
        write_run(path, out.table);
        write_json_file(sidecar_path(path), out.report.to_json(true));
        log << strategy.name() << ": " << out.report.query_words.size() << " queries, " << out.report.skipped.size()
            << " skipped -> " << path.string() << '\n';
        written.push_back(path);
    }
    return written;
}

std::vector<fs::path> cmd_eval(const RunConfig& cfg, const std::vector<fs::path>& runs, std::ostream& log) {
    if (runs.empty()) throw InputError("no run files given");
    require_file(cfg.qrels, "qrels");
    auto qrels = ingest_qrels(cfg.qrels);
    for (const auto& e : qrels.errors) log << "warning: " << to_string(e) << '\n';

    std::vector<fs::path> written;
    for (const auto& run_path : runs) {
        require_file(run_path, "run file");
        auto run = read_run(run_path);
        std::set<std::string> skipped;
        std::string strategy = run_path.stem().string();
        std::optional<double> avg_words;
        std::vector<std::string> warnings;
        if (auto meta = sidecar_path(run_path); fs::exists(meta)) {
            auto report = RunReport::from_json(read_json_file(meta));
            strategy = report.strategy;
            for (const auto& s : report.skipped) skipped.insert(s.topic_id);
            if (!report.query_words.empty()) {
                double total = 0.0;
                for (const auto& [_, n] : report.query_words) total += static_cast<double>(n);
                avg_words = total / static_cast<double>(report.query_words.size());
            }
            if (report.backend_mismatch) warnings.push_back("run mixes embedding backends");
        }
        MetricReport report;
        try {
            report = evaluate_run(run, qrels, cfg.metrics, skipped, strategy);
        } catch (const InputError& e) {
            throw InputError(run_path.string() + ": " + e.what());
        }
        report.avg_query_words = avg_words;
        report.warnings.insert(report.warnings.end(), warnings.begin(), warnings.end());
        for (const auto& w : report.warnings) log << "warning: " << strategy << ": " << w << '\n';

        auto out = cfg.out / "eval" / (strategy_file_stem(strategy) + ".json");
        write_json_file(out, report.to_json());
        log << strategy << ": " << report.evaluated << " topics";
        for (const auto& name : report.metric_names) {
            char buf[64];
            std::snprintf(buf, sizeof buf, " %s=%.4f", name.c_str(), report.mean.at(name));
            log << buf;
        }
        log << '\n';
        written.push_back(out);
    }
    return written;
}

std::vector<IntrinsicRow> cmd_eval_summaries(const RunConfig& cfg, std::ostream& log) {
    if (cfg.summaries.empty()) throw InputError("no summary stores given");
    auto corpus = load_corpus(cfg, log);
    auto segments = load_or_segment(cfg, corpus);
    auto backend = make_embedding_backend(cfg);
    const DescriptionSegments none;

    std::vector<IntrinsicRow> rows;
    nlohmann::json out = nlohmann::json::array();
    for (const auto& path : cfg.summaries) {
        require_file(path, "summary store");
        SummaryRegistry registry;
        registry.load(path);
        for (const auto& key : registry.configs()) {
            IntrinsicRow row;
            std::size_t n = 0;
            double words = 0, r1 = 0, rl = 0, sim = 0;
            std::string strategy;
            for (const auto& doc : corpus.documents()) {
                const auto* s = registry.find(key, doc.doc_id);
                if (s == nullptr) continue;
                auto it = segments.find(doc.doc_id);
                auto reference = source_text(doc, it == segments.end() ? none : it->second, cfg.reference);
                if (!reference) continue;
                strategy = "generated:" + s->method + ":" + s->source + (s->profile ? ":" + *s->profile : "");
                words += static_cast<double>(s->words);
                r1 += rouge_n(s->text, *reference, 1).f1;
                rl += rouge_l(s->text, *reference).f1;
                sim += semantic_similarity(s->text, *reference, *backend, cfg.cap).value;
                ++n;
            }
            if (n == 0) {
                log << "warning: " << key << ": no document has both a summary and a " << cfg.reference << '\n';
                continue;
            }
            auto d = static_cast<double>(n);
            auto labels = strategy_labels(strategy);
            row.reference = strategy_labels(cfg.reference).first;
            row.method = labels.second;
            row.input = labels.first;
            row.avg_words = words / d;
            row.rouge1 = r1 / d;
            row.rouge_l = rl / d;
            row.semantic_similarity = sim / d;
            out.push_back({{"config", key},
                           {"documents", n},
                           {"reference", row.reference},
                           {"method", row.method},
                           {"input", row.input},
                           {"avg_words", row.avg_words},
                           {"rouge1", row.rouge1},
                           {"rouge_l", row.rouge_l},
                           {"semantic_similarity", row.semantic_similarity},
                           {"backend", backend->id()}});
            rows.push_back(std::move(row));
        }
    }
    write_json_file(cfg.out / "eval" / "intrinsic.json", {{"intrinsic", out}});
    log << "intrinsic evaluation of " << rows.size() << " configurations against " << cfg.reference << '\n';
    return rows;
}

std::vector<fs::path> cmd_report(const RunConfig& cfg, const std::vector<fs::path>& reports, std::ostream& log) {
    if (reports.empty()) throw InputError("no metric reports given");
    std::vector<ExtrinsicRow> sections, generated;
    std::vector<IntrinsicRow> intrinsic;
    for (const auto& path : reports) {
        require_file(path, "metric report");
        auto j = read_json_file(path);
        try {
            if (j.contains("intrinsic")) {
                for (const auto& r : j.at("intrinsic")) {
                    IntrinsicRow row;
                    row.reference = r.at("reference").get<std::string>();
                    row.method = r.at("method").get<std::string>();
                    row.input = r.at("input").get<std::string>();
                    row.avg_words = r.at("avg_words").get<double>();
                    row.rouge1 = r.at("rouge1").get<double>();
                    row.rouge_l = r.at("rouge_l").get<double>();
                    row.semantic_similarity = r.at("semantic_similarity").get<double>();
                    intrinsic.push_back(std::move(row));
                }
                continue;
            }
            auto report = MetricReport::from_json(j);
            auto [source_label, method_label] = strategy_labels(report.strategy);
            ExtrinsicRow row{source_label, method_label, std::move(report)};
            (row.method.empty() ? sections : generated).push_back(std::move(row));
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path.string() + ": " + e.what());
        }
    }

    std::vector<fs::path> written;
    auto emit = [&](const std::string& name, const RenderedTable& table) {
        for (const auto& [ext, body] : {std::pair{".tsv", &table.tsv}, std::pair{".txt", &table.text}}) {
            auto path = cfg.out / ("report." + name + ext);
            std::ofstream out;
            open_out(out, path);
            out << *body;
            written.push_back(path);
        }
        log << table.text << '\n';
    };
    if (!sections.empty()) emit("sections", render_extrinsic(sections, cfg.metrics));
    if (!generated.empty()) {
        std::stable_sort(generated.begin(), generated.end(),
                         [](const ExtrinsicRow& a, const ExtrinsicRow& b) { return a.source < b.source; });
        emit("summaries", render_extrinsic(generated, cfg.metrics));
    }
    if (!intrinsic.empty()) emit("intrinsic", render_intrinsic(intrinsic));
    return written;
}

}  // namespace patentsum
