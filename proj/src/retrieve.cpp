#include "patentsum/retrieve.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "patentsum/error.hpp"
#include "patentsum/text.hpp"

namespace patentsum {

namespace {

struct StrategyName {
    StrategyKind kind;
    std::string_view name;
};

constexpr StrategyName kStrategyNames[] = {
    {StrategyKind::Abstract, "abstract"},
    {StrategyKind::Claims, "claims"},
    {StrategyKind::Description, "description"},
    {StrategyKind::BriefDescription, "brief_description"},
    {StrategyKind::SummarySegment, "summary_segment"},
    {StrategyKind::SummaryPlusFirstClaim, "summary_plus_first_claim"},
    {StrategyKind::BriefPlusFirstClaim, "brief_plus_first_claim"},
};

FormulatedQuery skipped(std::string reason) {
    return {std::nullopt, std::move(reason)};
}

FormulatedQuery section(const std::string& text, std::string_view what) {
    if (trim(text).empty()) return skipped(std::string(what) + " is empty");
    return {text, {}};
}

}  // namespace

QueryStrategy QueryStrategy::parse(std::string_view name) {
    for (const auto& s : kStrategyNames) {
        if (s.name == name) return {s.kind, {}, {}, std::nullopt};
    }
    constexpr std::string_view prefix = "generated:";
    if (name.starts_with(prefix)) {
        auto rest = name.substr(prefix.size());
        std::vector<std::string> parts;
        std::size_t pos = 0;
        while (true) {
            auto colon = rest.find(':', pos);
            parts.emplace_back(rest.substr(pos, colon == std::string_view::npos ? rest.npos : colon - pos));
            if (colon == std::string_view::npos) break;
            pos = colon + 1;
        }
        if (parts.size() < 2 || parts.size() > 3) {
            throw InputError("generated strategy must be generated:<method>:<source>[:<profile>], got '" +
                             std::string(name) + "'");
        }
        if (!is_known_method(parts[0])) throw InputError("unknown summary method '" + parts[0] + "'");
        if (!is_known_source(parts[1])) throw InputError("unknown summary source '" + parts[1] + "'");
        QueryStrategy s{StrategyKind::Generated, parts[0], parts[1], std::nullopt};
        if (parts.size() == 3) s.profile = parts[2];
        return s;
    }
    std::string valid;
    for (const auto& s : kStrategyNames) valid.append(s.name).append(", ");
    throw InputError("unknown query strategy '" + std::string(name) + "' (expected one of: " + valid +
                     "generated:<method>:<source>[:<profile>])");
}

std::string QueryStrategy::name() const {
    if (kind == StrategyKind::Generated) return "generated:" + registry_key();
    for (const auto& s : kStrategyNames) {
        if (s.kind == kind) return std::string(s.name);
    }
    return "unknown";
}

std::string QueryStrategy::registry_key() const {
    return SummaryRegistry::config_key(method, source, profile);
}

std::string representation_text(const PatentDocument& doc, std::string_view representation) {
    if (representation == "claims") return doc.claims_text();
    if (representation == "abstract") return doc.abstract_text;
    if (representation == "description") return doc.description;
    throw InputError("unknown index representation '" + std::string(representation) +
                     "' (expected claims, abstract or description)");
}

IndexBuild build_index(const Corpus& corpus, std::string_view representation, std::size_t cap,
                       EmbeddingBackend& backend, std::size_t batch_size) {
    if (corpus.empty()) throw InputError("cannot build an index over an empty corpus");
    if (cap < 1) throw InputError("index cap must be >= 1");

    IndexBuild out;
    out.index.representation = std::string(representation);
    out.index.cap = cap;

    std::vector<const PatentDocument*> docs;
    std::vector<std::string> texts;
    for (const auto& doc : corpus.documents()) {
        auto text = representation_text(doc, representation);
        if (trim(text).empty()) {
            out.warnings.push_back("skipped " + doc.doc_id + ": empty " + std::string(representation));
            continue;
        }
        docs.push_back(&doc);
        texts.push_back(cap_tokens(text, cap));
    }

    batch_size = std::max<std::size_t>(1, batch_size);
    for (std::size_t begin = 0; begin < texts.size(); begin += batch_size) {
        auto n = std::min(batch_size, texts.size() - begin);
        auto vectors = backend.embed(std::span<const std::string>(texts).subspan(begin, n));
        if (vectors.size() != n) throw BackendError("backend " + backend.id() + " returned wrong number of vectors");
        for (std::size_t i = 0; i < n; ++i) {
            auto& v = vectors[i];
            const auto& id = docs[begin + i]->doc_id;
            if (v.is_zero()) {
                out.warnings.push_back("skipped " + id + ": representation has no embeddable features");
                continue;
            }
            if (out.index.dim == 0) {
                out.index.dim = v.dim();
                out.index.backend_id = v.backend_id;
            } else if (v.dim() != out.index.dim) {
                throw BackendError("backend " + backend.id() + " returned mixed dimensions");
            }
            out.index.entries.push_back({id, std::move(v)});
        }
    }
    if (out.index.backend_id.empty()) out.index.backend_id = backend.id();
    return out;
}

void write_index(const std::filesystem::path& path, const VectorIndex& index) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    nlohmann::json header = {{"representation", index.representation},
                             {"cap", index.cap},
                             {"backend_id", index.backend_id},
                             {"dim", index.dim},
                             {"size", index.entries.size()}};
    out << header.dump() << '\n';
    for (const auto& e : index.entries) {
        out << nlohmann::json{{"doc_id", e.doc_id}, {"vector", e.vector.values}}.dump() << '\n';
    }
}

VectorIndex read_index(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read index '" + path.string() + "'");
    VectorIndex index;
    std::string line;
    if (!std::getline(in, line)) throw InputError("index '" + path.string() + "' is empty");
    try {
        auto header = nlohmann::json::parse(line);
        index.representation = header.at("representation").get<std::string>();
        index.cap = header.at("cap").get<std::size_t>();
        index.backend_id = header.at("backend_id").get<std::string>();
        index.dim = header.at("dim").get<std::size_t>();
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            auto j = nlohmann::json::parse(line);
            IndexEntry e;
            e.doc_id = j.at("doc_id").get<std::string>();
            e.vector.values = j.at("vector").get<std::vector<float>>();
            e.vector.backend_id = index.backend_id;
            if (e.vector.dim() != index.dim) {
                throw InputError(path.string() + ":" + std::to_string(lineno) + ": vector dimension mismatch");
            }
            index.entries.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError("malformed index '" + path.string() + "': " + e.what());
    }
    return index;
}

FormulatedQuery formulate_query(const PatentDocument& doc, const DescriptionSegments& seg,
                                const QueryStrategy& strategy, const SummaryRegistry& summaries) {
    switch (strategy.kind) {
        case StrategyKind::Abstract: return section(doc.abstract_text, "abstract");
        case StrategyKind::Claims: return section(doc.claims_text(), "claims");
        case StrategyKind::Description: return section(doc.description, "description");
        case StrategyKind::BriefDescription:
            if (!seg.brief_description) return skipped("brief description not identifiable");
            return section(*seg.brief_description, "brief description");
        case StrategyKind::SummarySegment:
            if (!seg.summary_segment) return skipped("summary segment not identifiable");
            return section(*seg.summary_segment, "summary segment");
        case StrategyKind::SummaryPlusFirstClaim:
            if (!seg.summary_segment) return skipped("summary segment not identifiable");
            if (!seg.first_claim) return skipped("no independent claim");
            return {*seg.summary_segment + " " + seg.first_claim->text, {}};
        case StrategyKind::BriefPlusFirstClaim:
            if (!seg.brief_description) return skipped("brief description not identifiable");
            if (!seg.first_claim) return skipped("no independent claim");
            return {*seg.brief_description + " " + seg.first_claim->text, {}};
        case StrategyKind::Generated: {
            const auto* s = summaries.find(strategy.registry_key(), doc.doc_id);
            if (s == nullptr) return skipped("no registered summary for " + strategy.registry_key());
            return section(s->text, "registered summary");
        }
    }
    return skipped("unsupported strategy");
}

std::vector<Hit> rank_entries(const VectorIndex& index, const EmbeddingVector& query, std::size_t k,
                              const std::optional<std::string>& exclude) {
    if (k == 0) throw InputError("k must be >= 1");
    std::vector<Hit> scored;
    scored.reserve(index.entries.size());
    for (const auto& e : index.entries) {
        if (exclude && e.doc_id == *exclude) continue;
        scored.push_back({e.doc_id, cosine(query, e.vector), 0});
    }
    auto order = [](const Hit& a, const Hit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    };
    auto keep = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), order);
    scored.resize(keep);
    for (std::size_t i = 0; i < scored.size(); ++i) scored[i].rank = i + 1;
    return scored;
}

SearchResult search(const VectorIndex& index, std::string_view query, std::size_t k,
                    const std::optional<std::string>& exclude, EmbeddingBackend& backend) {
    if (trim(query).empty()) throw InputError("empty query");
    if (k == 0) throw InputError("k must be >= 1");
    auto q = backend.embed_one(cap_tokens(query, index.cap));
    SearchResult r;
    r.backend_mismatch = !index.backend_id.empty() && q.backend_id != index.backend_id;
    if (!index.entries.empty() && q.dim() != index.dim) {
        throw BackendError("query embedding dim " + std::to_string(q.dim()) + " does not match index dim " +
                           std::to_string(index.dim) + " (index backend " + index.backend_id + ", query backend " +
                           q.backend_id + ")");
    }
    r.hits = rank_entries(index, q, k, exclude);
    return r;
}

std::map<std::string, std::vector<std::string>> RunTable::rankings() const {
    std::map<std::string, std::vector<RunRow>> grouped;
    for (const auto& r : rows) grouped[r.topic_id].push_back(r);
    std::map<std::string, std::vector<std::string>> out;
    for (auto& [topic, list] : grouped) {
        std::stable_sort(list.begin(), list.end(), [](const RunRow& a, const RunRow& b) { return a.rank < b.rank; });
        auto& ids = out[topic];
        for (const auto& r : list) ids.push_back(r.doc_id);
    }
    return out;
}

std::string format_run(const RunTable& run) {
    std::string out;
    char score[64];
    for (const auto& r : run.rows) {
        std::snprintf(score, sizeof score, "%.6f", r.score);
        out.append(r.topic_id).append(" Q0 ").append(r.doc_id).append(" ");
        out.append(std::to_string(r.rank)).append(" ").append(score).append(" ").append(r.tag).append("\n");
    }
    return out;
}

void write_run(const std::filesystem::path& path, const RunTable& run) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << format_run(run);
}

RunTable read_run(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read run file '" + path.string() + "'");
    RunTable run;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto f = split_whitespace(line);
        if (f.empty()) continue;
        if (f.size() != 6) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected 'topic Q0 doc rank score tag'");
        }
        try {
            run.rows.push_back({std::string(f[0]), std::string(f[2]), std::stoul(std::string(f[3])),
                                std::stod(std::string(f[4])), std::string(f[5])});
        } catch (const std::exception&) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": bad rank or score");
        }
    }
    return run;
}

nlohmann::json RunReport::to_json(bool include_queries) const {
    nlohmann::json skipped_json = nlohmann::json::array();
    for (const auto& s : skipped) skipped_json.push_back({{"topic_id", s.topic_id}, {"reason", s.reason}});
    nlohmann::json j = {{"strategy", strategy},           {"tag", tag},
                        {"skipped", skipped_json},        {"query_words", query_words},
                        {"backend_mismatch", backend_mismatch}, {"warnings", warnings}};
    if (include_queries) j["queries"] = queries;
    return j;
}

RunReport RunReport::from_json(const nlohmann::json& j) {
    RunReport r;
    r.strategy = j.at("strategy").get<std::string>();
    r.tag = j.value("tag", r.strategy);
    for (const auto& s : j.at("skipped")) {
        r.skipped.push_back({s.at("topic_id").get<std::string>(), s.value("reason", "")});
    }
    r.query_words = j.value("query_words", std::map<std::string, std::size_t>{});
    r.queries = j.value("queries", std::map<std::string, std::string>{});
    r.backend_mismatch = j.value("backend_mismatch", false);
    r.warnings = j.value("warnings", std::vector<std::string>{});
    return r;
}

SegmentStore segment_corpus(const Corpus& corpus, const HeadingDictionary& dict) {
    SegmentStore store;
    for (const auto& doc : corpus.documents()) store.emplace(doc.doc_id, segment_document(doc, dict));
    return store;
}

RunOutput run_strategy(const TopicSet& topics, const Corpus& corpus, const SegmentStore& segments,
                       const SummaryRegistry& summaries, const VectorIndex& index, const QueryStrategy& strategy,
                       EmbeddingBackend& backend, const RunOptions& options) {
    RunOutput out;
    out.report.strategy = strategy.name();
    out.report.tag = strategy.name();
    if (strategy.kind == StrategyKind::Generated && !summaries.has_config(strategy.registry_key())) {
        throw InputError("strategy " + strategy.name() + " has no registered summaries");
    }

    const DescriptionSegments none;
    for (const auto& topic : topics.topics) {
        const auto* doc = corpus.find(topic.doc_id);
        if (doc == nullptr) {
            out.report.skipped.push_back({topic.topic_id, "topic document " + topic.doc_id + " not in corpus"});
            continue;
        }
        auto seg_it = segments.find(doc->doc_id);
        const auto& seg = seg_it == segments.end() ? none : seg_it->second;

        auto query = formulate_query(*doc, seg, strategy, summaries);
        if (!query.text) {
            out.report.skipped.push_back({topic.topic_id, query.skip_reason});
            continue;
        }
        SearchResult result;
        try {
            std::optional<std::string> exclude;
            if (options.exclude_topic_doc) exclude = doc->doc_id;
            result = search(index, *query.text, options.k, exclude, backend);
        } catch (const BackendError& e) {
            throw BackendError("topic " + topic.topic_id + ": " + e.what());
        } catch (const InputError& e) {
            throw InputError("topic " + topic.topic_id + ": " + e.what());
        }
        if (result.backend_mismatch && !out.report.backend_mismatch) {
            out.report.backend_mismatch = true;
            out.report.tag += "+mixed-backend";
            out.report.warnings.push_back("query backend differs from index backend " + index.backend_id);
        }
        out.report.query_words[topic.topic_id] = word_count(*query.text);
        out.report.queries[topic.topic_id] = *query.text;
        for (auto& h : result.hits) {
            out.table.rows.push_back({topic.topic_id, std::move(h.doc_id), h.rank, h.score, {}});
        }
    }
    for (auto& r : out.table.rows) r.tag = out.report.tag;
    return out;
}

}  // namespace patentsum
