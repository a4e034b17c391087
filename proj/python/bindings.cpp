#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "patentsum/error.hpp"
#include "patentsum/evaluate.hpp"
#include "patentsum/extractive.hpp"
#include "patentsum/pipeline.hpp"
#include "patentsum/segmenter.hpp"
#include "patentsum/text.hpp"

namespace py = pybind11;
using namespace patentsum;

namespace {

RunConfig config_from(const std::map<std::string, std::string>& settings) {
    RunConfig cfg;
    apply_settings(cfg, settings);
    return cfg;
}

py::dict rouge_dict(const RougeScore& s) {
    py::dict d;
    d["precision"] = s.precision;
    d["recall"] = s.recall;
    d["f1"] = s.f1;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Patent prior-art retrieval toolkit";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    auto backend = py::register_exception<BackendError>(m, "BackendError", PyExc_RuntimeError);
    py::register_exception<BackendUnavailable>(m, "BackendUnavailable", backend.ptr());

    m.def("word_count", [](const std::string& t) { return word_count(t); }, py::arg("text"));
    m.def("cap_tokens", [](const std::string& t, std::size_t cap) { return cap_tokens(t, cap); }, py::arg("text"),
          py::arg("cap") = kDefaultIndexCap);
    m.def("split_sentences", [](const std::string& t) { return split_sentences(t); }, py::arg("text"));

    m.def(
        "hashed_embed",
        [](const std::string& t, std::size_t dim) { return hashed_embed(t, dim).values; }, py::arg("text"),
        py::arg("dim") = 1024, "Unit-norm feature-hashed embedding (zero vector for empty text).");

    m.def(
        "segment",
        [](const std::string& description, std::optional<std::filesystem::path> dictionary) {
            auto dict = HeadingDictionary::seed();
            if (dictionary) dict.merge(HeadingDictionary::load(*dictionary));
            auto seg = extract_segments(description, dict);
            py::dict d;
            d["summary_segment"] = seg.summary_segment;
            d["background"] = seg.background;
            d["brief_description"] = seg.brief_description;
            py::list spans;
            for (const auto& s : seg.spans) {
                spans.append(py::make_tuple(std::string(label_name(s.label)), s.start, s.end));
            }
            d["spans"] = spans;
            return d;
        },
        py::arg("description"), py::arg("dictionary") = std::nullopt);

    m.def(
        "first_independent_claim",
        [](const std::vector<std::string>& claims) -> std::optional<std::pair<int, std::string>> {
            std::vector<Claim> list;
            for (std::size_t i = 0; i < claims.size(); ++i) list.push_back({static_cast<int>(i + 1), claims[i]});
            auto c = extract_first_independent_claim(list);
            if (!c) return std::nullopt;
            return std::pair{c->number, c->text};
        },
        py::arg("claims"), "Claims are numbered by position from 1.");

    m.def(
        "extractive_summary",
        [](const std::string& text, std::size_t target_words, std::optional<std::size_t> k, std::uint64_t seed,
           std::size_t dim) {
            HashedBackend embedder(dim);
            ExtractiveConfig cfg;
            cfg.target_words = target_words;
            cfg.k_override = k;
            cfg.seed = seed;
            cfg.validate();
            auto r = extractive_summarize(text, embedder, cfg);
            py::dict d;
            d["text"] = r.summary.text;
            d["words"] = r.summary.words;
            d["k"] = r.k;
            d["selected"] = r.selected;
            d["sentences"] = r.sentences;
            return d;
        },
        py::arg("text"), py::arg("target_words") = 150, py::arg("k") = std::nullopt, py::arg("seed") = 42,
        py::arg("dim") = 1024);

    m.def(
        "rouge",
        [](const std::string& candidate, const std::string& reference) {
            py::dict d;
            d["rouge1"] = rouge_dict(rouge_n(candidate, reference, 1));
            d["rouge2"] = rouge_dict(rouge_n(candidate, reference, 2));
            d["rougeL"] = rouge_dict(rouge_l(candidate, reference));
            return d;
        },
        py::arg("candidate"), py::arg("reference"));

    m.def(
        "evaluate",
        [](const std::filesystem::path& run, const std::filesystem::path& qrels, std::size_t map_cutoff) {
            MetricSet metrics;
            metrics.map_cutoff = map_cutoff;
            auto report = evaluate_run(read_run(run), ingest_qrels(qrels), metrics);
            py::dict d;
            d["mean"] = report.mean;
            d["evaluated"] = report.evaluated;
            d["skipped"] = report.skipped_topics;
            std::map<std::string, std::map<std::string, double>> per_topic;
            for (const auto& t : report.per_topic) per_topic[t.topic_id] = t.values;
            d["per_topic"] = per_topic;
            return d;
        },
        py::arg("run"), py::arg("qrels"), py::arg("map_cutoff") = 100);

    // Pipeline commands take the same `section.key` settings as config files
    // and return (result, log).
    m.def("config_keys", &config_keys);
    m.def(
        "segment_corpus",
        [](const std::map<std::string, std::string>& settings) {
            std::ostringstream log;
            auto s = cmd_segment(config_from(settings), log);
            py::dict d;
            d["documents"] = s.documents;
            d["with_summary"] = s.with_summary;
            d["coverage"] = s.coverage;
            d["output"] = s.output;
            return py::make_tuple(d, log.str());
        },
        py::arg("settings"));
    m.def(
        "summarize",
        [](const std::map<std::string, std::string>& settings) {
            std::ostringstream log;
            auto s = cmd_summarize(config_from(settings), log);
            return py::make_tuple(s.output, log.str());
        },
        py::arg("settings"));
    m.def(
        "index",
        [](const std::map<std::string, std::string>& settings) {
            std::ostringstream log;
            auto cfg = config_from(settings);
            cmd_index(cfg, log);
            return py::make_tuple(cfg.index_path(), log.str());
        },
        py::arg("settings"));
    m.def(
        "search",
        [](const std::map<std::string, std::string>& settings, const std::string& query) {
            std::ostringstream log;
            std::vector<std::pair<std::string, double>> hits;
            for (const auto& h : cmd_search(config_from(settings), query, log).hits) hits.emplace_back(h.doc_id, h.score);
            return hits;
        },
        py::arg("settings"), py::arg("query"));
    m.def(
        "run",
        [](const std::map<std::string, std::string>& settings) {
            std::ostringstream log;
            auto paths = cmd_run(config_from(settings), log);
            return py::make_tuple(paths, log.str());
        },
        py::arg("settings"));
    m.def(
        "eval_runs",
        [](const std::map<std::string, std::string>& settings, const std::vector<std::filesystem::path>& runs) {
            std::ostringstream log;
            auto paths = cmd_eval(config_from(settings), runs, log);
            return py::make_tuple(paths, log.str());
        },
        py::arg("settings"), py::arg("runs"));
    m.def(
        "report",
        [](const std::map<std::string, std::string>& settings, const std::vector<std::filesystem::path>& reports) {
            std::ostringstream log;
            auto paths = cmd_report(config_from(settings), reports, log);
            return py::make_tuple(paths, log.str());
        },
        py::arg("settings"), py::arg("reports"));
}
