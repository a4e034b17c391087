#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "stub_server.hpp"
#include "support.hpp"

#include "patentsum/error.hpp"
#include "patentsum/pipeline.hpp"

using namespace patentsum;

namespace {

PatentDocument make_doc(const std::string& id, bool with_summary) {
    PatentDocument d;
    d.doc_id = id;
    d.title = "Title " + id;
    d.abstract_text = "An apparatus for " + id + ". It moves parts.";
    d.claims = {{1, "1. A gear assembly for " + id + " comprising a shaft."},
                {2, "2. The gear assembly of claim 1, wherein the shaft is hollow."}};
    d.description = "BACKGROUND\nGears are known. Shafts break.\n";
    if (with_summary) d.description += "SUMMARY\nThe gear turns the shaft. The shaft drives a pump. Both are steel.\n";
    d.description += "DETAILED DESCRIPTION\nThe device of " + id + " has many parts. Each part is described.\n";
    return d;
}

/// Five documents, three with a summary heading.
RunConfig small_setup(const testing::TempDir& dir) {
    std::string jsonl;
    for (int i = 0; i < 5; ++i) jsonl += document_to_json(make_doc("D" + std::to_string(i), i < 3)).dump() + "\n";
    testing::write_file(dir / "corpus.jsonl", jsonl);
    testing::write_file(dir / "topics.txt", "# topic doc\nT1 D0\nT2 D1\n");
    testing::write_file(dir / "qrels.txt", "T1 0 D3 1\nT2 0 D4 1\n");
    RunConfig cfg;
    cfg.corpus = dir / "corpus.jsonl";
    cfg.topics = dir / "topics.txt";
    cfg.qrels = dir / "qrels.txt";
    cfg.out = dir / "out";
    cfg.dim = 128;
    return cfg;
}

}  // namespace

TEST_CASE("config files and settings") {
    testing::TempDir dir;
    testing::write_file(dir / "exp.conf",
                        "# experiment\ncorpus.path = c.jsonl\nrun.strategies = claims, abstract\n"
                        "run.k = 30\nfinetune.summary_words = 100-200\noutput.seed=7\n");
    RunConfig cfg;
    apply_settings(cfg, read_config_file(dir / "exp.conf"));
    CHECK(cfg.corpus == "c.jsonl");
    CHECK(cfg.strategies == std::vector<std::string>{"claims", "abstract"});
    CHECK(cfg.k == 30);
    CHECK(cfg.summary_min_words == 100);
    CHECK(cfg.summary_max_words == 200);
    CHECK(cfg.seed == 7);

    apply_setting(cfg, "run.k", "5");
    CHECK(cfg.k == 5);
    apply_setting(cfg, "eval.precision_cutoffs", "1,2");
    CHECK(cfg.metrics.names() == std::vector<std::string>{"MAP@100", "P@1", "P@2", "R@5", "R@10", "R@30"});

    CHECK_THROWS_AS(apply_setting(cfg, "run.k", "many"), InputError);
    CHECK_THROWS_AS(apply_setting(cfg, "run.k", "0"), InputError);
    CHECK_THROWS_AS(apply_setting(cfg, "run.strategies", "keywords"), InputError);
    CHECK_THROWS_AS(apply_setting(cfg, "finetune.source_words", "800-700"), InputError);
    CHECK_THROWS_AS(apply_setting(cfg, "no.such", "1"), InputError);

    testing::write_file(dir / "bad.conf", "run.k = 3\nmystery = 1\n");
    CHECK_THROWS_WITH_AS(read_config_file(dir / "bad.conf"), doctest::Contains(":2:"), InputError);
    CHECK_THROWS_AS(read_config_file(dir / "absent.conf"), InputError);

    for (const auto& key : config_keys()) CHECK(key.find('.') != std::string::npos);
}

TEST_CASE("backend selection") {
    RunConfig cfg;
    CHECK(make_embedding_backend(cfg)->id() == "hashed-fnv1a64-v1-unibi-d1024");
    CHECK_FALSE(make_generation_backend(cfg));
    cfg.backend = "remote";
    CHECK_THROWS_AS(make_embedding_backend(cfg), InputError);
    cfg.endpoint = "http://127.0.0.1:1";
    CHECK(make_embedding_backend(cfg)->id().starts_with("remote:"));
    CHECK(make_generation_backend(cfg));
}

TEST_CASE("cmd_segment") {
    testing::TempDir dir;
    auto cfg = small_setup(dir);
    std::ostringstream log;
    auto stats = cmd_segment(cfg, log);
    CHECK(stats.documents == 5);
    CHECK(stats.with_summary == 3);
    CHECK(stats.coverage == doctest::Approx(0.6));
    CHECK(log.str().find("3/5 = 0.6000") != std::string::npos);

    auto first = testing::read_file(stats.output);
    cmd_segment(cfg, log);
    CHECK(testing::read_file(stats.output) == first);

    auto store = read_segment_store(stats.output);
    REQUIRE(store.size() == 5);
    CHECK(*store.at("D0").summary_segment == "The gear turns the shaft. The shaft drives a pump. Both are steel.");
    CHECK_FALSE(store.at("D4").summary_segment);
    CHECK(store.at("D4").first_claim->number == 1);

    cfg.dictionary = dir / "missing.txt";
    CHECK_THROWS_WITH_AS(cmd_segment(cfg, log), doctest::Contains("missing.txt"), InputError);
}

TEST_CASE("segment store round-trips") {
    auto doc = make_doc("X", true);
    auto seg = segment_document(doc, HeadingDictionary::seed());
    auto back = segments_from_json(segments_to_json("X", seg));
    CHECK(back.summary_segment == seg.summary_segment);
    CHECK(back.brief_description == seg.brief_description);
    CHECK(back.first_claim == seg.first_claim);
}

TEST_CASE("source_text") {
    auto doc = make_doc("X", false);
    auto seg = segment_document(doc, HeadingDictionary::seed());
    CHECK(source_text(doc, seg, "claims") == doc.claims_text());
    CHECK_FALSE(source_text(doc, seg, "summary_segment"));
    CHECK_THROWS_WITH_AS(source_text(doc, seg, "title"), doctest::Contains("summary_segment+first_claim"), InputError);
}

TEST_CASE("cmd_summarize") {
    testing::TempDir dir;
    auto cfg = small_setup(dir);
    std::ostringstream log;

    SUBCASE("extractive writes one artifact per document") {
        auto stats = cmd_summarize(cfg, log);
        CHECK(stats.generated == 5);
        CHECK(stats.output.filename() == "extractive-sentence.description.jsonl");
        SummaryRegistry reg;
        reg.load(stats.output);
        CHECK(reg.size() == 5);
        auto again = testing::read_file(stats.output);
        cmd_summarize(cfg, log);
        CHECK(testing::read_file(stats.output) == again);
    }
    SUBCASE("documents lacking the source are skipped") {
        cfg.source = "summary_segment";
        auto stats = cmd_summarize(cfg, log);
        CHECK(stats.generated == 3);
        CHECK(stats.skipped == std::vector<std::string>{"D3", "D4"});
    }
    SUBCASE("unknown method lists the valid ones") {
        cfg.method = "lda";
        CHECK_THROWS_WITH_AS(cmd_summarize(cfg, log), doctest::Contains("abstractive"), InputError);
    }
    SUBCASE("abstractive without an endpoint falls back") {
        cfg.method = "abstractive";
        auto stats = cmd_summarize(cfg, log);
        SummaryRegistry reg;
        reg.load(stats.output);
        CHECK(reg.size() == 5);
        CHECK(stats.output.filename() == "abstractive.description.default.jsonl");
        CHECK(log.str().find("via fallback") != std::string::npos);
        cfg.fallback = false;
        CHECK_THROWS_AS(cmd_summarize(cfg, log), BackendError);
    }
    SUBCASE("abstractive with a remote generator and the adjusted profile") {
        testing::StubServer server;
        server.on("/v1/summarize", [](const nlohmann::json& req) {
            auto n = (req.at("min_words").get<std::size_t>() + req.at("max_words").get<std::size_t>()) / 2;
            return std::pair{200, nlohmann::json{{"text", testing::repeat_words("g", n) + "."}, {"model", "gen"}}.dump()};
        });
        cfg.method = "abstractive";
        cfg.profile = "adjusted";
        cfg.endpoint = server.endpoint();
        auto stats = cmd_summarize(cfg, log);
        CHECK(stats.output.filename() == "abstractive.description.adjusted.jsonl");
        SummaryRegistry reg;
        reg.load(stats.output);
        REQUIRE(reg.size() == 5);
        auto req = server.requests().at(0);
        CHECK(req.at("min_words") == 250);
        CHECK(req.at("max_words") == 300);
        CHECK(req.at("length_penalty") == 0.8);
        auto meta = nlohmann::json::parse(testing::read_file(dir / "out/summaries/abstractive.description.adjusted.meta.json"));
        CHECK(meta.at("out_of_range") == 0);
        CHECK(log.str().find("outside the profile") == std::string::npos);
    }
    SUBCASE("short remote summaries are flagged") {
        testing::StubServer server;
        server.on("/v1/summarize", [](const nlohmann::json&) {
            return std::pair{200, nlohmann::json{{"text", "Too short."}, {"model", "gen"}}.dump()};
        });
        cfg.method = "abstractive";
        cfg.profile = "adjusted";
        cfg.endpoint = server.endpoint();
        cmd_summarize(cfg, log);
        CHECK(log.str().find("warning: 5 summaries fall outside") != std::string::npos);
    }
}

TEST_CASE("cmd_index, cmd_run, cmd_eval and cmd_report") {
    testing::TempDir dir;
    auto cfg = small_setup(dir);
    std::ostringstream log;

    auto build = cmd_index(cfg, log);
    CHECK(build.index.size() == 5);
    CHECK(fs::exists(cfg.index_path()));

    auto hits = cmd_search(cfg, "gear assembly for D2", log);
    REQUIRE_FALSE(hits.hits.empty());
    CHECK(hits.hits[0].doc_id == "D2");

    cfg.strategies = {"abstract", "claims", "summary_segment"};
    cfg.k = 3;
    auto runs = cmd_run(cfg, log);
    REQUIRE(runs.size() == 3);
    for (const auto& r : runs) {
        CHECK(fs::exists(r));
        CHECK(read_run(r).rows.size() == 6);
    }

    auto reports = cmd_eval(cfg, runs, log);
    REQUIRE(reports.size() == 3);
    auto claims = MetricReport::from_json(nlohmann::json::parse(testing::read_file(reports[1])));
    CHECK(claims.strategy == "claims");
    CHECK(claims.evaluated == 2);
    REQUIRE(claims.avg_query_words);

    auto tables = cmd_report(cfg, {reports[0], reports[1]}, log);
    REQUIRE(tables.size() == 2);
    auto tsv = testing::read_file(cfg.out / "report.sections.tsv");
    CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 3);
    auto txt = testing::read_file(cfg.out / "report.sections.txt");
    CHECK(txt.find('*') != std::string::npos);

    testing::write_file(dir / "qrels.txt", "T1 0 D3 1\n");
    CHECK_THROWS_WITH_AS(cmd_eval(cfg, runs, log), doctest::Contains("T2"), InputError);
    CHECK_THROWS_AS(cmd_eval(cfg, {}, log), InputError);
    CHECK_THROWS_AS(cmd_report(cfg, {dir / "nope.json"}, log), InputError);
}

TEST_CASE("cmd_eval_summaries") {
    testing::TempDir dir;
    auto cfg = small_setup(dir);
    std::ostringstream log;
    cfg.summaries = {cmd_summarize(cfg, log).output};
    auto rows = cmd_eval_summaries(cfg, log);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].reference == "Summary");
    CHECK(rows[0].rouge1 > 0.0);
    CHECK(rows[0].rouge1 <= 1.0);
    CHECK(fs::exists(cfg.out / "eval" / "intrinsic.json"));
    auto written = cmd_report(cfg, {cfg.out / "eval" / "intrinsic.json"}, log);
    CHECK(written.size() == 2);
}

#ifdef PATENTSUM_CLI
TEST_CASE("command-line exit codes") {
    testing::TempDir dir;
    auto cfg = small_setup(dir);
    auto run = [&](const std::string& args) {
        auto cmd = std::string(PATENTSUM_CLI) + " " + args + " > " + (dir / "stdout.txt").string() + " 2>&1";
        int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    auto out = " --out " + cfg.out.string();
    CHECK(run("--help") == 0);
    CHECK(run("segment --corpus " + cfg.corpus.string() + out) == 0);
    CHECK(run("segment --corpus " + (dir / "absent.jsonl").string() + out) == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("index --corpus " + cfg.corpus.string() + out + " --backend remote --endpoint http://127.0.0.1:1") == 2);
    CHECK(run("search 'gear assembly'" + out) == 1);  // no index yet
    CHECK(run("index --corpus " + cfg.corpus.string() + out) == 0);
    CHECK(run("search 'gear assembly' --k 2" + out) == 0);
    auto printed = testing::read_file(dir / "stdout.txt");
    CHECK(printed.starts_with("1\tD"));
    CHECK(std::count(printed.begin(), printed.end(), '\n') == 2);
}
#endif
