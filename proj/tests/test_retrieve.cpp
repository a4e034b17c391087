#include <random>

#include "doctest.h"
#include "support.hpp"

#include "patentsum/error.hpp"
#include "patentsum/retrieve.hpp"
#include "patentsum/text.hpp"

using namespace patentsum;

namespace {

PatentDocument doc(std::string id, std::string claims, std::string abstract_text = "An abstract.") {
    PatentDocument d;
    d.doc_id = std::move(id);
    d.abstract_text = std::move(abstract_text);
    if (!claims.empty()) d.claims = {{1, std::move(claims)}};
    d.description = "SUMMARY\nA short summary of " + d.doc_id + ".\nDETAILED DESCRIPTION\nDetails.";
    return d;
}

Corpus planted_corpus() {
    std::vector<PatentDocument> docs;
    for (int i = 0; i < 10; ++i) {
        std::string claims = "1. A gear train with shaft number " + std::to_string(i) + " and housing.";
        if (i == 3 || i == 7) claims += " zyxwv plorbic";
        docs.push_back(doc("D" + std::to_string(i), claims));
    }
    return Corpus(std::move(docs));
}

}  // namespace

TEST_CASE("strategy names") {
    for (const char* n : {"abstract", "claims", "description", "brief_description", "summary_segment",
                          "summary_plus_first_claim", "brief_plus_first_claim"}) {
        CHECK(QueryStrategy::parse(n).name() == n);
    }
    auto g = QueryStrategy::parse("generated:abstractive:description:adjusted");
    CHECK(g.kind == StrategyKind::Generated);
    CHECK(g.registry_key() == "abstractive:description:adjusted");
    CHECK(g.name() == "generated:abstractive:description:adjusted");
    CHECK_THROWS_AS(QueryStrategy::parse("keywords"), InputError);
    CHECK_THROWS_AS(QueryStrategy::parse("generated:lda:description"), InputError);
    CHECK_THROWS_AS(QueryStrategy::parse("generated:abstractive"), InputError);
}

TEST_CASE("build_index") {
    HashedBackend backend(64);
    SUBCASE("one entry per document") {
        Corpus corpus({doc("A", "1. X."), doc("B", "1. Y."), doc("C", "1. Z.")});
        auto build = build_index(corpus, "claims", 3000, backend);
        CHECK(build.index.size() == 3);
        CHECK(build.index.dim == 64);
        CHECK(build.index.backend_id == backend.id());
        CHECK(build.warnings.empty());
    }
    SUBCASE("documents without claims are skipped with a warning") {
        Corpus corpus({doc("A", "1. X."), doc("NOCLAIMS", "")});
        auto build = build_index(corpus, "claims", 3000, backend);
        CHECK(build.index.size() == 1);
        REQUIRE(build.warnings.size() == 1);
        CHECK(build.warnings[0].find("NOCLAIMS") != std::string::npos);
    }
    SUBCASE("texts are capped before embedding") {
        testing::RecordingBackend recording;
        Corpus corpus({doc("BIG", testing::repeat_words("w", 5000))});
        build_index(corpus, "claims", 3000, recording);
        CHECK(recording.words == std::vector<std::size_t>{3000});
    }
    CHECK_THROWS_AS(build_index(Corpus{}, "claims", 3000, backend), InputError);
    Corpus one({doc("A", "1. X.")});
    CHECK_THROWS_AS(build_index(one, "title", 3000, backend), InputError);
}

TEST_CASE("index round-trips") {
    HashedBackend backend(32);
    auto build = build_index(planted_corpus(), "claims", 100, backend);
    testing::TempDir dir;
    write_index(dir / "i.jsonl", build.index);
    auto back = read_index(dir / "i.jsonl");
    REQUIRE(back.size() == build.index.size());
    CHECK(back.cap == 100);
    CHECK(back.representation == "claims");
    CHECK(back.backend_id == backend.id());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back.entries[i].doc_id == build.index.entries[i].doc_id);
        CHECK(back.entries[i].vector.values == build.index.entries[i].vector.values);
    }
}

TEST_CASE("formulate_query") {
    PatentDocument d = doc("T", "1. A device.");
    d.claims.push_back({2, "2. The device of claim 1."});
    auto seg = segment_document(d, HeadingDictionary::seed());
    SummaryRegistry none;

    CHECK(formulate_query(d, seg, QueryStrategy::parse("abstract"), none).text == d.abstract_text);
    CHECK(formulate_query(d, seg, QueryStrategy::parse("claims"), none).text == d.claims_text());
    CHECK(formulate_query(d, seg, QueryStrategy::parse("summary_plus_first_claim"), none).text ==
          *seg.summary_segment + " " + "1. A device.");
    CHECK(formulate_query(d, seg, QueryStrategy::parse("brief_plus_first_claim"), none).text ==
          *seg.brief_description + " 1. A device.");

    DescriptionSegments empty;
    auto q = formulate_query(d, empty, QueryStrategy::parse("brief_description"), none);
    CHECK_FALSE(q.text);
    CHECK_FALSE(q.skip_reason.empty());

    SummaryRegistry reg;
    reg.add({"T", "extractive-sentence", "description", std::nullopt, "h", "Registered summary text.", 3});
    CHECK(formulate_query(d, seg, QueryStrategy::parse("generated:extractive-sentence:description"), reg).text ==
          "Registered summary text.");
}

TEST_CASE("search") {
    HashedBackend backend(1024);
    auto corpus = planted_corpus();
    auto index = build_index(corpus, "claims", 3000, backend).index;

    SUBCASE("self query ranks first with score 1") {
        auto r = search(index, corpus.find("D5")->claims_text(), 3, std::nullopt, backend);
        CHECK(r.hits[0].doc_id == "D5");
        CHECK(r.hits[0].score == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r.hits[0].rank == 1);
        CHECK_FALSE(r.backend_mismatch);
    }
    SUBCASE("exclusion") {
        auto r = search(index, corpus.find("D5")->claims_text(), 10, std::string("D5"), backend);
        CHECK(r.hits.size() == 9);
        for (const auto& h : r.hits) CHECK(h.doc_id != "D5");
    }
    SUBCASE("planted bigrams occupy the top ranks") {
        auto r = search(index, "zyxwv plorbic", 10, std::nullopt, backend);
        std::set<std::string> top = {r.hits[0].doc_id, r.hits[1].doc_id};
        CHECK(top == std::set<std::string>{"D3", "D7"});
    }
    CHECK_THROWS_AS(search(index, "  ", 5, std::nullopt, backend), InputError);
    CHECK_THROWS_AS(search(index, "gear", 0, std::nullopt, backend), InputError);
    HashedBackend other(32);
    CHECK_THROWS_AS(search(index, "gear", 5, std::nullopt, other), BackendError);
}

TEST_CASE("ties are broken by doc_id") {
    HashedBackend backend(64);
    Corpus corpus({doc("B", "1. same text"), doc("A", "1. same text"), doc("C", "1. same text")});
    auto index = build_index(corpus, "claims", 3000, backend).index;
    auto r = search(index, "same text", 3, std::nullopt, backend);
    REQUIRE(r.hits.size() == 3);
    CHECK(r.hits[0].doc_id == "A");
    CHECK(r.hits[1].doc_id == "B");
    CHECK(r.hits[2].doc_id == "C");
}

TEST_CASE("run files") {
    RunTable run;
    run.rows = {{"T1", "US2", 1, 0.5, "claims"}, {"T1", "US3", 2, 0.1234567, "claims"}};
    CHECK(format_run(run) == "T1 Q0 US2 1 0.500000 claims\nT1 Q0 US3 2 0.123457 claims\n");
    testing::TempDir dir;
    write_run(dir / "r.run", run);
    auto back = read_run(dir / "r.run");
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[1].doc_id == "US3");
    CHECK(back.rows[1].score == doctest::Approx(0.123457));
    CHECK(back.rankings().at("T1") == std::vector<std::string>{"US2", "US3"});

    testing::write_file(dir / "bad.run", "T1 Q0 US2 1\n");
    CHECK_THROWS_AS(read_run(dir / "bad.run"), InputError);
}

TEST_CASE("run_strategy") {
    HashedBackend backend(256);
    auto corpus = planted_corpus();
    auto index = build_index(corpus, "claims", 3000, backend).index;
    auto segments = segment_corpus(corpus, HeadingDictionary::seed());
    TopicSet topics{{{"T1", "D3"}, {"T2", "D0"}, {"T3", "MISSING"}}, {}};
    SummaryRegistry none;

    auto a = run_strategy(topics, corpus, segments, none, index, QueryStrategy::parse("claims"), backend, {5, true});
    auto b = run_strategy(topics, corpus, segments, none, index, QueryStrategy::parse("claims"), backend, {5, true});
    CHECK(a.table.rows.size() == 10);
    CHECK(format_run(a.table) == format_run(b.table));
    REQUIRE(a.report.skipped.size() == 1);
    CHECK(a.report.skipped[0].topic_id == "T3");
    for (std::size_t i = 0; i < 5; ++i) CHECK(a.table.rows[i].rank == i + 1);
    CHECK(a.table.rows[0].doc_id == "D7");  // D3's planted twin, with D3 itself excluded
    CHECK(a.report.query_words.at("T1") == word_count(corpus.find("D3")->claims_text()));

    SummaryRegistry reg;
    reg.add({"D3", "extractive-sentence", "description", std::nullopt, "h", "zyxwv plorbic", 2});
    auto g = run_strategy(topics, corpus, segments, reg, index,
                          QueryStrategy::parse("generated:extractive-sentence:description"), backend, {5, true});
    CHECK(g.report.queries.at("T1") == "zyxwv plorbic");
    CHECK(g.report.skipped.size() == 2);  // T2 has no summary, T3 has no document
    CHECK_THROWS_AS(run_strategy(topics, corpus, segments, none, index,
                                 QueryStrategy::parse("generated:abstractive:claims"), backend),
                    InputError);

    HashedBackend unigram(256, HashedFeatures::Unigrams);
    auto mixed = run_strategy(topics, corpus, segments, none, index, QueryStrategy::parse("claims"), unigram);
    CHECK(mixed.report.backend_mismatch);
    CHECK(mixed.report.tag == "claims+mixed-backend");

    auto round = RunReport::from_json(g.report.to_json(true));
    CHECK(round.queries == g.report.queries);
    CHECK(round.skipped.size() == 2);
}
