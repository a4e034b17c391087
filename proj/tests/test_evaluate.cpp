#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "patentsum/error.hpp"
#include "patentsum/evaluate.hpp"

using namespace patentsum;

namespace {

using Ranked = std::vector<std::string>;

MetricReport single_topic(const Ranked& ranked, const std::vector<std::string>& relevant) {
    RunTable run;
    for (std::size_t i = 0; i < ranked.size(); ++i) run.rows.push_back({"T1", ranked[i], i + 1, 1.0, "x"});
    QrelsTable qrels;
    for (const auto& d : relevant) qrels.add("T1", d, 1);
    return evaluate_run(run, qrels, MetricSet{});
}

}  // namespace

TEST_CASE("rouge_n") {
    auto s = rouge_n("the cat sat", "the cat sat on the mat", 1);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 0.5);
    CHECK(s.f1 == doctest::Approx(2.0 / 3.0));

    auto same = rouge_n("A b c", "a B c", 1);
    CHECK(same.precision == 1.0);
    CHECK(same.recall == 1.0);
    CHECK(same.f1 == 1.0);

    auto disjoint = rouge_n("x y", "p q", 1);
    CHECK(disjoint.f1 == 0.0);
    CHECK(disjoint.precision == 0.0);

    auto clipped = rouge_n("the the the", "the cat", 1);
    CHECK(clipped.precision == doctest::Approx(1.0 / 3.0));
    CHECK(clipped.recall == 0.5);

    CHECK(rouge_n("a", "a b", 2).f1 == 0.0);
    CHECK(rouge_n("a b c", "a b d", 2).precision == 0.5);
}

TEST_CASE("rouge_l") {
    auto s = rouge_l("the cat sat", "the cat sat on the mat");
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 0.5);
    CHECK(s.f1 == doctest::Approx(2.0 / 3.0));

    std::vector<std::string> fwd = {"a", "b", "c", "d"}, rev = {"d", "c", "b", "a"};
    CHECK(lcs_length(fwd, rev) == 1);
    CHECK(lcs_length(fwd, rev) == testing::brute_lcs(fwd, rev));

    auto empty = rouge_l("", "the cat");
    CHECK(empty.precision == 0.0);
    CHECK(empty.recall == 0.0);
    CHECK(empty.f1 == 0.0);
}

TEST_CASE("rouge duality and LCS oracle on random pairs") {
    std::mt19937_64 rng(21);
    const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
    for (int trial = 0; trial < 300; ++trial) {
        std::string x, y;
        std::vector<std::string> xt, yt;
        for (std::size_t i = rng() % 9; i > 0; --i) xt.push_back(vocab[rng() % vocab.size()]);
        for (std::size_t i = rng() % 9; i > 0; --i) yt.push_back(vocab[rng() % vocab.size()]);
        for (const auto& t : xt) x += t + " ";
        for (const auto& t : yt) y += t + " ";

        CHECK(lcs_length(xt, yt) == testing::brute_lcs(xt, yt));
        auto r1 = rouge_n(x, y, 1), r1b = rouge_n(y, x, 1);
        CHECK(r1.precision == r1b.recall);
        CHECK(r1.recall == r1b.precision);
        auto rl = rouge_l(x, y), rlb = rouge_l(y, x);
        CHECK(rl.precision == rlb.recall);
        CHECK(rl.recall == rlb.precision);
        CHECK(rl.f1 <= 1.0);
    }
}

TEST_CASE("semantic_similarity") {
    HashedBackend backend;
    auto same = semantic_similarity("rotor blade pitch control", "rotor blade pitch control", backend);
    CHECK(same.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(same.backend_id == backend.id());
    auto unrelated = semantic_similarity("wind turbine rotor blade pitch bearing assembly",
                                         "polymerase chain reaction primer annealing temperature", backend);
    CHECK(std::abs(unrelated.value) < 0.2);
}

TEST_CASE("precision and recall") {
    std::set<std::string> rel = {"r1", "r2"};
    Ranked ranked = {"r1", "x", "r2", "y", "z"};
    CHECK(precision_at_k(ranked, rel, 5) == doctest::Approx(0.4));
    CHECK(recall_at_k(ranked, rel, 5) == 1.0);

    Ranked none = {"x", "y"};
    CHECK(precision_at_k(none, rel, 5) == 0.0);
    CHECK(recall_at_k(none, rel, 5) == 0.0);

    std::set<std::string> three = {"a", "b", "c"};
    Ranked short_list = {"a", "b", "c"};
    CHECK(precision_at_k(short_list, three, 5) == doctest::Approx(0.6));
    CHECK_THROWS_AS(recall_at_k(short_list, {}, 5), std::invalid_argument);
}

TEST_CASE("average_precision") {
    std::set<std::string> rel = {"r1", "r2"};
    Ranked ranked = {"r1", "x", "r2"};
    CHECK(average_precision(ranked, rel, 100) == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0));
    CHECK(average_precision(Ranked{"r2", "r1", "x"}, rel, 100) == 1.0);

    Ranked late;
    for (int i = 0; i < 100; ++i) late.push_back("n" + std::to_string(i));
    late.push_back("r1");
    CHECK(average_precision(late, {"r1"}, 100) == 0.0);
    CHECK(average_precision(late, {"r1"}, 101) == doctest::Approx(1.0 / 101.0));
}

TEST_CASE("AP is unchanged by swapping two non-relevant documents") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        Ranked ranked;
        std::set<std::string> rel;
        for (int i = 0; i < 20; ++i) {
            ranked.push_back("d" + std::to_string(i));
            if (rng() % 4 == 0) rel.insert(ranked.back());
        }
        if (rel.empty()) rel.insert("d19");
        auto before = average_precision(ranked, rel, 15);
        std::vector<std::size_t> nonrel;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            if (!rel.count(ranked[i])) nonrel.push_back(i);
        }
        if (nonrel.size() < 2) continue;
        std::swap(ranked[nonrel[rng() % nonrel.size()]], ranked[nonrel[rng() % nonrel.size()]]);
        CHECK(average_precision(ranked, rel, 15) == before);
    }
}

TEST_CASE("evaluate_run") {
    auto perfect = single_topic({"r1", "r2", "x"}, {"r1", "r2"});
    CHECK(perfect.mean.at("MAP@100") == 1.0);
    CHECK(perfect.mean.at("P@5") == doctest::Approx(0.4));
    CHECK(perfect.mean.at("R@5") == 1.0);
    CHECK(perfect.evaluated == 1);
    CHECK(perfect.metric_names == std::vector<std::string>{"MAP@100", "P@5", "P@10", "P@30", "R@5", "R@10", "R@30"});

    RunTable run;
    run.rows = {{"T1", "a", 1, 1, "x"}, {"T2", "z", 1, 1, "x"}, {"T2", "b", 2, 0.5, "x"}};
    QrelsTable qrels;
    qrels.add("T1", "a", 1);
    qrels.add("T2", "b", 2);
    auto two = evaluate_run(run, qrels, MetricSet{});
    CHECK(two.mean.at("MAP@100") == doctest::Approx(0.75));

    RunTable stray = run;
    stray.rows.push_back({"T9", "a", 1, 1, "x"});
    CHECK_THROWS_WITH_AS(evaluate_run(stray, qrels, MetricSet{}), doctest::Contains("T9"), InputError);
    auto skipped = evaluate_run(stray, qrels, MetricSet{}, {"T9"});
    CHECK(skipped.evaluated == 2);
    CHECK(std::find(skipped.skipped_topics.begin(), skipped.skipped_topics.end(), "T9") != skipped.skipped_topics.end());

    QrelsTable zero = qrels;
    zero.add("T3", "q", 0);
    RunTable with3 = run;
    with3.rows.push_back({"T3", "q", 1, 1, "x"});
    auto excluded = evaluate_run(with3, zero, MetricSet{});
    CHECK(excluded.evaluated == 2);
    CHECK_FALSE(excluded.warnings.empty());

    MetricSet map50{50, {5}, {30}};
    auto custom = evaluate_run(run, qrels, map50);
    CHECK(custom.metric_names == std::vector<std::string>{"MAP@50", "P@5", "R@30"});

    auto round = MetricReport::from_json(two.to_json());
    CHECK(round.mean == two.mean);
    CHECK(round.per_topic.size() == 2);
}

TEST_CASE("evaluate_run matches the naive evaluator") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        auto c = testing::random_eval_case(rng, 5, 30);
        auto report = evaluate_run(c.run, c.qrels, MetricSet{});
        auto naive = testing::naive_evaluate(c.run, c.qrels, MetricSet{});
        CHECK(report.evaluated == naive.evaluated);
        for (const auto& [name, value] : naive.mean) CHECK(report.mean.at(name) == value);
    }
}

TEST_CASE("render_extrinsic") {
    auto make = [](const std::string& strategy, double map, double words) {
        MetricReport r;
        r.strategy = strategy;
        r.metric_names = MetricSet{}.names();
        for (const auto& n : r.metric_names) r.mean[n] = map / 2;
        r.mean["MAP@100"] = map;
        r.evaluated = 24;
        r.avg_query_words = words;
        return r;
    };
    std::vector<ExtrinsicRow> rows = {{"Abstract", "", make("abstract", 0.2631, 109)},
                                      {"Claims", "", make("claims", 0.2772, 982)}};
    auto t = render_extrinsic(rows, MetricSet{});
    CHECK(t.text.find("27.72%*") != std::string::npos);
    CHECK(t.text.find("26.31%*") == std::string::npos);
    CHECK(t.text.find("982") != std::string::npos);
    CHECK(t.tsv.starts_with("Source\tMethod\tAvg. #words\tMAP@100\tP@5\tP@10\tP@30\tR@5\tR@10\tR@30"));
    CHECK(t.tsv.find("0.277200") != std::string::npos);

    std::vector<ExtrinsicRow> one = {rows[0]};
    CHECK(render_extrinsic(one, MetricSet{}).text.find('*') == std::string::npos);

    CHECK(format_percent(0.2772) == "27.72%");
    CHECK(format_percent(1.0) == "100.00%");
    CHECK(strategy_labels("claims") == std::pair<std::string, std::string>{"Claims", ""});
    CHECK(strategy_labels("generated:abstractive:claims:adjusted").second == "Abstractive (adjusted)");
    CHECK(strategy_labels("generated:extractive-sentence:description").first == "Description");
}

TEST_CASE("render_intrinsic") {
    std::vector<IntrinsicRow> rows = {{"Abstract", "Extractive (sentence)", "Description", 118, 0.51, 0.42, 0.81},
                                      {"Abstract", "Abstractive (default)", "Description", 90, 0.47, 0.45, 0.80}};
    auto t = render_intrinsic(rows);
    CHECK(t.text.find("0.51*") != std::string::npos);
    CHECK(t.text.find("0.45*") != std::string::npos);
    CHECK(t.tsv.starts_with("Reference\tMethod\tInput\tAvg. #words\tRouge-1\tRouge-L\tSemantic Similarity"));
}
