#include "patentsum/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "patentsum/error.hpp"
#include "patentsum/summary.hpp"
#include "patentsum/text.hpp"

namespace patentsum {

namespace {

RougeScore make_score(double overlap, double cand_total, double ref_total) {
    RougeScore s;
    if (cand_total == 0.0 || ref_total == 0.0) return s;
    s.precision = overlap / cand_total;
    s.recall = overlap / ref_total;
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

std::map<std::vector<std::string>, std::size_t> ngram_counts(const std::vector<std::string>& tokens, std::size_t n) {
    std::map<std::vector<std::string>, std::size_t> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                          tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
    }
    return counts;
}

std::size_t hits_in_top(std::span<const std::string> ranked, const std::set<std::string>& relevant, std::size_t k) {
    std::size_t hits = 0;
    auto limit = std::min(k, ranked.size());
    for (std::size_t i = 0; i < limit; ++i) hits += relevant.count(ranked[i]);
    return hits;
}

void require_relevant(const std::set<std::string>& relevant) {
    if (relevant.empty()) throw std::invalid_argument("relevant set is empty; exclude the topic upstream");
}

std::string section_label(std::string_view tag) {
    if (tag == "abstract") return "Abstract";
    if (tag == "claims") return "Claims";
    if (tag == "description") return "Description";
    if (tag == "brief_description") return "Brief desc";
    if (tag == "summary_segment") return "Summary";
    if (tag == "summary_plus_first_claim" || tag == source::kSummaryPlusFirstClaim) return "Summary and first claim";
    if (tag == "brief_plus_first_claim" || tag == source::kBriefPlusFirstClaim) return "Brief desc and first claim";
    return std::string(tag);
}

std::string format_words(double words) {
    auto n = static_cast<long long>(std::llround(words));
    auto digits = std::to_string(n);
    if (digits.size() <= 3) return digits;
    std::string out;
    int count = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (count > 0 && count % 3 == 0) out.push_back(',');
        out.push_back(*it);
        ++count;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string align(const std::vector<std::vector<std::string>>& cells) {
    std::vector<std::size_t> width;
    for (const auto& row : cells) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream os;
    for (std::size_t r = 0; r < cells.size(); ++r) {
        std::string line;
        for (std::size_t c = 0; c < cells[r].size(); ++c) {
            if (c > 0) line += "  ";
            line += cells[r][c];
            line.append(width[c] - cells[r][c].size(), ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
        if (r == 0) {
            std::size_t total = 0;
            for (auto w : width) total += w + 2;
            os << std::string(total > 2 ? total - 2 : total, '-') << '\n';
        }
    }
    return os.str();
}

// marks[row][col] is true when the row holds its group's best value in that
// column. Groups with a single row are left unmarked.
std::vector<std::vector<bool>> best_marks(const std::vector<std::string>& group_keys,
                                          const std::vector<std::vector<double>>& values) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < values.size(); ++r) groups[group_keys[r]].push_back(r);

    std::vector<std::vector<bool>> marks(values.size());
    for (std::size_t r = 0; r < values.size(); ++r) marks[r].assign(values[r].size(), false);
    for (const auto& [_, members] : groups) {
        if (members.size() < 2) continue;
        for (std::size_t c = 0; c < values[members.front()].size(); ++c) {
            double best = values[members.front()][c];
            for (auto r : members) best = std::max(best, values[r][c]);
            for (auto r : members) marks[r][c] = values[r][c] == best;
        }
    }
    return marks;
}

}  // namespace

std::vector<std::string> rouge_tokens(std::string_view text) {
    return alnum_tokens(text);
}

RougeScore rouge_n(std::string_view candidate, std::string_view reference, std::size_t n) {
    if (n == 0) throw std::invalid_argument("rouge_n: n must be >= 1");
    auto cand = ngram_counts(rouge_tokens(candidate), n);
    auto ref = ngram_counts(rouge_tokens(reference), n);
    double cand_total = 0.0;
    double ref_total = 0.0;
    double overlap = 0.0;
    for (const auto& [gram, c] : cand) {
        cand_total += static_cast<double>(c);
        if (auto it = ref.find(gram); it != ref.end()) overlap += static_cast<double>(std::min(c, it->second));
    }
    for (const auto& [_, c] : ref) ref_total += static_cast<double>(c);
    return make_score(overlap, cand_total, ref_total);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

RougeScore rouge_l(std::string_view candidate, std::string_view reference) {
    auto cand = rouge_tokens(candidate);
    auto ref = rouge_tokens(reference);
    auto lcs = static_cast<double>(lcs_length(cand, ref));
    return make_score(lcs, static_cast<double>(cand.size()), static_cast<double>(ref.size()));
}

SimilarityScore semantic_similarity(std::string_view candidate, std::string_view reference, EmbeddingBackend& backend,
                                    std::size_t cap) {
    std::vector<std::string> texts{std::string(candidate), std::string(reference)};
    auto v = embed_capped(backend, texts, cap);
    if (v.size() != 2) throw BackendError("backend " + backend.id() + " returned wrong number of vectors");
    return {cosine(v[0], v[1]), v[0].backend_id.empty() ? backend.id() : v[0].backend_id};
}

double precision_at_k(std::span<const std::string> ranked, const std::set<std::string>& relevant, std::size_t k) {
    if (k == 0) throw std::invalid_argument("precision_at_k: k must be >= 1");
    require_relevant(relevant);
    return static_cast<double>(hits_in_top(ranked, relevant, k)) / static_cast<double>(k);
}

double recall_at_k(std::span<const std::string> ranked, const std::set<std::string>& relevant, std::size_t k) {
    if (k == 0) throw std::invalid_argument("recall_at_k: k must be >= 1");
    require_relevant(relevant);
    return static_cast<double>(hits_in_top(ranked, relevant, k)) / static_cast<double>(relevant.size());
}

double average_precision(std::span<const std::string> ranked, const std::set<std::string>& relevant,
                         std::size_t cutoff) {
    require_relevant(relevant);
    double sum = 0.0;
    std::size_t hits = 0;
    auto limit = std::min(cutoff, ranked.size());
    for (std::size_t i = 0; i < limit; ++i) {
        if (relevant.count(ranked[i])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

std::vector<std::string> MetricSet::names() const {
    std::vector<std::string> out{"MAP@" + std::to_string(map_cutoff)};
    for (auto k : precision_cutoffs) out.push_back("P@" + std::to_string(k));
    for (auto k : recall_cutoffs) out.push_back("R@" + std::to_string(k));
    return out;
}

nlohmann::json MetricReport::to_json() const {
    nlohmann::json topics = nlohmann::json::array();
    for (const auto& t : per_topic) topics.push_back({{"topic_id", t.topic_id}, {"values", t.values}});
    nlohmann::json j = {{"strategy", strategy},
                        {"metrics", metric_names},
                        {"per_topic", topics},
                        {"mean", mean},
                        {"evaluated", evaluated},
                        {"skipped_topics", skipped_topics},
                        {"warnings", warnings},
                        {"avg_query_words", nullptr}};
    if (avg_query_words) j["avg_query_words"] = *avg_query_words;
    return j;
}

MetricReport MetricReport::from_json(const nlohmann::json& j) {
    MetricReport r;
    r.strategy = j.at("strategy").get<std::string>();
    r.metric_names = j.at("metrics").get<std::vector<std::string>>();
    for (const auto& t : j.at("per_topic")) {
        r.per_topic.push_back({t.at("topic_id").get<std::string>(), t.at("values").get<std::map<std::string, double>>()});
    }
    r.mean = j.at("mean").get<std::map<std::string, double>>();
    r.evaluated = j.at("evaluated").get<std::size_t>();
    r.skipped_topics = j.value("skipped_topics", std::vector<std::string>{});
    r.warnings = j.value("warnings", std::vector<std::string>{});
    if (j.contains("avg_query_words") && !j["avg_query_words"].is_null()) {
        r.avg_query_words = j["avg_query_words"].get<double>();
    }
    return r;
}

MetricReport evaluate_run(const RunTable& run, const QrelsTable& qrels, const MetricSet& metrics,
                          const std::set<std::string>& skipped, std::string strategy) {
    MetricReport report;
    report.strategy = std::move(strategy);
    report.metric_names = metrics.names();

    auto rankings = run.rankings();
    std::vector<std::string> unknown;
    for (const auto& [topic, _] : rankings) {
        if (!skipped.count(topic) && !qrels.has_topic(topic)) unknown.push_back(topic);
    }
    if (!unknown.empty()) {
        std::string list;
        for (const auto& t : unknown) list += (list.empty() ? "" : ", ") + t;
        throw InputError("run topics missing from qrels: " + list);
    }

    std::set<std::string> skipped_out(skipped.begin(), skipped.end());
    for (const auto& [topic, ranked] : rankings) {
        if (skipped.count(topic)) continue;
        auto relevant = qrels.relevant(topic);
        if (relevant.empty()) {
            report.warnings.push_back("topic " + topic + " has no positive judgments; excluded");
            skipped_out.insert(topic);
            continue;
        }
        TopicMetrics tm{topic, {}};
        tm.values[report.metric_names[0]] = average_precision(ranked, relevant, metrics.map_cutoff);
        for (auto k : metrics.precision_cutoffs) tm.values["P@" + std::to_string(k)] = precision_at_k(ranked, relevant, k);
        for (auto k : metrics.recall_cutoffs) tm.values["R@" + std::to_string(k)] = recall_at_k(ranked, relevant, k);
        report.per_topic.push_back(std::move(tm));
    }
    report.evaluated = report.per_topic.size();
    report.skipped_topics.assign(skipped_out.begin(), skipped_out.end());

    for (const auto& name : report.metric_names) {
        double sum = 0.0;
        for (const auto& t : report.per_topic) sum += t.values.at(name);
        report.mean[name] = report.evaluated ? sum / static_cast<double>(report.evaluated) : 0.0;
    }
    if (report.evaluated == 0) report.warnings.push_back("no topics evaluated");
    return report;
}

std::string format_percent(double fraction) {
    return fixed(fraction * 100.0, 2) + "%";
}

std::pair<std::string, std::string> strategy_labels(std::string_view strategy) {
    constexpr std::string_view prefix = "generated:";
    if (!strategy.starts_with(prefix)) return {section_label(strategy), ""};
    auto s = QueryStrategy::parse(strategy);
    std::string method;
    if (s.method.starts_with(method::kExtractiveBertClass)) {
        method = "Extractive (BERT-class)";
    } else if (s.method.starts_with(method::kExtractiveSentence)) {
        method = "Extractive (sentence)";
    } else {
        method = "Abstractive";
        if (s.profile) method += " (" + *s.profile + ")";
    }
    return {section_label(s.source), method};
}

RenderedTable render_extrinsic(std::span<const ExtrinsicRow> rows, const MetricSet& metrics) {
    auto names = metrics.names();
    std::vector<std::string> groups;
    std::vector<std::vector<double>> values;
    for (const auto& row : rows) {
        // Plain section queries compete with each other; generated summaries per source.
        groups.push_back(row.method.empty() ? std::string() : "source:" + row.source);
        std::vector<double> v;
        for (const auto& n : names) {
            auto it = row.report.mean.find(n);
            v.push_back(it == row.report.mean.end() ? 0.0 : it->second);
        }
        values.push_back(std::move(v));
    }
    auto marks = best_marks(groups, values);

    RenderedTable out;
    std::vector<std::string> header{"Source", "Method", "Avg. #words"};
    header.insert(header.end(), names.begin(), names.end());

    std::ostringstream tsv;
    for (std::size_t c = 0; c < header.size(); ++c) tsv << (c ? "\t" : "") << header[c];
    tsv << "\tEvaluated\tSkipped\tBest\n";

    std::vector<std::vector<std::string>> cells{header};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        double words = row.report.avg_query_words.value_or(0.0);
        std::vector<std::string> line{row.source, row.method, row.report.avg_query_words ? format_words(words) : "-"};
        std::string best;
        tsv << row.source << '\t' << row.method << '\t' << fixed(words, 2);
        for (std::size_t c = 0; c < names.size(); ++c) {
            line.push_back(format_percent(values[r][c]) + (marks[r][c] ? "*" : ""));
            tsv << '\t' << fixed(values[r][c], 6);
            if (marks[r][c]) best += (best.empty() ? "" : ",") + names[c];
        }
        tsv << '\t' << row.report.evaluated << '\t' << row.report.skipped_topics.size() << '\t' << best << '\n';
        cells.push_back(std::move(line));
    }
    out.tsv = tsv.str();
    out.text = align(cells);
    return out;
}

RenderedTable render_intrinsic(std::span<const IntrinsicRow> rows) {
    std::vector<std::string> groups;
    std::vector<std::vector<double>> values;
    for (const auto& row : rows) {
        groups.push_back(row.reference);
        values.push_back({row.rouge1, row.rouge_l, row.semantic_similarity});
    }
    auto marks = best_marks(groups, values);

    const std::vector<std::string> header{"Reference", "Method", "Input", "Avg. #words",
                                          "Rouge-1",   "Rouge-L", "Semantic Similarity"};
    std::ostringstream tsv;
    for (std::size_t c = 0; c < header.size(); ++c) tsv << (c ? "\t" : "") << header[c];
    tsv << "\tBest\n";

    static const char* metric_names[] = {"Rouge-1", "Rouge-L", "Semantic Similarity"};
    std::vector<std::vector<std::string>> cells{header};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::vector<std::string> line{row.reference, row.method, row.input, format_words(row.avg_words)};
        std::string best;
        tsv << row.reference << '\t' << row.method << '\t' << row.input << '\t' << fixed(row.avg_words, 2);
        for (std::size_t c = 0; c < 3; ++c) {
            line.push_back(fixed(values[r][c], 2) + (marks[r][c] ? "*" : ""));
            tsv << '\t' << fixed(values[r][c], 6);
            if (marks[r][c]) best += (best.empty() ? "" : ",") + std::string(metric_names[c]);
        }
        tsv << '\t' << best << '\n';
        cells.push_back(std::move(line));
    }
    return {tsv.str(), align(cells)};
}

}  // namespace patentsum
