#include "patentsum/extractive.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "patentsum/error.hpp"
#include "patentsum/text.hpp"

namespace patentsum {

namespace {

bool iequals_suffix(std::string_view text, std::string_view suffix) {
    if (suffix.size() > text.size()) return false;
    auto tail = text.substr(text.size() - suffix.size());
    for (std::size_t i = 0; i < suffix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(tail[i])) != std::tolower(static_cast<unsigned char>(suffix[i]))) {
            return false;
        }
    }
    return true;
}

// `before` is the text up to (not including) a period.
bool ends_with_abbreviation(std::string_view before) {
    for (const auto& abbr : sentence_abbreviations()) {
        if (!iequals_suffix(before, abbr)) continue;
        if (before.size() == abbr.size()) return true;
        auto prev = static_cast<unsigned char>(before[before.size() - abbr.size() - 1]);
        if (!std::isalnum(prev) && prev != '.') return true;
    }
    return false;
}

// Portable uniform draw in [0, 1).
double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double cosine_to(const EmbeddingVector& v, const std::vector<double>& centroid) {
    if (v.is_zero()) return 0.0;
    double dot = 0.0;
    double cn = 0.0;
    double vn = 0.0;
    for (std::size_t i = 0; i < centroid.size(); ++i) {
        dot += v.values[i] * centroid[i];
        cn += centroid[i] * centroid[i];
        vn += static_cast<double>(v.values[i]) * v.values[i];
    }
    if (cn == 0.0 || vn == 0.0) return 0.0;
    return dot / (std::sqrt(cn) * std::sqrt(vn));
}

}  // namespace

const std::vector<std::string>& sentence_abbreviations() {
    static const std::vector<std::string> abbrs = {"FIG", "FIGS", "e.g", "i.e", "No",
                                                   "U.S", "Pat", "et al", "approx", "vs"};
    return abbrs;
}

std::vector<SentenceSpan> sentence_spans(std::string_view text) {
    std::vector<SentenceSpan> spans;
    auto emit = [&](std::size_t b, std::size_t e) {
        auto t = trim(text.substr(b, e - b));
        if (t.empty()) return;
        auto begin = static_cast<std::size_t>(t.data() - text.data());
        spans.push_back({begin, begin + t.size()});
    };

    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        if (i + 1 >= text.size() || !is_space(text[i + 1])) continue;
        std::size_t j = i + 1;
        while (j < text.size() && is_space(text[j])) ++j;
        if (j == text.size()) continue;
        auto next = static_cast<unsigned char>(text[j]);
        if (!std::isupper(next) && !std::isdigit(next)) continue;
        if (c == '.' && ends_with_abbreviation(text.substr(start, i - start))) continue;
        emit(start, i + 1);
        start = j;
        i = j - 1;
    }
    emit(start, text.size());
    return spans;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    for (auto s : sentence_spans(text)) out.emplace_back(text.substr(s.begin, s.end - s.begin));
    return out;
}

void ExtractiveConfig::validate() const {
    if (target_words < 1) throw InputError("target_words must be >= 1");
    if (max_iters < 1) throw InputError("max_iters must be >= 1");
    if (tol < 0.0) throw InputError("tol must be >= 0");
    if (k_override && *k_override < 1) throw InputError("k must be >= 1");
    if (embed_cap < 1) throw InputError("embedding cap must be >= 1");
}

std::size_t choose_k(std::span<const std::string> sentences, const ExtractiveConfig& config) {
    if (sentences.empty()) throw std::invalid_argument("choose_k: no sentences");
    if (config.k_override) return *config.k_override;
    std::size_t words = 0;
    for (const auto& s : sentences) words += word_count(s);
    double mean = static_cast<double>(words) / static_cast<double>(sentences.size());
    if (mean <= 0.0) return 1;
    auto k = std::lround(static_cast<double>(config.target_words) / mean);
    return static_cast<std::size_t>(std::clamp<long>(k, 1, static_cast<long>(sentences.size())));
}

KMeansResult kmeans(std::span<const EmbeddingVector> points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iters, double tol) {
    const std::size_t n = points.size();
    if (k == 0) throw std::invalid_argument("kmeans: k must be >= 1");
    if (k > n) {
        throw std::invalid_argument("kmeans: k (" + std::to_string(k) + ") exceeds number of points (" +
                                    std::to_string(n) + ")");
    }
    const std::size_t dim = points.front().dim();
    std::vector<std::vector<double>> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (points[i].dim() != dim) throw std::invalid_argument("kmeans: mixed embedding dimensions");
        x[i].assign(points[i].values.begin(), points[i].values.end());
    }

    // k-means++ seeding
    std::mt19937_64 rng(seed);
    KMeansResult r;
    std::vector<bool> chosen(n, false);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::size_t first = static_cast<std::size_t>(rng() % n);
    r.centroids.push_back(x[first]);
    chosen[first] = true;
    while (r.centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(x[i], r.centroids.back()));
            if (!chosen[i]) total += d2[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            double target = unit_draw(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i] || d2[i] == 0.0) continue;
                acc += d2[i];
                pick = i;
                if (acc > target) break;
            }
        }
        if (pick == n) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) {
                    pick = i;
                    break;
                }
            }
        }
        chosen[pick] = true;
        r.centroids.push_back(x[pick]);
    }

    r.assignment.assign(n, 0);
    std::vector<std::size_t> sizes(k);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        r.iterations = iter + 1;
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = squared_distance(x[i], r.centroids[0]);
            for (std::size_t c = 1; c < k; ++c) {
                double d = squared_distance(x[i], r.centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            r.assignment[i] = best;
            ++sizes[best];
        }

        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[r.assignment[i]] < 2) continue;
                double d = squared_distance(x[i], r.centroids[r.assignment[i]]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            --sizes[r.assignment[far]];
            r.assignment[far] = c;
            sizes[c] = 1;
            r.centroids[c] = x[far];
        }

        std::vector<std::vector<double>> next(k, std::vector<double>(dim, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            auto& acc = next[r.assignment[i]];
            for (std::size_t d = 0; d < dim; ++d) acc[d] += x[i][d];
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            for (auto& v : next[c]) v /= static_cast<double>(sizes[c]);
            shift = std::max(shift, std::sqrt(squared_distance(next[c], r.centroids[c])));
        }
        r.centroids = std::move(next);
        if (shift < tol) break;
    }
    return r;
}

std::vector<std::size_t> select_representatives(std::span<const EmbeddingVector> sentences,
                                                const std::vector<std::vector<double>>& centroids,
                                                const std::vector<std::size_t>& assignment) {
    if (assignment.size() != sentences.size()) {
        throw std::invalid_argument("select_representatives: assignment does not cover all sentences");
    }
    const std::size_t none = sentences.size();
    std::vector<std::size_t> best(centroids.size(), none);
    std::vector<double> best_sim(centroids.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        auto c = assignment[i];
        double sim = cosine_to(sentences[i], centroids.at(c));
        if (sim > best_sim[c]) {
            best_sim[c] = sim;
            best[c] = i;
        }
    }
    std::vector<std::size_t> out;
    for (auto b : best) {
        if (b != none) out.push_back(b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ExtractiveResult extractive_summarize(std::string_view text, EmbeddingBackend& backend,
                                      const ExtractiveConfig& config) {
    config.validate();
    ExtractiveResult r;
    r.sentences = split_sentences(text);
    if (r.sentences.empty()) throw InputError("extractive summary: input text is empty");

    r.k = std::min(choose_k(r.sentences, config), r.sentences.size());
    std::vector<EmbeddingVector> embeddings;
    try {
        embeddings = embed_capped(backend, r.sentences, config.embed_cap);
    } catch (const BackendError& e) {
        throw BackendError(std::string("extractive summary: embedding sentences with ") + backend.id() + ": " + e.what());
    }
    if (embeddings.size() != r.sentences.size()) {
        throw BackendError("extractive summary: backend " + backend.id() + " returned wrong number of vectors");
    }

    auto clusters = kmeans(embeddings, r.k, config.seed, config.max_iters, config.tol);
    r.selected = select_representatives(embeddings, clusters.centroids, clusters.assignment);

    std::string out;
    for (auto idx : r.selected) {
        if (!out.empty()) out.push_back(' ');
        out += r.sentences[idx];
    }
    r.summary.method = config.method;
    r.summary.backend = backend.id();
    r.summary.text = std::move(out);
    r.summary.words = word_count(r.summary.text);
    return r;
}

SummaryArtifact extractive_summary(std::string_view text, EmbeddingBackend& backend, const ExtractiveConfig& config) {
    return extractive_summarize(text, backend, config).summary;
}

}  // namespace patentsum
