#include "patentsum/synthetic.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include "patentsum/error.hpp"

namespace patentsum {

namespace {

constexpr const char* kSyllables[] = {"ka", "lo", "mi", "ne", "ru", "ta", "vo", "se",
                                      "di", "pa", "gu", "fe", "ho", "ji", "be", "wu"};
constexpr std::size_t kSyllableCount = std::size(kSyllables);

class Writer {
public:
    explicit Writer(std::uint64_t seed) : rng_(seed) {}

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    std::string word() {
        std::string w;
        for (int i = 0; i < 3; ++i) w += kSyllables[pick(kSyllableCount)];
        return w;
    }

    std::string words(std::size_t n) {
        std::string out;
        for (std::size_t i = 0; i < n; ++i) {
            if (i) out.push_back(' ');
            out += word();
        }
        return out;
    }

    std::string sentence(std::size_t n) {
        auto s = words(n);
        s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
        return s + ".";
    }

    std::string paragraph(std::size_t sentences) {
        std::string out;
        for (std::size_t i = 0; i < sentences; ++i) {
            if (i) out.push_back(' ');
            out += sentence(6 + pick(5));
        }
        return out;
    }

    // A sentence carrying every planted bigram, separated by filler.
    std::string planted_sentence(const std::vector<std::string>& terms) {
        std::string s = sentence(2);
        s.pop_back();
        for (std::size_t i = 0; i + 1 < terms.size(); i += 2) {
            s += " " + terms[i] + " " + terms[i + 1] + " " + word();
        }
        return s + ".";
    }

    std::string description(bool with_summary, const std::string& summary_body) {
        std::string d;
        d += "TECHNICAL FIELD\n" + paragraph(1) + "\n";
        d += "BACKGROUND\n" + paragraph(2) + "\n";
        if (with_summary) d += "SUMMARY OF THE INVENTION\n" + summary_body + "\n";
        d += "BRIEF DESCRIPTION OF THE DRAWINGS\n" + paragraph(1) + "\n";
        d += "DETAILED DESCRIPTION\n" + paragraph(4);
        return d;
    }

    std::vector<Claim> claims(const std::vector<std::string>& planted) {
        std::vector<Claim> out;
        std::string first = "1. A " + words(2) + " comprising " + words(6);
        if (!planted.empty()) first += " " + planted_sentence(planted);
        else first += ".";
        out.push_back({1, first});
        out.push_back({2, "2. The " + words(2) + " of claim 1, wherein " + words(8) + "."});
        std::string third = "3. The " + words(2) + " of claim 1, further comprising " + words(7);
        if (!planted.empty()) third += " " + planted_sentence(planted);
        else third += ".";
        out.push_back({3, third});
        out.push_back({4, "4. A method comprising " + words(10) + "."});
        return out;
    }

private:
    std::mt19937_64 rng_;
};

std::string two_digits(std::size_t n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02zu", n);
    return buf;
}

}  // namespace

SyntheticCollection make_planted_collection(const SyntheticSpec& spec) {
    const auto planted_docs = spec.topics * (1 + spec.relevant_per_topic);
    if (planted_docs > spec.documents) throw std::invalid_argument("synthetic spec: too few documents");

    Writer w(spec.seed);
    SyntheticCollection c;

    for (std::size_t t = 1; t <= spec.topics; ++t) {
        std::vector<std::string> terms;
        for (char suffix : std::string("abcdef")) terms.push_back("qx" + two_digits(t) + suffix);
        c.planted_terms.push_back(terms);

        auto topic_id = "T" + two_digits(t);
        auto topic_doc = "SYN-T" + two_digits(t);
        c.topics.push_back({topic_id, topic_doc});

        PatentDocument doc;
        doc.doc_id = topic_doc;
        doc.title = "Synthetic topic apparatus " + two_digits(t);
        doc.abstract_text = w.paragraph(2) + " " + w.planted_sentence({terms[0], terms[1]});
        auto summary = w.paragraph(2) + " " + w.planted_sentence(terms) + " " + w.paragraph(1) + " " +
                       w.planted_sentence(terms);
        doc.description = w.description(true, summary);
        doc.claims = w.claims({});
        doc.cpc_codes = {"G06F16/33"};
        doc.filing_date = "2020-01-" + two_digits(t);
        c.documents.push_back(std::move(doc));
    }

    for (std::size_t t = 1; t <= spec.topics; ++t) {
        for (std::size_t r = 1; r <= spec.relevant_per_topic; ++r) {
            PatentDocument doc;
            doc.doc_id = "SYN-R" + two_digits(t) + "-" + std::to_string(r);
            doc.title = "Synthetic prior art " + two_digits(t) + "-" + std::to_string(r);
            doc.abstract_text = w.paragraph(3);
            doc.description = w.description(r % 2 == 1, w.paragraph(3));
            doc.claims = w.claims(c.planted_terms[t - 1]);
            doc.filing_date = "2015-06-" + two_digits(r);
            c.qrels_lines.push_back("T" + two_digits(t) + " 0 " + doc.doc_id + " 1");
            c.documents.push_back(std::move(doc));
        }
    }

    for (std::size_t d = 1; c.documents.size() < spec.documents; ++d) {
        PatentDocument doc;
        char id[32];
        std::snprintf(id, sizeof id, "SYN-D%03zu", d);
        doc.doc_id = id;
        doc.title = "Synthetic distractor " + std::to_string(d);
        doc.abstract_text = w.paragraph(3);
        doc.description = w.description(d % 3 != 0, w.paragraph(3));
        doc.claims = w.claims({});
        c.documents.push_back(std::move(doc));
    }
    return c;
}

void write_collection(const std::filesystem::path& dir, const SyntheticCollection& c) {
    std::filesystem::create_directories(dir);
    write_corpus(dir / "corpus.jsonl", c.documents);

    std::ofstream topics(dir / "topics.txt");
    std::ofstream qrels(dir / "qrels.txt");
    if (!topics || !qrels) throw InputError("cannot write synthetic collection into '" + dir.string() + "'");
    topics << "# topic_id doc_id\n";
    for (const auto& t : c.topics) topics << t.topic_id << ' ' << t.doc_id << '\n';
    for (const auto& line : c.qrels_lines) qrels << line << '\n';
}

}  // namespace patentsum
