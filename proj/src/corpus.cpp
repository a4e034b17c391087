#include "patentsum/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "patentsum/error.hpp"
#include "patentsum/text.hpp"

namespace patentsum {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Matches `^\s*(\d+)\s*[.)]` and returns the number.
std::optional<int> leading_claim_number(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t digits = i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i == digits || i - digits > 6) return std::nullopt;
    int number = std::stoi(std::string(line.substr(digits, i - digits)));
    while (i < line.size() && is_space(line[i])) ++i;
    if (i < line.size() && (line[i] == '.' || line[i] == ')')) return number;
    return std::nullopt;
}

std::string string_field(const json& record, std::initializer_list<const char*> names) {
    for (const char* name : names) {
        auto it = record.find(name);
        if (it == record.end() || it->is_null()) continue;
        if (!it->is_string()) throw InputError(std::string("field '") + name + "' must be a string");
        return it->get<std::string>();
    }
    return {};
}

std::vector<Claim> claims_from_json(const json& value) {
    if (value.is_null()) return {};
    if (value.is_string()) return split_claims(value.get<std::string>());
    if (!value.is_array()) throw InputError("field 'claims' must be a string or an array of strings");

    std::vector<Claim> claims;
    for (const auto& item : value) {
        if (!item.is_string()) throw InputError("claims array must contain only strings");
        auto text = trim(item.get_ref<const std::string&>());
        if (text.empty()) continue;
        int number = leading_claim_number(text).value_or(static_cast<int>(claims.size()) + 1);
        if (!claims.empty() && number <= claims.back().number) {
            throw InputError("claim numbers not strictly increasing at claim " + std::to_string(number));
        }
        claims.push_back({number, std::string(text)});
    }
    return claims;
}

std::vector<std::string> string_list(const json& value, const char* name) {
    std::vector<std::string> out;
    if (value.is_null()) return out;
    if (value.is_string()) {
        if (!value.get_ref<const std::string&>().empty()) out.push_back(value.get<std::string>());
        return out;
    }
    if (!value.is_array()) throw InputError(std::string("field '") + name + "' must be an array of strings");
    for (const auto& item : value) {
        if (!item.is_string()) throw InputError(std::string("field '") + name + "' must be an array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::vector<fs::path> corpus_files(const fs::path& path) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            auto ext = entry.path().extension();
            if (entry.is_regular_file() && (ext == ".jsonl" || ext == ".json")) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        return files;
    }
    return {path};
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path.string() + "'");
    return in;
}

}  // namespace

std::string PatentDocument::claims_text() const {
    std::string out;
    for (const auto& claim : claims) {
        if (!out.empty()) out.push_back('\n');
        out += claim.text;
    }
    return out;
}

std::string to_string(const IngestError& e) {
    std::ostringstream os;
    os << e.file;
    if (e.line > 0) os << ':' << e.line;
    os << ": " << e.message;
    return os.str();
}

CorpusFormat parse_corpus_format(std::string_view tag) {
    if (tag == "jsonl" || tag == "generic") return CorpusFormat::Jsonl;
    if (tag == "hupd") return CorpusFormat::Hupd;
    throw InputError("unknown corpus format '" + std::string(tag) + "' (expected one of: jsonl, hupd)");
}

std::string_view format_tag(CorpusFormat format) {
    return format == CorpusFormat::Hupd ? "hupd" : "jsonl";
}

Corpus::Corpus(std::vector<PatentDocument> docs, std::vector<IngestError> errors)
    : docs_(std::move(docs)), errors_(std::move(errors)) {
    for (std::size_t i = 0; i < docs_.size(); ++i) by_id_.emplace(docs_[i].doc_id, i);
}

const PatentDocument* Corpus::find(std::string_view doc_id) const {
    auto it = by_id_.find(std::string(doc_id));
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

std::vector<Claim> split_claims(std::string_view text) {
    std::vector<Claim> claims;
    std::string preamble;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        if (auto number = leading_claim_number(line)) {
            claims.push_back({*number, std::string(line)});
        } else if (!claims.empty()) {
            claims.back().text.push_back('\n');
            claims.back().text.append(line);
        } else {
            preamble.append(line).push_back('\n');
        }
        pos = nl + 1;
    }
    for (auto& claim : claims) claim.text = std::string(trim(claim.text));
    std::erase_if(claims, [](const Claim& c) { return c.text.empty(); });

    if (claims.empty()) {
        auto body = trim(preamble);
        if (!body.empty()) claims.push_back({1, std::string(body)});
        return claims;
    }
    for (std::size_t i = 1; i < claims.size(); ++i) {
        if (claims[i].number <= claims[i - 1].number) {
            throw InputError("claim numbers not strictly increasing at claim " +
                             std::to_string(claims[i].number));
        }
    }
    return claims;
}

PatentDocument document_from_json(const json& record, CorpusFormat format) {
    if (!record.is_object()) throw InputError("record is not a JSON object");

    PatentDocument doc;
    json claims = nullptr;
    if (format == CorpusFormat::Hupd) {
        doc.doc_id = string_field(record, {"application_number", "doc_id", "publication_number"});
        doc.description = string_field(record, {"full_description", "description"});
        if (auto it = record.find("claims"); it != record.end()) claims = *it;
        if (auto it = record.find("cpc_labels"); it != record.end()) {
            doc.cpc_codes = string_list(*it, "cpc_labels");
        } else if (auto main = record.find("main_cpc_label"); main != record.end()) {
            doc.cpc_codes = string_list(*main, "main_cpc_label");
        }
    } else {
        doc.doc_id = string_field(record, {"doc_id"});
        doc.description = string_field(record, {"description"});
        if (auto it = record.find("claims"); it != record.end()) claims = *it;
        if (auto it = record.find("cpc_codes"); it != record.end()) doc.cpc_codes = string_list(*it, "cpc_codes");
    }
    doc.title = string_field(record, {"title"});
    doc.abstract_text = string_field(record, {"abstract"});
    doc.claims = claims_from_json(claims);
    if (auto date = string_field(record, {"filing_date"}); !date.empty()) doc.filing_date = date;

    if (doc.doc_id.empty()) throw InputError("missing doc_id");
    if (doc.abstract_text.empty() && doc.claims.empty() && doc.description.empty()) {
        throw InputError("document '" + doc.doc_id + "' has no abstract, claims or description");
    }
    return doc;
}

json document_to_json(const PatentDocument& doc) {
    json claims = json::array();
    for (const auto& c : doc.claims) claims.push_back(c.text);
    json out = {
        {"doc_id", doc.doc_id},
        {"title", doc.title},
        {"abstract", doc.abstract_text},
        {"claims", std::move(claims)},
        {"description", doc.description},
        {"cpc_codes", doc.cpc_codes},
    };
    if (doc.filing_date) out["filing_date"] = *doc.filing_date;
    return out;
}

Corpus ingest_corpus(const fs::path& path, CorpusFormat format) {
    std::error_code ec;
    if (!fs::exists(path, ec)) throw InputError("corpus path '" + path.string() + "' does not exist");

    std::vector<PatentDocument> docs;
    std::vector<IngestError> errors;
    std::unordered_map<std::string, std::string> seen;  // doc_id -> "file:line"

    for (const auto& file : corpus_files(path)) {
        auto in = open_input(file);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            try {
                auto doc = document_from_json(json::parse(line), format);
                auto where = file.string() + ":" + std::to_string(lineno);
                auto [it, inserted] = seen.emplace(doc.doc_id, where);
                if (!inserted) {
                    errors.push_back({file.string(), lineno,
                                      "duplicate doc_id '" + doc.doc_id + "' (first seen at " + it->second + ")"});
                    continue;
                }
                docs.push_back(std::move(doc));
            } catch (const json::exception& e) {
                errors.push_back({file.string(), lineno, std::string("malformed record: ") + e.what()});
            } catch (const InputError& e) {
                errors.push_back({file.string(), lineno, e.what()});
            }
        }
    }
    return Corpus(std::move(docs), std::move(errors));
}

void write_corpus(const fs::path& path, const std::vector<PatentDocument>& docs) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    for (const auto& doc : docs) out << document_to_json(doc).dump() << '\n';
}

TopicSet ingest_topics(const fs::path& path) {
    auto in = open_input(path);
    TopicSet set;
    std::set<std::string> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = std::string_view(line).substr(0, line.find('#'));
        auto fields = split_whitespace(body);
        if (fields.empty()) continue;
        if (fields.size() != 2) {
            set.errors.push_back({path.string(), lineno, "expected 'topic_id doc_id'"});
            continue;
        }
        std::string topic_id(fields[0]);
        if (!ids.insert(topic_id).second) {
            set.errors.push_back({path.string(), lineno, "duplicate topic_id '" + topic_id + "'"});
            continue;
        }
        set.topics.push_back({std::move(topic_id), std::string(fields[1])});
    }
    return set;
}

std::vector<Topic> missing_topic_documents(const TopicSet& topics, const Corpus& corpus) {
    std::vector<Topic> missing;
    for (const auto& t : topics.topics) {
        if (corpus.find(t.doc_id) == nullptr) missing.push_back(t);
    }
    return missing;
}

bool QrelsTable::add(const std::string& topic_id, const std::string& doc_id, int grade) {
    return judgments_[topic_id].emplace(doc_id, grade).second;
}

std::optional<int> QrelsTable::grade(const std::string& topic_id, const std::string& doc_id) const {
    auto t = judgments_.find(topic_id);
    if (t == judgments_.end()) return std::nullopt;
    auto d = t->second.find(doc_id);
    if (d == t->second.end()) return std::nullopt;
    return d->second;
}

std::set<std::string> QrelsTable::relevant(const std::string& topic_id) const {
    std::set<std::string> out;
    auto t = judgments_.find(topic_id);
    if (t == judgments_.end()) return out;
    for (const auto& [doc, g] : t->second) {
        if (g > 0) out.insert(doc);
    }
    return out;
}

std::vector<std::string> QrelsTable::topics() const {
    std::vector<std::string> out;
    for (const auto& [t, _] : judgments_) out.push_back(t);
    return out;
}

std::size_t QrelsTable::size() const {
    std::size_t n = 0;
    for (const auto& [_, docs] : judgments_) n += docs.size();
    return n;
}

QrelsTable ingest_qrels(const fs::path& path) {
    auto in = open_input(path);
    QrelsTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_whitespace(line);
        if (fields.empty()) continue;
        if (fields.size() != 4) {
            table.errors.push_back({path.string(), lineno, "expected 'topic_id 0 doc_id grade'"});
            continue;
        }
        int grade = 0;
        try {
            std::size_t used = 0;
            grade = std::stoi(std::string(fields[3]), &used);
            if (used != fields[3].size() || grade < 0) throw std::invalid_argument("grade");
        } catch (const std::exception&) {
            table.errors.push_back({path.string(), lineno, "grade must be a non-negative integer"});
            continue;
        }
        std::string topic(fields[0]);
        std::string doc(fields[2]);
        if (!table.add(topic, doc, grade)) {
            table.errors.push_back({path.string(), lineno, "duplicate judgment (" + topic + ", " + doc + ")"});
        }
    }
    if (table.size() == 0) throw InputError("no judgments in '" + path.string() + "'");
    for (const auto& topic : table.topics()) {
        if (table.relevant(topic).empty()) {
            table.errors.push_back({path.string(), 0, "topic '" + topic + "' has no judgment with grade > 0"});
        }
    }
    return table;
}

}  // namespace patentsum
