#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "patentsum/corpus.hpp"

namespace patentsum {

/// Planted-relevance fixture: every topic patent carries a few rare bigrams in
/// its summary segment, and exactly `relevant_per_topic` other documents carry
/// the same bigrams in their claims. Everything else is filler drawn from a
/// large pseudo-word vocabulary.
struct SyntheticSpec {
    std::uint64_t seed = 2024;
    std::size_t topics = 20;
    std::size_t relevant_per_topic = 3;
    std::size_t documents = 200;
};

struct SyntheticCollection {
    std::vector<PatentDocument> documents;
    std::vector<Topic> topics;
    std::vector<std::string> qrels_lines;  // "T01 0 SYN-R01-1 1"
    std::vector<std::vector<std::string>> planted_terms;  // per topic
};

SyntheticCollection make_planted_collection(const SyntheticSpec& spec = {});

/// Writes corpus.jsonl, topics.txt and qrels.txt into `dir`.
void write_collection(const std::filesystem::path& dir, const SyntheticCollection& c);

}  // namespace patentsum
