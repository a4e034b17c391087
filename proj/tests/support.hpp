#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unistd.h>
#include <vector>

#include "patentsum/embed.hpp"
#include "patentsum/text.hpp"

namespace testing {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("patentsum-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::string repeat_words(const std::string& stem, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out.push_back(' ');
        out += stem + std::to_string(i);
    }
    return out;
}

/// Wraps a backend and records the word count of every text it is handed.
class RecordingBackend : public patentsum::EmbeddingBackend {
public:
    explicit RecordingBackend(std::size_t dim = 64) : inner_(dim) {}

    std::string id() const override { return inner_.id(); }
    std::vector<patentsum::EmbeddingVector> embed(std::span<const std::string> texts) override {
        for (const auto& t : texts) words.push_back(patentsum::word_count(t));
        return inner_.embed(texts);
    }

    std::size_t max_words() const {
        std::size_t m = 0;
        for (auto w : words) m = std::max(m, w);
        return m;
    }

    std::vector<std::size_t> words;

private:
    patentsum::HashedBackend inner_;
};

}  // namespace testing
