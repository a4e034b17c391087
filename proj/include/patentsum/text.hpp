#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace patentsum {

// Words and tokens are the same thing throughout the toolkit: maximal runs of
// non-whitespace characters.

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::size_t word_count(std::string_view text);

/// Prefix of `text` holding at most `cap` whitespace tokens. Whitespace inside
/// the prefix is preserved; text already under the cap is returned unchanged.
std::string cap_tokens(std::string_view text, std::size_t cap);

std::vector<std::string_view> split_whitespace(std::string_view text);

std::string_view trim(std::string_view text);
std::string to_upper(std::string_view text);
std::string to_lower(std::string_view text);

/// Lowercased maximal ASCII-alphanumeric runs. Used by ROUGE and the hashed embedder.
std::vector<std::string> alnum_tokens(std::string_view text);

}  // namespace patentsum
