#include "topicmine/tokenizer.hpp"

#include <fstream>
#include <sstream>

#include "bundled_data.hpp"
#include "topicmine/error.hpp"

namespace topicmine {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (ascii_lower(s[i]) != prefix[i]) return false;
  return true;
}

bool is_url(std::string_view chunk) {
  return starts_with_ci(chunk, "http://") || starts_with_ci(chunk, "https://") ||
         starts_with_ci(chunk, "www.");
}

// Counts UTF-8 code points, so min_token_len is in characters.
std::size_t char_length(std::string_view token) {
  std::size_t n = 0;
  for (unsigned char c : token)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

void emit_words(std::string_view chunk, const TokenizerConfig& config, std::vector<std::string>& out) {
  std::size_t i = 0;
  while (i < chunk.size()) {
    while (i < chunk.size() && !is_word_byte(static_cast<unsigned char>(chunk[i]))) ++i;
    const std::size_t start = i;
    while (i < chunk.size() && is_word_byte(static_cast<unsigned char>(chunk[i]))) ++i;
    if (i == start) continue;
    std::string token(chunk.substr(start, i - start));
    if (config.lowercase)
      for (char& c : token) c = ascii_lower(c);
    if (char_length(token) < config.min_token_len) continue;
    if (config.stopwords.contains(token)) continue;
    out.push_back(std::move(token));
  }
}

StopwordSet parse_stopwords(std::istream& in) {
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string word = line.substr(first, last - first + 1);
    for (char& c : word) c = ascii_lower(c);
    words.insert(std::move(word));
  }
  return words;
}

}  // namespace

void TokenizerConfig::validate() const {
  if (min_token_len < 1) throw ValidationError("min_token_len must be >= 1");
}

TokenizerConfig TokenizerConfig::english() {
  TokenizerConfig config;
  config.stopwords = english_stopwords();
  return config;
}

const StopwordSet& english_stopwords() {
  static const StopwordSet words = [] {
    std::istringstream in{std::string(bundled::kEnglishStopwords)};
    return parse_stopwords(in);
  }();
  return words;
}

StopwordSet read_stopwords(std::istream& in) { return parse_stopwords(in); }

StopwordSet read_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open stopword file " + path.string());
  return parse_stopwords(in);
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view chunk = text.substr(start, i - start);
    if (chunk.empty()) continue;

    if (config.strip_urls && is_url(chunk)) continue;
    if (chunk.front() == '@' && config.strip_mentions) continue;
    if (chunk.front() == '#') {
      if (!config.keep_hashtag_body) continue;
      chunk.remove_prefix(1);
    }
    emit_words(chunk, config, tokens);
  }
  return tokens;
}

}  // namespace topicmine
