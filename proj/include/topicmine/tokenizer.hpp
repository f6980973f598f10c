#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace topicmine {

using StopwordSet = std::unordered_set<std::string>;

struct TokenizerConfig {
  bool lowercase = true;
  std::size_t min_token_len = 2;
  StopwordSet stopwords;
  bool strip_urls = true;
  bool strip_mentions = true;
  bool keep_hashtag_body = true;

  void validate() const;

  // Defaults plus the bundled English stopword list.
  static TokenizerConfig english();
};

// Bundled English stopword list (includes "the" and "a").
const StopwordSet& english_stopwords();

// Stopword file: one token per line, '#' starts a comment, blank lines skipped.
// Tokens are lowercased on load.
StopwordSet read_stopwords(std::istream& in);
StopwordSet read_stopwords(const std::filesystem::path& path);

// Splits on whitespace into chunks, drops URL chunks (http://, https://,
// www.) and @mention chunks per config, strips a leading '#' (or drops the
// chunk when keep_hashtag_body is off), then splits each chunk on
// non-alphanumeric ASCII. Bytes >= 0x80 count as word characters so UTF-8
// letters stay inside tokens. Lowercasing is ASCII-only. Short tokens and
// stopwords are removed; order is preserved.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config);

}  // namespace topicmine
