#pragma once

#include <string_view>

namespace topicmine::bundled {

// Contents of data/stopwords_en.txt and data/paper_labelmap.csv, embedded at
// configure time.
extern const std::string_view kEnglishStopwords;
extern const std::string_view kPaperLabelMap;

}  // namespace topicmine::bundled
