#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topicmine/matrix.hpp"

namespace topicmine::analysis {

enum class Category : std::uint8_t { Book, Event, Training, PublicRelations, SocialGood };

inline constexpr std::size_t kNumCategories = 5;
inline constexpr std::array<Category, kNumCategories> kAllCategories = {
    Category::Book, Category::Event, Category::Training, Category::PublicRelations,
    Category::SocialGood};

std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);

struct TopicWeights {
  std::vector<double> wt;   // sum over documents of theta[d][k]
  std::vector<double> nwt;  // wt / sum(wt)
};

// Compensated column sums of theta, then normalization by their total.
// Throws ValidationError if theta has no columns.
TopicWeights topic_weights(const RealMatrix& theta);

// Topic indices by weight descending, ties by ascending index.
std::vector<std::size_t> rank_topics(std::span<const double> weights);
inline std::vector<std::size_t> rank_topics(const TopicWeights& w) { return rank_topics(w.nwt); }

struct TopicLabel {
  std::string label;
  Category category;

  bool operator==(const TopicLabel&) const = default;
};

// Total map from topic index to {label, category}.
class LabelMap {
 public:
  LabelMap() = default;
  // Throws ValidationError unless `labels` is nonempty.
  explicit LabelMap(std::vector<TopicLabel> labels);

  std::size_t size() const { return labels_.size(); }
  const TopicLabel& at(std::size_t topic) const { return labels_.at(topic); }
  const std::vector<TopicLabel>& labels() const { return labels_; }

  // category index per topic, for the kernels
  std::vector<std::uint32_t> category_indices() const;
  std::map<Category, std::size_t> category_sizes() const;

  bool operator==(const LabelMap&) const = default;

 private:
  std::vector<TopicLabel> labels_;
};

// Label map file grammar (CSV, UTF-8):
//   - blank lines and lines starting with '#' are ignored
//   - first significant line is the header `topic,category,label`
//   - each row: <topic index, 0-based>,<category name>,<label text>
//     the label is the rest of the line after the second comma
//   - category names: Book, Event, Training, PublicRelations, SocialGood
// Every topic 0..K-1 must appear exactly once; indices >= K are rejected.
LabelMap load_label_map(std::istream& in, std::size_t topics, const std::string& source_name = "<stream>");
LabelMap load_label_map(const std::filesystem::path& path, std::size_t topics);
void write_label_map(std::ostream& out, const LabelMap& map);

// The 20-topic labeling with its five-category assignment from the reference
// library study; topic i is row i+1 of that study's topic table.
const LabelMap& paper_label_map();

struct GroupCategoryWeights {
  // Per group: raw category masses (sum over group docs and member topics of
  // theta) and the same vector normalized to sum to 1. Groups with no
  // documents are absent.
  std::map<std::string, std::array<double, kNumCategories>> mass;
  std::map<std::string, std::array<double, kNumCategories>> weight;
  std::vector<std::string> empty_groups;
};

GroupCategoryWeights group_category_weights(const RealMatrix& theta,
                                            const std::map<std::string, std::vector<std::size_t>>& groups,
                                            const LabelMap& map);

// Category weights over the union of all groups' documents, from their
// masses. Throws ValidationError when there are no non-empty groups.
std::array<double, kNumCategories> aggregate_all_groups(const GroupCategoryWeights& per_group);

inline constexpr std::string_view kAllGroupsLabel = "ALL";

// topic_weights.csv: topic,label,category,wt,nwt,rank (rows in topic order,
// rank is 1-based).
void write_topic_weights_csv(std::ostream& out, const TopicWeights& weights, const LabelMap& map);
// category_weights_by_group.csv: group,category,weight, groups sorted, then ALL.
void write_category_weights_csv(std::ostream& out, const GroupCategoryWeights& per_group);

}  // namespace topicmine::analysis
