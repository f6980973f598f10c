#include "topicmine/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "bundled_data.hpp"
#include "topicmine/error.hpp"
#include "topicmine/format.hpp"
#include "topicmine/kernels.hpp"

namespace topicmine::analysis {

namespace {
constexpr std::array<std::string_view, kNumCategories> kCategoryNames = {"Book", "Event", "Training",
                                                                         "PublicRelations", "SocialGood"};
}

std::string_view category_name(Category c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<Category> parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kNumCategories; ++i)
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  return std::nullopt;
}

TopicWeights topic_weights(const RealMatrix& theta) {
  if (theta.cols() == 0) throw ValidationError("theta has no topic columns");
  TopicWeights w;
  w.wt = kernels::parallel::column_sums(theta);
  kernels::CompensatedSum total;
  for (double v : w.wt) total.add(v);
  const double sum = total.value();
  w.nwt.resize(w.wt.size());
  for (std::size_t k = 0; k < w.wt.size(); ++k) w.nwt[k] = sum > 0.0 ? w.wt[k] / sum : 0.0;
  return w;
}

std::vector<std::size_t> rank_topics(std::span<const double> weights) {
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
  return order;
}

// ---------------------------------------------------------------- label map

LabelMap::LabelMap(std::vector<TopicLabel> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("label map must cover at least one topic");
}

std::vector<std::uint32_t> LabelMap::category_indices() const {
  std::vector<std::uint32_t> out;
  out.reserve(labels_.size());
  for (const auto& l : labels_) out.push_back(static_cast<std::uint32_t>(l.category));
  return out;
}

std::map<Category, std::size_t> LabelMap::category_sizes() const {
  std::map<Category, std::size_t> sizes;
  for (const auto& l : labels_) ++sizes[l.category];
  return sizes;
}

LabelMap load_label_map(std::istream& in, std::size_t topics, const std::string& source_name) {
  if (topics == 0) throw ValidationError("label map needs K >= 1");
  std::vector<std::optional<TopicLabel>> slots(topics);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!header_seen) {
      if (line != "topic,category,label") throw ParseError(source_name, line_no, "expected header 'topic,category,label'");
      header_seen = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw ParseError(source_name, line_no, "expected 'topic,category,label'");
    const std::string index_text = line.substr(0, c1);
    const std::string category_text = line.substr(c1 + 1, c2 - c1 - 1);
    std::string label = line.substr(c2 + 1);

    std::size_t topic = 0;
    auto [p, ec] = std::from_chars(index_text.data(), index_text.data() + index_text.size(), topic);
    if (ec != std::errc{} || p != index_text.data() + index_text.size() || index_text.empty())
      throw ParseError(source_name, line_no, "bad topic index '" + index_text + "'");
    if (topic >= topics)
      throw ParseError(source_name, line_no,
                       "topic " + index_text + " out of range for K=" + std::to_string(topics));
    const auto category = parse_category(category_text);
    if (!category) throw ParseError(source_name, line_no, "unknown category '" + category_text + "'");
    if (label.empty()) throw ParseError(source_name, line_no, "empty label");
    if (slots[topic]) throw ParseError(source_name, line_no, "duplicate entry for topic " + index_text);
    slots[topic] = TopicLabel{std::move(label), *category};
  }
  if (!header_seen) throw ParseError(source_name, line_no + 1, "missing header 'topic,category,label'");

  std::vector<TopicLabel> labels;
  labels.reserve(topics);
  for (std::size_t k = 0; k < topics; ++k) {
    if (!slots[k]) throw ValidationError(source_name + ": missing label for topic " + std::to_string(k));
    labels.push_back(std::move(*slots[k]));
  }
  return LabelMap(std::move(labels));
}

LabelMap load_label_map(const std::filesystem::path& path, std::size_t topics) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open label map " + path.string());
  return load_label_map(in, topics, path.string());
}

void write_label_map(std::ostream& out, const LabelMap& map) {
  out << "topic,category,label\n";
  for (std::size_t k = 0; k < map.size(); ++k) {
    const auto& l = map.at(k);
    if (l.label.find_first_of("\n\r") != std::string::npos)
      throw ValidationError("label contains a line break: " + l.label);
    out << k << ',' << category_name(l.category) << ',' << l.label << '\n';
  }
}

const LabelMap& paper_label_map() {
  static const LabelMap map = [] {
    std::istringstream in{std::string(bundled::kPaperLabelMap)};
    return load_label_map(in, 20, "paper_labelmap");
  }();
  return map;
}

// ---------------------------------------------------------------- rollup

GroupCategoryWeights group_category_weights(const RealMatrix& theta,
                                            const std::map<std::string, std::vector<std::size_t>>& groups,
                                            const LabelMap& map) {
  if (map.size() != theta.cols())
    throw ValidationError("label map covers " + std::to_string(map.size()) + " topics, model has " +
                          std::to_string(theta.cols()));
  const auto category_of = map.category_indices();
  GroupCategoryWeights out;
  for (const auto& [group, docs] : groups) {
    for (std::size_t d : docs)
      if (d >= theta.rows()) throw ValidationError("group " + group + " references a missing document");
    if (docs.empty()) {
      out.empty_groups.push_back(group);
      continue;
    }
    const auto masses = kernels::parallel::category_masses(theta, docs, category_of, kNumCategories);
    std::array<double, kNumCategories> mass{};
    std::copy(masses.begin(), masses.end(), mass.begin());
    kernels::CompensatedSum total;
    for (double m : mass) total.add(m);
    std::array<double, kNumCategories> weight{};
    for (std::size_t c = 0; c < kNumCategories; ++c) weight[c] = mass[c] / total.value();
    out.mass.emplace(group, mass);
    out.weight.emplace(group, weight);
  }
  return out;
}

std::array<double, kNumCategories> aggregate_all_groups(const GroupCategoryWeights& per_group) {
  if (per_group.mass.empty()) throw ValidationError("no non-empty groups to aggregate");
  std::array<kernels::CompensatedSum, kNumCategories> sums;
  for (const auto& [group, mass] : per_group.mass)
    for (std::size_t c = 0; c < kNumCategories; ++c) sums[c].add(mass[c]);
  kernels::CompensatedSum total;
  for (const auto& s : sums) total.add(s.value());
  std::array<double, kNumCategories> out{};
  for (std::size_t c = 0; c < kNumCategories; ++c) out[c] = sums[c].value() / total.value();
  return out;
}

// ---------------------------------------------------------------- CSV

void write_topic_weights_csv(std::ostream& out, const TopicWeights& weights, const LabelMap& map) {
  if (map.size() != weights.wt.size()) throw ValidationError("label map does not match topic count");
  const auto order = rank_topics(weights.nwt);
  std::vector<std::size_t> rank(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;

  out << "topic,label,category,wt,nwt,rank\n";
  for (std::size_t k = 0; k < weights.wt.size(); ++k) {
    out << k << ',' << csv_field(map.at(k).label) << ',' << category_name(map.at(k).category) << ','
        << format_fixed(weights.wt[k], 9) << ',' << format_fixed(weights.nwt[k], 12) << ',' << rank[k] << '\n';
  }
}

void write_category_weights_csv(std::ostream& out, const GroupCategoryWeights& per_group) {
  out << "group,category,weight\n";
  auto emit = [&out](std::string_view group, const std::array<double, kNumCategories>& w) {
    for (std::size_t c = 0; c < kNumCategories; ++c)
      out << csv_field(std::string(group)) << ',' << kCategoryNames[c] << ',' << format_fixed(w[c], 12) << '\n';
  };
  for (const auto& [group, w] : per_group.weight) emit(group, w);
  if (!per_group.weight.empty()) emit(kAllGroupsLabel, aggregate_all_groups(per_group));
}

}  // namespace topicmine::analysis
