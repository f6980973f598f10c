#include <doctest.h>

#include <cmath>
#include <sstream>

#include "test_support.hpp"
#include "topicmine/analysis.hpp"
#include "topicmine/lda.hpp"

using namespace topicmine;
using namespace topicmine::analysis;

namespace {

RealMatrix matrix(const std::vector<std::vector<double>>& rows) {
  RealMatrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

LabelMap labels(std::initializer_list<Category> cats) {
  std::vector<TopicLabel> v;
  int i = 0;
  for (auto c : cats) v.push_back({"topic " + std::to_string(i++), c});
  return LabelMap(v);
}

RealMatrix random_theta(std::size_t docs, std::size_t topics, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  RealMatrix m(docs, topics);
  for (std::size_t d = 0; d < docs; ++d) {
    double s = 0;
    for (std::size_t k = 0; k < topics; ++k) s += (m(d, k) = u(gen));
    for (std::size_t k = 0; k < topics; ++k) m(d, k) /= s;
  }
  return m;
}

}  // namespace

TEST_CASE("topic_weights") {
  SUBCASE("hand-summed example") {
    const auto w = topic_weights(matrix({{0.7, 0.3}, {0.5, 0.5}}));
    CHECK(w.wt[0] == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(w.wt[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(w.nwt[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(w.nwt[1] == doctest::Approx(0.4).epsilon(1e-15));
  }
  SUBCASE("one document") {
    const auto theta = matrix({{0.2, 0.5, 0.3}});
    const auto w = topic_weights(theta);
    for (std::size_t k = 0; k < 3; ++k) CHECK(w.nwt[k] == doctest::Approx(theta(0, k)).epsilon(1e-15));
  }
  SUBCASE("one topic") { CHECK(topic_weights(matrix({{1.0}, {1.0}})).nwt == std::vector<double>{1.0}); }
  SUBCASE("no topics") { CHECK_THROWS_AS(topic_weights(RealMatrix(3, 0)), ValidationError); }
  SUBCASE("identities hold on a fitted model") {
    const Corpus c = testing::random_corpus(400, 9, 60, 8);
    auto cfg = lda::LdaConfig::with_topics(7);
    cfg.sweeps = 15;
    cfg.burn_in = 0;
    const auto m = lda::fit(c, cfg);
    const auto w = topic_weights(m.theta());
    const double D = static_cast<double>(c.num_documents());
    double sum_wt = 0, sum_nwt = 0;
    for (std::size_t k = 0; k < w.wt.size(); ++k) {
      sum_wt += w.wt[k];
      sum_nwt += w.nwt[k];
      CHECK(std::abs(w.nwt[k] * D - w.wt[k]) <= 1e-9);
      CHECK(w.nwt[k] >= 0.0);
      CHECK(w.nwt[k] <= 1.0);
    }
    CHECK(std::abs(sum_wt - D) <= 1e-9);
    CHECK(std::abs(sum_nwt - 1.0) <= 1e-9);
    CHECK(rank_topics(w.nwt) == rank_topics(w.wt));
  }
}

TEST_CASE("rank_topics") {
  CHECK(rank_topics(std::vector<double>{0.1, 0.5, 0.4}) == std::vector<std::size_t>{1, 2, 0});
  CHECK(rank_topics(std::vector<double>{0.5, 0.5}) == std::vector<std::size_t>{0, 1});
  CHECK(rank_topics(std::vector<double>{1.0}) == std::vector<std::size_t>{0});
  SUBCASE("invariant under positive scaling") {
    std::mt19937 gen(2);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> w(12);
      for (auto& x : w) x = static_cast<double>(gen() % 5);  // many ties
      std::vector<double> scaled = w;
      for (auto& x : scaled) x *= 3.75;
      CHECK(rank_topics(w) == rank_topics(scaled));
    }
  }
}

TEST_CASE("paper label map") {
  const auto& map = paper_label_map();
  CHECK(map.size() == 20);
  const auto sizes = map.category_sizes();
  CHECK(sizes == std::map<Category, std::size_t>{{Category::Book, 5},
                                                  {Category::Event, 5},
                                                  {Category::PublicRelations, 6},
                                                  {Category::Training, 2},
                                                  {Category::SocialGood, 2}});
  CHECK(map.at(0).label == "Book Recommendations");
  CHECK(map.at(9).label == "Book Events");
  CHECK(map.at(9).category == Category::Book);
  CHECK(map.at(3).category == Category::Training);
  CHECK(map.at(19).category == Category::Training);
  CHECK(map.at(18).category == Category::SocialGood);

  const auto from_file = load_label_map(std::filesystem::path(TOPICMINE_DATA_DIR) / "paper_labelmap.csv", 20);
  CHECK(from_file == map);
}

TEST_CASE("load_label_map validation") {
  std::ostringstream full;
  write_label_map(full, paper_label_map());

  SUBCASE("round trip") {
    std::istringstream in(full.str());
    CHECK(load_label_map(in, 20) == paper_label_map());
  }
  SUBCASE("missing topic 7") {
    std::string text = full.str();
    const auto pos = text.find("\n7,");
    text.erase(pos + 1, text.find('\n', pos + 1) - pos);
    std::istringstream in(text);
    CHECK_THROWS_WITH_AS(load_label_map(in, 20), doctest::Contains("topic 7"), ValidationError);
  }
  SUBCASE("unknown category") {
    std::istringstream in("topic,category,label\n0,Sports,Games\n");
    CHECK_THROWS_WITH_AS(load_label_map(in, 1), doctest::Contains("Sports"), ParseError);
  }
  SUBCASE("duplicate topic") {
    std::istringstream in("topic,category,label\n0,Book,A\n0,Event,B\n");
    CHECK_THROWS_WITH_AS(load_label_map(in, 1), doctest::Contains("duplicate"), ParseError);
  }
  SUBCASE("out of range") {
    std::istringstream in("topic,category,label\n0,Book,A\n1,Event,B\n");
    CHECK_THROWS_AS(load_label_map(in, 1), ParseError);
  }
  SUBCASE("labels may contain commas") {
    std::istringstream in("# c\ntopic,category,label\n0,Book,Books, reviews\n");
    CHECK(load_label_map(in, 1).at(0).label == "Books, reviews");
  }
  SUBCASE("random maps round trip") {
    std::mt19937 gen(4);
    for (int t = 0; t < 20; ++t) {
      std::vector<TopicLabel> v;
      const std::size_t k = 1 + gen() % 30;
      for (std::size_t i = 0; i < k; ++i)
        v.push_back({"label " + std::to_string(gen() % 1000) + ", x", kAllCategories[gen() % 5]});
      const LabelMap m(v);
      std::ostringstream out;
      write_label_map(out, m);
      std::istringstream in(out.str());
      CHECK(load_label_map(in, k) == m);
    }
  }
}

TEST_CASE("group_category_weights") {
  SUBCASE("all mass on a book topic") {
    const auto map = labels({Category::Book, Category::Event});
    const auto g = group_category_weights(matrix({{1.0, 0.0}}), {{"OR", {0}}}, map);
    const auto& w = g.weight.at("OR");
    CHECK(w[0] == 1.0);
    for (std::size_t c = 1; c < kNumCategories; ++c) CHECK(w[c] == 0.0);
  }
  SUBCASE("training is the sum of its two topics") {
    const auto& map = paper_label_map();
    const auto theta = random_theta(9, 20, 1);
    const auto g = group_category_weights(theta, {{"OR", {0, 2, 4, 6, 8}}}, map);
    double ptr = 0, pta = 0, all = 0;
    for (std::size_t d : {0, 2, 4, 6, 8}) {
      ptr += theta(d, 3);   // Public Trainings
      pta += theta(d, 19);  // Public Talks
      for (std::size_t k = 0; k < 20; ++k) all += theta(d, k);
    }
    const auto training = static_cast<std::size_t>(Category::Training);
    CHECK(g.mass.at("OR")[training] == doctest::Approx(ptr + pta).epsilon(1e-14));
    CHECK(g.weight.at("OR")[training] == doctest::Approx((ptr + pta) / all).epsilon(1e-14));
  }
  SUBCASE("identical rows give identical vectors") {
    const auto map = labels({Category::Book, Category::Event, Category::SocialGood});
    const auto theta = matrix({{0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}});
    const auto g = group_category_weights(theta, {{"A", {0}}, {"B", {1}}}, map);
    CHECK(g.weight.at("A") == g.weight.at("B"));
  }
  SUBCASE("per-group sums and masses") {
    const auto& map = paper_label_map();
    const auto theta = random_theta(50, 20, 9);
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t d = 0; d < 50; ++d) groups[d % 3 ? "CA" : "WA"].push_back(d);
    groups["HI"];  // no documents
    const auto g = group_category_weights(theta, groups, map);
    CHECK(g.empty_groups == std::vector<std::string>{"HI"});
    CHECK_FALSE(g.weight.contains("HI"));
    for (const auto& [name, w] : g.weight) {
      double s = 0, m = 0;
      for (std::size_t c = 0; c < kNumCategories; ++c) {
        CHECK(w[c] >= 0.0);
        s += w[c];
        m += g.mass.at(name)[c];
      }
      CHECK(std::abs(s - 1.0) <= 1e-9);
      CHECK(std::abs(m - static_cast<double>(groups.at(name).size())) <= 1e-9);
    }
  }
  SUBCASE("label map must match K") {
    CHECK_THROWS_AS(group_category_weights(matrix({{0.5, 0.5}}), {{"A", {0}}}, labels({Category::Book})),
                    ValidationError);
  }
}

TEST_CASE("aggregate_all_groups") {
  const auto& map = paper_label_map();
  const auto theta = random_theta(40, 20, 12);

  SUBCASE("single group is the identity") {
    std::map<std::string, std::vector<std::size_t>> one{{"CA", {}}};
    for (std::size_t d = 0; d < 40; ++d) one["CA"].push_back(d);
    const auto g = group_category_weights(theta, one, map);
    const auto all = aggregate_all_groups(g);
    for (std::size_t c = 0; c < kNumCategories; ++c)
      CHECK(all[c] == doctest::Approx(g.weight.at("CA")[c]).epsilon(1e-14));
  }
  SUBCASE("equal-size groups average") {
    std::map<std::string, std::vector<std::size_t>> two;
    for (std::size_t d = 0; d < 40; ++d) two[d < 20 ? "A" : "B"].push_back(d);
    const auto g = group_category_weights(theta, two, map);
    const auto all = aggregate_all_groups(g);
    for (std::size_t c = 0; c < kNumCategories; ++c)
      CHECK(std::abs(all[c] - 0.5 * (g.weight.at("A")[c] + g.weight.at("B")[c])) <= 1e-12);
  }
  SUBCASE("union equals doc-level recomputation") {
    std::map<std::string, std::vector<std::size_t>> three, merged{{"ALL", {}}};
    for (std::size_t d = 0; d < 40; ++d) {
      three[std::string(1, static_cast<char>('A' + d % 3))].push_back(d);
      merged["ALL"].push_back(d);
    }
    const auto all = aggregate_all_groups(group_category_weights(theta, three, map));
    const auto direct = group_category_weights(theta, merged, map).weight.at("ALL");
    for (std::size_t c = 0; c < kNumCategories; ++c) CHECK(std::abs(all[c] - direct[c]) <= 1e-12);
  }
  SUBCASE("no groups") { CHECK_THROWS_AS(aggregate_all_groups(GroupCategoryWeights{}), ValidationError); }
}

TEST_CASE("report CSV layout") {
  const auto map = labels({Category::Book, Category::Event});
  const auto theta = matrix({{0.75, 0.25}, {0.25, 0.75}, {1.0, 0.0}});
  std::ostringstream tw;
  write_topic_weights_csv(tw, topic_weights(theta), map);
  CHECK(tw.str() ==
        "topic,label,category,wt,nwt,rank\n"
        "0,topic 0,Book,2.000000000,0.666666666667,1\n"
        "1,topic 1,Event,1.000000000,0.333333333333,2\n");

  std::ostringstream cw;
  write_category_weights_csv(cw, group_category_weights(theta, {{"X", {0}}, {"Y", {1, 2}}}, map));
  const std::string csv = cw.str();
  CHECK(csv.starts_with("group,category,weight\nX,Book,0.750000000000\nX,Event,0.250000000000\n"));
  CHECK(csv.find("ALL,Book,0.666666666667\n") != std::string::npos);
  CHECK(csv.find("ALL,SocialGood,0.000000000000\n") != std::string::npos);
}
