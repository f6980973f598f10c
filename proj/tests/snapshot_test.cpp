#include <doctest.h>

#include <sstream>

#include "test_support.hpp"
#include "topicmine/snapshot.hpp"

using namespace topicmine;
using namespace topicmine::lda;

namespace {

std::pair<Corpus, LdaModel> fitted(std::uint64_t seed = 5) {
  Corpus c = testing::random_corpus(25, 6, 15, 3);
  c.documents[3].group = "OR";
  c.index_groups();
  LdaConfig cfg = LdaConfig::with_topics(3);
  cfg.sweeps = 8;
  cfg.burn_in = 2;
  cfg.seed = seed;
  cfg.alpha = 0.1;  // not exactly representable in decimal
  auto m = fit(c, cfg);
  return {std::move(c), std::move(m)};
}

std::string to_text(const Snapshot& s) {
  std::ostringstream out;
  write_snapshot(out, s);
  return out.str();
}

}  // namespace

TEST_CASE("snapshot round trip reproduces the model exactly") {
  const auto [corpus, model] = fitted();
  const auto snap = make_snapshot(model, corpus);
  const std::string text = to_text(snap);
  std::istringstream in(text);
  const auto back = read_snapshot(in);

  CHECK(back.config.alpha == model.config().alpha);
  CHECK(back.config.beta == model.config().beta);
  CHECK(back.config.seed == model.config().seed);
  CHECK(back.corpus == corpus);
  CHECK(back.tables == model.tables());
  CHECK(back.assignments == model.assignments());
  const auto rebuilt = back.model();
  CHECK(rebuilt.theta() == model.theta());
  CHECK(rebuilt.phi() == model.phi());
  CHECK(to_text(back) == text);
}

TEST_CASE("snapshot reader rejects damaged files") {
  const auto [corpus, model] = fitted();
  const std::string text = to_text(make_snapshot(model, corpus));

  auto expect_error = [](std::string bad) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(read_snapshot(in), ParseError);
  };
  SUBCASE("version") { expect_error("topicmine-lda-snapshot\t99\n"); }
  SUBCASE("generator") {
    std::string bad = text;
    bad.replace(bad.find("mt19937_64"), 10, "xorshift64*");
    expect_error(bad);
  }
  SUBCASE("truncated") { expect_error(text.substr(0, text.size() / 2)); }
  SUBCASE("tables disagree with assignments") {
    std::string bad = text;
    const auto pos = bad.find("\ntopic_total\t");
    const auto end = bad.find('\n', pos + 1);
    // swap in a wrong (but same-shaped) total row
    std::string row = bad.substr(pos + 1, end - pos - 1);
    const auto tab = row.rfind('\t');
    row = row.substr(0, tab + 1) + "0";
    bad.replace(pos + 1, end - pos - 1, row);
    expect_error(bad);
  }
}

TEST_CASE("snapshot writer rejects fields with tabs") {
  auto [corpus, model] = fitted();
  auto snap = make_snapshot(model, corpus);
  snap.corpus.documents[0].post_id = "has\ttab";
  std::ostringstream out;
  CHECK_THROWS_AS(write_snapshot(out, snap), ValidationError);
}
