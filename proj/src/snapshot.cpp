#include "topicmine/snapshot.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "topicmine/error.hpp"

namespace topicmine::lda {

namespace {

constexpr std::string_view kMagic = "topicmine-lda-snapshot";

std::string hex_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::hex);
  if (ec != std::errc{}) throw RuntimeFailure("cannot format double");
  return std::string(buf.data(), end);
}

void check_field(const std::string& s, const char* what) {
  if (s.find_first_of("\t\n\r") != std::string::npos)
    throw ValidationError(std::string("snapshot: ") + what + " contains TAB or newline: " + s);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) fail("unexpected end of file");
    ++line_no_;
    return s;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, what); }

  template <typename T>
  T number(std::string_view text) const {
    T v{};
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size()) fail("bad number '" + std::string(text) + "'");
    return v;
  }

  double hex(std::string_view text) const {
    double v{};
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v, std::chars_format::hex);
    if (ec != std::errc{} || p != text.data() + text.size()) fail("bad hex float '" + std::string(text) + "'");
    return v;
  }

  // Reads "<key>\t<value>".
  std::string_view keyed(std::string_view key) {
    current_ = line();
    const auto fields = split_tabs(current_);
    if (fields.size() != 2 || fields[0] != key) fail("expected '" + std::string(key) + "'");
    return fields[1];
  }

  std::vector<std::string_view> fields(std::string_view key) {
    current_ = line();
    auto f = split_tabs(current_);
    if (f.empty() || f[0] != key) fail("expected '" + std::string(key) + "'");
    return f;
  }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
  std::string current_;
};

template <typename Range>
void write_row(std::ostream& out, std::string_view key, const Range& values) {
  out << key;
  for (const auto& v : values) out << '\t' << v;
  out << '\n';
}

}  // namespace

LdaModel Snapshot::model() const { return LdaModel(config, corpus.vocabulary, tables, assignments); }

Snapshot make_snapshot(const LdaModel& model, const Corpus& corpus) {
  if (model.vocabulary() != corpus.vocabulary || model.assignments().size() != corpus.documents.size())
    throw ValidationError("model was not fitted on this corpus");
  return Snapshot{model.config(), corpus, model.tables(), model.assignments()};
}

void write_snapshot(std::ostream& out, const Snapshot& s) {
  const auto& c = s.config;
  out << kMagic << '\t' << kSnapshotVersion << '\n';
  out << "generator\t" << Rng::kGeneratorId << '\n';
  out << "topics\t" << c.topics << '\n';
  out << "alpha\t" << hex_double(c.alpha) << '\n';
  out << "beta\t" << hex_double(c.beta) << '\n';
  out << "sweeps\t" << c.sweeps << '\n';
  out << "burn_in\t" << c.burn_in << '\n';
  out << "seed\t" << c.seed << '\n';
  out << "top_n\t" << c.top_n << '\n';
  out << "likelihood_every\t" << c.likelihood_every << '\n';

  const auto& vocab = s.corpus.vocabulary.tokens();
  out << "vocab\t" << vocab.size() << '\n';
  for (const auto& t : vocab) {
    check_field(t, "token");
    out << t << '\n';
  }

  out << "docs\t" << s.corpus.documents.size() << '\n';
  for (std::size_t d = 0; d < s.corpus.documents.size(); ++d) {
    const auto& doc = s.corpus.documents[d];
    check_field(doc.post_id, "post id");
    check_field(doc.account, "account");
    check_field(doc.group, "group");
    out << "doc\t" << doc.post_id << '\t' << doc.account << '\t' << doc.group << '\t' << doc.word_ids.size();
    for (auto w : doc.word_ids) out << '\t' << w;
    out << '\n';
    write_row(out, "assign", s.assignments.at(d));
  }

  write_row(out, "topic_total", s.tables.topic_total);
  out << "doc_topic\n";
  for (std::size_t d = 0; d < s.tables.doc_topic.rows(); ++d) write_row(out, "r", s.tables.doc_topic.row(d));
  out << "topic_word\n";
  for (std::size_t k = 0; k < s.tables.topic_word.rows(); ++k) write_row(out, "r", s.tables.topic_word.row(k));
  out << "end\n";
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snapshot) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write snapshot " + path.string());
  write_snapshot(out, snapshot);
  if (!out) throw RuntimeFailure("write failed: " + path.string());
}

Snapshot read_snapshot(std::istream& in, const std::string& source_name) {
  Reader r(in, source_name);
  Snapshot s;

  {
    const auto version = r.keyed(kMagic);
    if (r.number<int>(version) != kSnapshotVersion)
      r.fail("unsupported snapshot version " + std::string(version));
  }
  if (r.keyed("generator") != Rng::kGeneratorId) r.fail("snapshot was written with a different generator");
  auto& c = s.config;
  c.topics = r.number<std::size_t>(r.keyed("topics"));
  c.alpha = r.hex(r.keyed("alpha"));
  c.beta = r.hex(r.keyed("beta"));
  c.sweeps = r.number<std::size_t>(r.keyed("sweeps"));
  c.burn_in = r.number<std::size_t>(r.keyed("burn_in"));
  c.seed = r.number<std::uint64_t>(r.keyed("seed"));
  c.top_n = r.number<std::size_t>(r.keyed("top_n"));
  c.likelihood_every = r.number<std::size_t>(r.keyed("likelihood_every"));
  try {
    c.validate();
  } catch (const ValidationError& e) {
    r.fail(e.what());
  }

  const auto vocab_size = r.number<std::size_t>(r.keyed("vocab"));
  for (std::size_t i = 0; i < vocab_size; ++i) {
    const std::string token = r.line();
    if (s.corpus.vocabulary.add(token) != i) r.fail("duplicate vocabulary token '" + token + "'");
  }

  const auto docs = r.number<std::size_t>(r.keyed("docs"));
  s.corpus.documents.reserve(docs);
  s.assignments.reserve(docs);
  for (std::size_t d = 0; d < docs; ++d) {
    const auto f = r.fields("doc");
    if (f.size() < 5) r.fail("truncated doc record");
    Document doc{std::string(f[1]), std::string(f[2]), std::string(f[3]), {}};
    const auto len = r.number<std::size_t>(f[4]);
    if (f.size() != 5 + len) r.fail("doc length does not match word count");
    doc.word_ids.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
      const auto w = r.number<WordId>(f[5 + i]);
      if (w >= vocab_size) r.fail("word id out of range");
      doc.word_ids.push_back(w);
    }
    const auto a = r.fields("assign");
    if (a.size() != 1 + len) r.fail("assignment count does not match doc length");
    std::vector<std::uint32_t> z(len);
    for (std::size_t i = 0; i < len; ++i) {
      z[i] = r.number<std::uint32_t>(a[1 + i]);
      if (z[i] >= c.topics) r.fail("assignment out of range");
    }
    s.corpus.documents.push_back(std::move(doc));
    s.assignments.push_back(std::move(z));
  }
  s.corpus.index_groups();

  auto& t = s.tables;
  t.doc_topic = Matrix<Count>(docs, c.topics);
  t.topic_word = Matrix<Count>(c.topics, vocab_size);
  t.doc_length.resize(docs);
  for (std::size_t d = 0; d < docs; ++d) t.doc_length[d] = static_cast<Count>(s.corpus.documents[d].word_ids.size());

  auto read_counts = [&](std::span<Count> dst, std::string_view key) {
    const auto f = r.fields(key);
    if (f.size() != dst.size() + 1) r.fail("wrong number of counts in '" + std::string(key) + "' row");
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = r.number<Count>(f[i + 1]);
  };
  t.topic_total.resize(c.topics);
  read_counts(t.topic_total, "topic_total");
  r.fields("doc_topic");
  for (std::size_t d = 0; d < docs; ++d) read_counts(t.doc_topic.row(d), "r");
  r.fields("topic_word");
  for (std::size_t k = 0; k < c.topics; ++k) read_counts(t.topic_word.row(k), "r");
  r.fields("end");

  if (count_assignments(s.corpus, s.assignments, c.topics) != t)
    r.fail("stored count tables disagree with the assignments");
  return s;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open snapshot " + path.string());
  return read_snapshot(in, path.string());
}

}  // namespace topicmine::lda
