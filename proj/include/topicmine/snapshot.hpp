#pragma once

#include <filesystem>
#include <iosfwd>

#include "topicmine/corpus.hpp"
#include "topicmine/lda.hpp"

namespace topicmine::lda {

// Everything needed to rebuild a fitted model and its reports.
struct Snapshot {
  LdaConfig config;
  Corpus corpus;
  CountTables tables;
  Assignments assignments;

  LdaModel model() const;
};

inline constexpr int kSnapshotVersion = 1;

// Snapshot file, UTF-8 text, LF line endings, one record per line, fields
// separated by a single TAB. Doubles are written in hexadecimal
// floating-point form without the 0x prefix (std::chars_format::hex, e.g.
// "1.4p+1") so they round-trip exactly.
//
//   topicmine-lda-snapshot <version>
//   generator <Rng::kGeneratorId>
//   topics <K>
//   alpha <hexfloat>
//   beta <hexfloat>
//   sweeps <n>
//   burn_in <n>
//   seed <u64>
//   top_n <n>
//   likelihood_every <n>
//   vocab <V>
//   <token>                               V lines, id order
//   docs <D>
//   doc <post_id> <account> <group> <len> <w_1> ... <w_len>     D lines
//   assign <z_1> ... <z_len>                                    after each doc
//   topic_total <n_1> ... <n_K>
//   doc_topic                                                   then D lines of K counts
//   topic_word                                                  then K lines of V counts
//   end
//
// Tokens, post ids, accounts and groups must not contain TAB or LF; the
// writer rejects them. The reader recounts assignments and rejects a file
// whose stored tables disagree.
void write_snapshot(std::ostream& out, const Snapshot& snapshot);
void write_snapshot(const std::filesystem::path& path, const Snapshot& snapshot);
Snapshot read_snapshot(std::istream& in, const std::string& source_name = "<stream>");
Snapshot read_snapshot(const std::filesystem::path& path);

Snapshot make_snapshot(const LdaModel& model, const Corpus& corpus);

}  // namespace topicmine::lda
