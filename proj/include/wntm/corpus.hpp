#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wntm/error.hpp"

namespace wntm {

using WordId = std::int32_t;

/// One document: an ordered sequence of vocabulary word ids. `id` is the
/// 0-based ordinal of the document in the input file, kept stable across
/// filtering so dropped lines stay traceable.
struct Document {
  std::int64_t id = 0;
  std::vector<WordId> tokens;
};

/// Bijection between word strings and dense ids plus per-word token counts
/// over the retained corpus.
class Vocabulary {
 public:
  Vocabulary() = default;

  WordId add(const std::string& word, std::int64_t frequency = 0);

  /// -1 when absent.
  WordId id_of(const std::string& word) const;
  const std::string& word_of(WordId id) const { return words_.at(id); }

  std::int64_t frequency(WordId id) const { return freqs_.at(id); }
  void set_frequency(WordId id, std::int64_t f) { freqs_.at(id) = f; }

  std::int32_t size() const { return static_cast<std::int32_t>(words_.size()); }

 private:
  std::vector<std::string> words_;
  std::vector<std::int64_t> freqs_;
  std::unordered_map<std::string, WordId> index_;
};

struct Corpus {
  std::vector<Document> documents;
  Vocabulary vocabulary;
};

struct CorpusStats {
  std::int64_t num_documents = 0;
  std::int64_t total_tokens = 0;
  double avg_doc_length = 0.0;
  std::int64_t vocab_size = 0;  // one pseudo-document per word downstream
};

struct FilterConfig {
  std::int64_t min_frequency = 20;
  std::int64_t min_doc_length = 10;
};

using RawDocument = std::vector<std::string>;

/// Reads one whitespace-tokenized document per non-empty line.
/// Throws on unreadable files and on an empty corpus.
std::vector<RawDocument> load_raw_documents(const std::string& path);

/// One word per line; blank lines ignored.
std::unordered_set<std::string> load_stopwords(const std::string& path);

/// Filtering pipeline: drop stopwords, then words whose frequency over the
/// stopword-filtered corpus is below min_frequency (single pass), then
/// documents whose post-filter length is below min_doc_length. Frequencies
/// are recomputed on the retained corpus and ids are assigned densely from 0
/// in first-occurrence order. Throws when nothing survives.
Corpus build_vocabulary(const std::vector<RawDocument>& raw_docs,
                        const FilterConfig& cfg,
                        const std::unordered_set<std::string>& stopwords = {});

CorpusStats corpus_stats(const Corpus& corpus);

/// Maps tokens to ids, silently dropping out-of-vocabulary words.
std::vector<WordId> encode_tokens(const Vocabulary& vocab, const RawDocument& tokens);

std::vector<std::string> decode_tokens(const Vocabulary& vocab,
                                       const std::vector<WordId>& tokens);

/// TSV `word_id <TAB> word <TAB> frequency`, ids dense from 0.
void save_vocabulary_tsv(const std::string& path, const Vocabulary& vocab);
Vocabulary load_vocabulary_tsv(const std::string& path);

/// One document per line: `doc_id <TAB> space-separated word ids`.
void save_encoded_corpus(const std::string& path, const std::vector<Document>& docs);
std::vector<Document> load_encoded_corpus(const std::string& path);

/// Token sequences only, in document order.
std::vector<std::vector<WordId>> token_views(const std::vector<Document>& docs);

}  // namespace wntm
