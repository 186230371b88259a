#include "wntm/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "wntm/textio.hpp"

namespace wntm {

WordId Vocabulary::add(const std::string& word, std::int64_t frequency) {
  auto [it, inserted] = index_.emplace(word, static_cast<WordId>(words_.size()));
  if (inserted) {
    words_.push_back(word);
    freqs_.push_back(frequency);
  }
  return it->second;
}

WordId Vocabulary::id_of(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? -1 : it->second;
}

std::vector<RawDocument> load_raw_documents(const std::string& path) {
  std::vector<RawDocument> docs;
  for (const std::string& line : read_lines(path)) {
    auto toks = split_tokens(line);
    if (toks.empty()) continue;
    RawDocument doc;
    doc.reserve(toks.size());
    for (auto t : toks) doc.emplace_back(t);
    docs.push_back(std::move(doc));
  }
  if (docs.empty()) throw Error("empty corpus: " + path);
  return docs;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::unordered_set<std::string> words;
  for (const std::string& line : read_lines(path)) {
    auto toks = split_tokens(line);
    if (!toks.empty()) words.emplace(toks.front());
  }
  return words;
}

Corpus build_vocabulary(const std::vector<RawDocument>& raw_docs,
                        const FilterConfig& cfg,
                        const std::unordered_set<std::string>& stopwords) {
  if (cfg.min_frequency < 1) throw Error("min_frequency must be >= 1");
  if (cfg.min_doc_length < 0) throw Error("min_doc_length must be >= 0");

  // Pass 1: stopword removal, then frequencies over what is left.
  std::vector<std::vector<const std::string*>> kept(raw_docs.size());
  std::unordered_map<std::string, std::int64_t> freq;
  for (std::size_t d = 0; d < raw_docs.size(); ++d) {
    for (const std::string& w : raw_docs[d]) {
      if (stopwords.contains(w)) continue;
      kept[d].push_back(&w);
      ++freq[w];
    }
  }

  // Pass 2: frequency threshold (single pass by design), then the document
  // length filter on post-filter lengths.
  Corpus corpus;
  for (std::size_t d = 0; d < raw_docs.size(); ++d) {
    std::vector<const std::string*> toks;
    toks.reserve(kept[d].size());
    for (const std::string* w : kept[d]) {
      if (freq[*w] >= cfg.min_frequency) toks.push_back(w);
    }
    if (static_cast<std::int64_t>(toks.size()) < cfg.min_doc_length) continue;
    Document doc;
    doc.id = static_cast<std::int64_t>(d);
    doc.tokens.reserve(toks.size());
    // Ids are minted here, in first-occurrence order over retained tokens.
    for (const std::string* w : toks) {
      doc.tokens.push_back(corpus.vocabulary.add(*w));
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.empty() || corpus.vocabulary.size() == 0) {
    throw Error("empty corpus after filtering");
  }

  // Recompute frequencies on the retained corpus. Dropping short documents
  // can only remove occurrences, never add words, so ids stay dense and in
  // first-occurrence order; words left with zero occurrences cannot exist
  // here (every id was minted by a retained token).
  for (const Document& doc : corpus.documents) {
    for (WordId t : doc.tokens) {
      corpus.vocabulary.set_frequency(t, corpus.vocabulary.frequency(t) + 1);
    }
  }
  return corpus;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats st;
  st.num_documents = static_cast<std::int64_t>(corpus.documents.size());
  for (const Document& d : corpus.documents) {
    st.total_tokens += static_cast<std::int64_t>(d.tokens.size());
  }
  st.avg_doc_length = st.num_documents == 0
                          ? 0.0
                          : static_cast<double>(st.total_tokens) /
                                static_cast<double>(st.num_documents);
  st.vocab_size = corpus.vocabulary.size();
  return st;
}

std::vector<WordId> encode_tokens(const Vocabulary& vocab, const RawDocument& tokens) {
  std::vector<WordId> ids;
  ids.reserve(tokens.size());
  for (const std::string& w : tokens) {
    WordId id = vocab.id_of(w);
    if (id >= 0) ids.push_back(id);
  }
  return ids;
}

std::vector<std::string> decode_tokens(const Vocabulary& vocab,
                                       const std::vector<WordId>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (WordId t : tokens) out.push_back(vocab.word_of(t));
  return out;
}

void save_vocabulary_tsv(const std::string& path, const Vocabulary& vocab) {
  std::string out;
  for (WordId id = 0; id < vocab.size(); ++id) {
    out += std::to_string(id);
    out += '\t';
    out += vocab.word_of(id);
    out += '\t';
    out += std::to_string(vocab.frequency(id));
    out += '\n';
  }
  write_file(path, out);
}

Vocabulary load_vocabulary_tsv(const std::string& path) {
  Vocabulary vocab;
  for (const std::string& line : read_lines(path)) {
    if (line.empty()) continue;
    auto fields = split_tokens(line, "\t");
    if (fields.size() != 3) throw Error("malformed vocabulary line: '" + line + "'");
    WordId id = static_cast<WordId>(parse_int(fields[0]));
    if (id != vocab.size()) throw Error("vocabulary ids must be dense from 0");
    vocab.add(std::string(fields[1]), parse_int(fields[2]));
  }
  return vocab;
}

void save_encoded_corpus(const std::string& path, const std::vector<Document>& docs) {
  std::string out;
  for (const Document& d : docs) {
    out += std::to_string(d.id);
    out += '\t';
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      if (i > 0) out += ' ';
      out += std::to_string(d.tokens[i]);
    }
    out += '\n';
  }
  write_file(path, out);
}

std::vector<Document> load_encoded_corpus(const std::string& path) {
  std::vector<Document> docs;
  for (const std::string& line : read_lines(path)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error("malformed corpus line: '" + line + "'");
    Document d;
    d.id = parse_int(std::string_view(line).substr(0, tab));
    for (auto t : split_tokens(std::string_view(line).substr(tab + 1))) {
      d.tokens.push_back(static_cast<WordId>(parse_int(t)));
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<std::vector<WordId>> token_views(const std::vector<Document>& docs) {
  std::vector<std::vector<WordId>> out;
  out.reserve(docs.size());
  for (const Document& d : docs) out.push_back(d.tokens);
  return out;
}

}  // namespace wntm
