#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wntm/gibbs.hpp"
#include "wntm/matrix.hpp"
#include "wntm/wntm.hpp"

namespace wntm::eval {

/// Document frequencies over a reference corpus: D(m) = number of documents
/// containing word m, D(m, m') = number containing both.
class DocFrequencyIndex {
 public:
  static DocFrequencyIndex build(const std::vector<std::vector<WordId>>& docs,
                                 std::int32_t vocab_size);

  std::int64_t doc_frequency(WordId m) const { return single_.at(static_cast<std::size_t>(m)); }
  std::int64_t pair_frequency(WordId m, WordId n) const;
  std::int64_t num_documents() const { return num_docs_; }
  std::int32_t vocab_size() const { return static_cast<std::int32_t>(single_.size()); }

 private:
  std::vector<std::int64_t> single_;
  std::unordered_map<std::uint64_t, std::int64_t> pairs_;
  std::int64_t num_docs_ = 0;
};

struct CoherenceConfig {
  int top_t = 5;
  double epsilon = 1e-12;

  void validate() const;
};

/// The top_t most probable words of a phi row, descending by probability,
/// ties broken by ascending word id.
std::vector<WordId> top_words(std::span<const double> phi_row, int top_t);

/// C = sum_{t=2..T} sum_{l=1..t-1} log((D(m_t, m_l) + eps) / D(m_l)),
/// natural log, over the given ordered top-word list. Throws when a needed
/// denominator word is absent from the reference corpus.
double topic_coherence(std::span<const WordId> top, const DocFrequencyIndex& index,
                       const CoherenceConfig& cfg);

/// Arithmetic mean of per-topic coherence over all rows of phi.
double average_coherence(const Matrix& phi, const DocFrequencyIndex& index,
                         const CoherenceConfig& cfg);
std::vector<double> per_topic_coherence(const Matrix& phi, const DocFrequencyIndex& index,
                                        const CoherenceConfig& cfg);

/// s_w[k] = n_{w|k} / n_w from final-state assignment counts.
std::vector<double> lda_word_representation(WordId w, const gibbs::SamplerState& state);
std::vector<double> lda_word_representation(WordId w,
                                            std::span<const std::int64_t> word_topic_counts,
                                            std::int32_t num_topics);

/// s_w = word_theta row w, verbatim.
std::vector<double> wntm_word_representation(WordId w, const WordTopicModel& model);

/// Jensen-Shannon divergence with natural log; symmetric, in [0, ln 2].
/// Inputs must be distributions (nonnegative, sums within 1e-9 of 1).
double js_divergence(std::span<const double> a, std::span<const double> b);

/// In [0, 1] for nonnegative inputs. Throws on an all-zero vector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Spearman rank correlation with average ranks for ties. Tie-free inputs go
/// through the exact rank-difference form; ties fall back to the Pearson
/// correlation of average ranks. A constant list has no ranking: returns 0.
double spearman(std::span<const double> a, std::span<const double> b);

struct WordPairRatings {
  struct Entry {
    std::string word_a;
    std::string word_b;
    double rating;
  };
  std::vector<Entry> entries;
};

/// TSV `word1 <TAB> word2 <TAB> rating`; duplicate unordered pairs rejected.
WordPairRatings load_ratings_tsv(const std::string& path);

enum class Measure { JS, Cosine };
Measure parse_measure(const std::string& name);

struct WordSimResult {
  double correlation = 0.0;
  std::int64_t used_pairs = 0;
  std::int64_t dropped_pairs = 0;  // at least one word out of vocabulary
};

/// Spearman correlation between human ratings and model similarities
/// (JS negated into a similarity). `represent` returns a word's topic
/// distribution, or nullopt when out of vocabulary; such pairs are dropped
/// and counted. Fewer than two usable pairs is an error.
WordSimResult wordsim_correlation(
    const WordPairRatings& ratings,
    const std::function<std::optional<std::vector<double>>(const std::string&)>& represent,
    Measure measure);

/// Sparse classifier lines `label idx:val`, indices 1-based ascending; one
/// line per proportions row. Label count must match the row count.
void export_features(std::ostream& out, const Matrix& proportions,
                     const std::vector<std::string>& labels);

}  // namespace wntm::eval
