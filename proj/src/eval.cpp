#include "wntm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "wntm/error.hpp"
#include "wntm/textio.hpp"

namespace wntm::eval {

namespace {

std::uint64_t pair_key(WordId a, WordId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

DocFrequencyIndex DocFrequencyIndex::build(const std::vector<std::vector<WordId>>& docs,
                                           std::int32_t vocab_size) {
  DocFrequencyIndex idx;
  idx.single_.assign(static_cast<std::size_t>(vocab_size), 0);
  idx.num_docs_ = static_cast<std::int64_t>(docs.size());
  std::vector<WordId> distinct;
  for (const auto& doc : docs) {
    distinct.assign(doc.begin(), doc.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      ++idx.single_.at(static_cast<std::size_t>(distinct[i]));
      for (std::size_t j = i + 1; j < distinct.size(); ++j) {
        ++idx.pairs_[pair_key(distinct[i], distinct[j])];
      }
    }
  }
  return idx;
}

std::int64_t DocFrequencyIndex::pair_frequency(WordId m, WordId n) const {
  if (m == n) return doc_frequency(m);
  auto it = pairs_.find(pair_key(m, n));
  return it == pairs_.end() ? 0 : it->second;
}

void CoherenceConfig::validate() const {
  if (top_t < 2) throw Error("coherence top_t must be >= 2");
  if (!(epsilon > 0.0)) throw Error("coherence epsilon must be > 0");
}

std::vector<WordId> top_words(std::span<const double> phi_row, int top_t) {
  std::vector<WordId> order(phi_row.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(top_t), order.size());
  std::partial_sort(order.begin(), order.begin() + t, order.end(),
                    [&](WordId a, WordId b) {
                      if (phi_row[a] != phi_row[b]) return phi_row[a] > phi_row[b];
                      return a < b;
                    });
  order.resize(t);
  return order;
}

double topic_coherence(std::span<const WordId> top, const DocFrequencyIndex& index,
                       const CoherenceConfig& cfg) {
  cfg.validate();
  double score = 0.0;
  for (std::size_t t = 1; t < top.size(); ++t) {
    for (std::size_t l = 0; l < t; ++l) {
      const std::int64_t denom = index.doc_frequency(top[l]);
      if (denom < 1) {
        throw Error("word absent from reference corpus: id " + std::to_string(top[l]));
      }
      const std::int64_t joint = index.pair_frequency(top[t], top[l]);
      score += std::log((static_cast<double>(joint) + cfg.epsilon) /
                        static_cast<double>(denom));
    }
  }
  return score;
}

std::vector<double> per_topic_coherence(const Matrix& phi, const DocFrequencyIndex& index,
                                        const CoherenceConfig& cfg) {
  cfg.validate();
  std::vector<double> scores;
  scores.reserve(phi.rows);
  for (std::size_t k = 0; k < phi.rows; ++k) {
    auto top = top_words(phi.row_span(k), cfg.top_t);
    scores.push_back(topic_coherence(top, index, cfg));
  }
  return scores;
}

double average_coherence(const Matrix& phi, const DocFrequencyIndex& index,
                         const CoherenceConfig& cfg) {
  if (phi.rows == 0) throw Error("no topics to score");
  const auto scores = per_topic_coherence(phi, index, cfg);
  double total = 0.0;
  for (double s : scores) total += s;
  return total / static_cast<double>(scores.size());
}

std::vector<double> lda_word_representation(WordId w, const gibbs::SamplerState& state) {
  if (w < 0 || w >= state.vocab_size) throw Error("word id out of range");
  const std::int32_t K = state.num_topics;
  const std::int32_t* row = state.word_topic.data() + static_cast<std::size_t>(w) * K;
  std::int64_t n_w = 0;
  for (std::int32_t k = 0; k < K; ++k) n_w += row[k];
  if (n_w < 1) throw Error("word never observed in the sampler state");
  std::vector<double> s(static_cast<std::size_t>(K));
  for (std::int32_t k = 0; k < K; ++k) {
    s[k] = static_cast<double>(row[k]) / static_cast<double>(n_w);
  }
  return s;
}

std::vector<double> lda_word_representation(WordId w,
                                            std::span<const std::int64_t> word_topic_counts,
                                            std::int32_t num_topics) {
  const std::size_t offset = static_cast<std::size_t>(w) * num_topics;
  if (w < 0 || offset + num_topics > word_topic_counts.size()) {
    throw Error("word id out of range");
  }
  std::int64_t n_w = 0;
  for (std::int32_t k = 0; k < num_topics; ++k) n_w += word_topic_counts[offset + k];
  if (n_w < 1) throw Error("word never observed in the sampler state");
  std::vector<double> s(static_cast<std::size_t>(num_topics));
  for (std::int32_t k = 0; k < num_topics; ++k) {
    s[k] = static_cast<double>(word_topic_counts[offset + k]) / static_cast<double>(n_w);
  }
  return s;
}

std::vector<double> wntm_word_representation(WordId w, const WordTopicModel& model) {
  if (w < 0 || static_cast<std::size_t>(w) >= model.word_theta.rows) {
    throw Error("word id out of range");
  }
  auto row = model.word_theta.row_span(static_cast<std::size_t>(w));
  return {row.begin(), row.end()};
}

namespace {

void check_distribution(std::span<const double> p) {
  double total = 0.0;
  for (double x : p) {
    if (x < 0.0 || !std::isfinite(x)) throw Error("not a distribution: negative or non-finite entry");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error("not a distribution: does not sum to 1");
}

}  // namespace

double js_divergence(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("distribution size mismatch");
  check_distribution(a);
  check_distribution(b);
  double js = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double m = 0.5 * (a[i] + b[i]);
    if (a[i] > 0.0) js += 0.5 * a[i] * std::log(a[i] / m);
    if (b[i] > 0.0) js += 0.5 * b[i] * std::log(b[i] / m);
  }
  return js;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("vector size mismatch");
  const auto& kern = kernels::active();
  const double na = kern.dot(a.data(), a.data(), a.size());
  const double nb = kern.dot(b.data(), b.data(), b.size());
  if (na == 0.0 || nb == 0.0) throw Error("cosine similarity of a zero vector");
  return kern.dot(a.data(), b.data(), a.size()) / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

/// Average ranks (1-based); equal values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v, bool* had_ties) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return v[a] < v[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    if (j > i && had_ties) *had_ties = true;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("rating list size mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw Error("need at least two pairs for a rank correlation");

  bool ties = false;
  const auto ra = average_ranks(a, &ties);
  const auto rb = average_ranks(b, &ties);

  if (!ties) {
    // Exact rank-difference form: 1 - 6*sum(d^2) / (n(n^2-1)).
    double sum_d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = ra[i] - rb[i];
      sum_d2 += d * d;
    }
    const double nn = static_cast<double>(n);
    return 1.0 - 6.0 * sum_d2 / (nn * (nn * nn - 1.0));
  }

  // Pearson correlation of the average ranks.
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += ra[i];
    mean_b += rb[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = ra[i] - mean_a;
    const double db = rb[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) return 0.0;  // a constant list carries no ranking
  return cov / (std::sqrt(var_a) * std::sqrt(var_b));
}

WordPairRatings load_ratings_tsv(const std::string& path) {
  WordPairRatings ratings;
  std::set<std::pair<std::string, std::string>> seen;
  for (const std::string& line : read_lines(path)) {
    if (line.empty()) continue;
    auto fields = split_tokens(line, "\t");
    if (fields.size() != 3) throw Error("malformed ratings line: '" + line + "'");
    WordPairRatings::Entry e{std::string(fields[0]), std::string(fields[1]),
                             parse_double(fields[2])};
    auto key = std::minmax(e.word_a, e.word_b);
    if (!seen.insert(key).second) {
      throw Error("duplicate word pair in ratings: " + e.word_a + " / " + e.word_b);
    }
    ratings.entries.push_back(std::move(e));
  }
  return ratings;
}

Measure parse_measure(const std::string& name) {
  if (name == "js") return Measure::JS;
  if (name == "cosine") return Measure::Cosine;
  throw Error("unknown similarity measure: '" + name + "' (expected js or cosine)");
}

WordSimResult wordsim_correlation(
    const WordPairRatings& ratings,
    const std::function<std::optional<std::vector<double>>(const std::string&)>& represent,
    Measure measure) {
  std::vector<double> human;
  std::vector<double> model;
  WordSimResult result;
  for (const auto& e : ratings.entries) {
    auto sa = represent(e.word_a);
    auto sb = represent(e.word_b);
    if (!sa || !sb) {
      ++result.dropped_pairs;
      continue;
    }
    human.push_back(e.rating);
    // JS is a distance; negate it into a similarity.
    model.push_back(measure == Measure::JS ? -js_divergence(*sa, *sb)
                                           : cosine_similarity(*sa, *sb));
  }
  result.used_pairs = static_cast<std::int64_t>(human.size());
  if (result.used_pairs < 2) {
    throw Error("fewer than two usable word pairs after vocabulary filtering");
  }
  result.correlation = spearman(human, model);
  return result;
}

void export_features(std::ostream& out, const Matrix& proportions,
                     const std::vector<std::string>& labels) {
  if (labels.size() != proportions.rows) {
    throw Error("label count (" + std::to_string(labels.size()) +
                ") does not match document count (" + std::to_string(proportions.rows) + ")");
  }
  for (std::size_t r = 0; r < proportions.rows; ++r) {
    out << labels[r];
    const double* row = proportions.row(r);
    for (std::size_t c = 0; c < proportions.cols; ++c) {
      out << ' ' << (c + 1) << ':' << format_double(row[c]);
    }
    out << '\n';
  }
}

}  // namespace wntm::eval
