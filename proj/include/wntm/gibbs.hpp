#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "wntm/corpus.hpp"
#include "wntm/kernels.hpp"
#include "wntm/matrix.hpp"
#include "wntm/rng.hpp"

namespace wntm::gibbs {

struct SamplerConfig {
  std::int32_t num_topics = 100;
  double alpha = 0.5;  // symmetric Dirichlet prior on theta; 50/num_topics
  double beta = 0.01;  // symmetric Dirichlet prior on phi
  std::int32_t iterations = 2000;
  std::uint64_t seed = 0;
  /// nullptr selects kernels::active(). Element-wise kernels are bit-exact
  /// across implementations, so the choice never changes sampler output.
  const kernels::Kernels* kernels = nullptr;

  void validate() const;
  const wntm::kernels::Kernels& kernel_table() const;
};

/// Collapsed state: one topic per token plus the count statistics the full
/// conditional needs. doc_topic is D x K row-major, word_topic V x K
/// row-major (one contiguous row per word), topic_total length K.
struct SamplerState {
  std::int32_t num_docs = 0;
  std::int32_t vocab_size = 0;
  std::int32_t num_topics = 0;

  std::vector<std::int32_t> tokens;       // word id per position, document-major
  std::vector<std::int64_t> doc_offsets;  // length num_docs + 1
  std::vector<std::int32_t> assignments;  // topic per position

  std::vector<std::int32_t> doc_topic;
  std::vector<std::int32_t> word_topic;
  std::vector<std::int32_t> topic_total;

  Rng rng{0};

  std::int64_t doc_length(std::int32_t d) const {
    return doc_offsets[d + 1] - doc_offsets[d];
  }
  std::int64_t total_tokens() const { return doc_offsets.back(); }
};

/// Topic-word matrix phi (K x V) and topic-proportion matrix theta (D x K),
/// both row-stochastic with strictly positive smoothed entries.
struct TopicModel {
  Matrix phi;
  Matrix theta;
};

/// Uniform random topic per token from the seeded generator.
/// Throws when every document is empty or the vocabulary is empty.
SamplerState init(const std::vector<std::vector<WordId>>& docs,
                  std::int32_t vocab_size, const SamplerConfig& cfg);

/// One full pass: every token resampled once, document-major then
/// position-major, from the collapsed conditional
///   P(z=k | rest) proportional to
///     (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta)
/// with the current token excluded from all counts.
void sweep(SamplerState& state, const SamplerConfig& cfg);

/// init + `iterations` sweeps + single final-sample estimates.
/// `on_iteration` (optional) is called after each sweep with the 1-based
/// iteration number; report progress to stderr only.
std::pair<SamplerState, TopicModel> run(
    const std::vector<std::vector<WordId>>& docs, std::int32_t vocab_size,
    const SamplerConfig& cfg,
    const std::function<void(std::int32_t)>& on_iteration = {});

/// phi[k][w] = (n_kw + beta) / (n_k + V*beta)
Matrix estimate_phi(const SamplerState& state, const SamplerConfig& cfg);
/// theta[d][k] = (n_dk + alpha) / (len_d + K*alpha)
Matrix estimate_theta(const SamplerState& state, const SamplerConfig& cfg);

/// Rebuilds all counts from the assignments and compares exactly.
bool audit_counts(const SamplerState& state);

/// TSV with a `#K <k> V <v>` (phi) or `#D <d> K <k>` (theta) header line;
/// shortest round-trip formatting, reloads exactly.
void save_phi_tsv(const std::string& path, const Matrix& phi);
void save_theta_tsv(const std::string& path, const Matrix& theta);
Matrix load_phi_tsv(const std::string& path);
Matrix load_theta_tsv(const std::string& path);

/// `doc <TAB> pos <TAB> word_id <TAB> topic`, for audit tooling.
void save_assignments_tsv(const std::string& path, const SamplerState& state);

/// (doc, pos, word, topic) rows -> per-word topic assignment counts (V x K).
/// Used to rebuild assignment-fraction word representations from a dumped run.
std::vector<std::int64_t> load_assignment_word_topic_counts(
    const std::string& path, std::int32_t vocab_size, std::int32_t num_topics);

}  // namespace wntm::gibbs
