#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wntm/coocnet.hpp"
#include "wntm/corpus.hpp"
#include "wntm/gibbs.hpp"
#include "wntm/matrix.hpp"

namespace wntm {

enum class ReweightMode { Auto, On, Off };

struct WntmConfig {
  int window_size = 10;
  ReweightMode reweight = ReweightMode::Auto;
  gibbs::SamplerConfig sampler;
};

/// Word-level topic model: word_theta row w is the distribution over latent
/// word groups for w's adjacent word-list; group_phi maps each group to a
/// distribution over the vocabulary. Isolated words (empty pseudo-document)
/// carry the uniform row 1/K and are flagged.
struct WordTopicModel {
  Matrix word_theta;  // V x K
  Matrix group_phi;   // K x V
  std::vector<bool> isolated;

  // Provenance of the training run.
  int window_size = 0;
  bool reweighted = false;
  gibbs::SamplerConfig sampler_config;
  std::int64_t network_edges = 0;
  std::int64_t network_total_weight = 0;
};

struct WntmRun {
  WordTopicModel model;
  WordNetwork network;  // after re-weighting, when applied
  PseudoDocumentSet pseudo_docs;
  gibbs::SamplerState state;
};

/// corpus -> network -> (re-weighting when enabled) -> pseudo-documents ->
/// shared Gibbs sampler. Auto re-weighting switches on when the average
/// document length exceeds the window size.
WntmRun train_wntm(const Corpus& corpus, const WntmConfig& cfg,
                   const std::function<void(std::int32_t)>& on_iteration = {});

/// P(z|d) = sum_w P(z|w) * n_d(w)/len(d) over in-vocabulary tokens.
/// Throws for an empty token list ("uninferable document").
std::vector<double> infer_document_topics(std::span<const WordId> tokens,
                                          const WordTopicModel& model);

/// The LDA baseline: the identical sampler run on the real documents.
std::pair<gibbs::SamplerState, gibbs::TopicModel> train_lda(
    const Corpus& corpus, const gibbs::SamplerConfig& cfg,
    const std::function<void(std::int32_t)>& on_iteration = {});

/// Plain key=value lines, sorted by key; everything needed to reproduce a run.
using Manifest = std::map<std::string, std::string>;
void save_manifest(const std::string& path, const Manifest& m);
Manifest load_manifest(const std::string& path);

/// On-disk model layout shared by the trainers:
///   manifest.txt vocabulary.tsv corpus.txt phi.tsv theta.tsv
///   assignments.tsv [network.tsv]
/// For wntm models theta.tsv holds word_theta (one row per word).
struct ModelDir {
  std::string dir;
  Manifest manifest;
  Vocabulary vocabulary;
  std::vector<Document> corpus_docs;
  Matrix phi;    // K x V
  Matrix theta;  // D x K (wntm: V x K)

  std::string type() const;  // "wntm" | "lda"
  std::int32_t num_topics() const { return static_cast<std::int32_t>(phi.rows); }
  std::string assignments_path() const;

  /// Rebuilds the word-theta view for inference from theta.tsv + manifest.
  WordTopicModel as_word_topic_model() const;
};

void save_wntm_model(const std::string& dir, const WntmRun& run,
                     const Corpus& corpus, Manifest manifest);
void save_lda_model(const std::string& dir, const gibbs::SamplerState& state,
                    const gibbs::TopicModel& model, const Corpus& corpus,
                    Manifest manifest);
ModelDir load_model(const std::string& dir);

}  // namespace wntm
