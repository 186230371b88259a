#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wntm/corpus.hpp"

namespace wntm {

/// Undirected weighted word co-occurrence graph. Adjacency rows are sorted by
/// neighbor id and mirrored: weight(u,v) is stored under both endpoints.
/// No self-loops; every weight >= 1.
struct WordNetwork {
  std::int32_t num_words = 0;
  int window_size = 0;
  std::vector<std::vector<std::pair<WordId, std::int64_t>>> adjacency;

  /// Sum over canonical (u < v) edges.
  std::int64_t total_edge_weight() const;
  std::int64_t num_edges() const;
};

struct NodeStats {
  std::int64_t degree = 0;        // sum of adjacent edge weights
  double activity = 0.0;          // mean adjacent edge weight; 0 for isolated nodes
  std::int64_t neighbor_count = 0;
};

/// One bag of neighbor ids per network node, each neighbor repeated
/// edge-weight times, ascending by id. Isolated nodes keep an empty bag and
/// are flagged so samplers can skip them.
struct PseudoDocumentSet {
  std::vector<std::vector<WordId>> docs;
  std::vector<bool> isolated;
  std::int64_t num_pseudo_docs = 0;  // one per node, vocabulary size
  std::int64_t total_length = 0;
  double avg_length = 0.0;
  std::int64_t num_isolated = 0;
};

/// Slides a window over each document: position i pairs once with each of
/// positions i+1 .. i+window_size-1 (anchor-based counting, windows never
/// cross document boundaries). Same-word pairs are skipped.
WordNetwork build_network(const std::vector<std::vector<WordId>>& docs,
                          std::int32_t vocab_size, int window_size);
WordNetwork build_network(const Corpus& corpus, int window_size);

std::vector<NodeStats> node_stats(const WordNetwork& net);

/// Divides every edge weight by the activity of its lower-degree endpoint
/// (ties broken toward the smaller word id) and takes the ceiling. Degrees
/// and activities are computed once on the input and frozen for the whole
/// pass. The ceiling is evaluated in exact integer arithmetic:
/// ceil(w / (D/cnt)) = ceil(w*cnt / D).
WordNetwork reweight(const WordNetwork& net);

PseudoDocumentSet to_pseudo_documents(const WordNetwork& net);

/// TSV `u <TAB> v <TAB> weight` with u < v, sorted by (u, v); bit-exact
/// round-trip. `vocab_size` < 0 means infer from the largest id.
void save_network_tsv(const std::string& path, const WordNetwork& net);
WordNetwork load_network_tsv(const std::string& path, std::int32_t vocab_size = -1,
                             int window_size = 0);

}  // namespace wntm
