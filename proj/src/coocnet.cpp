#include "wntm/coocnet.hpp"

#include <algorithm>
#include <unordered_map>

#include "wntm/textio.hpp"

namespace wntm {

std::int64_t WordNetwork::total_edge_weight() const {
  std::int64_t total = 0;
  for (std::int32_t u = 0; u < num_words; ++u) {
    for (auto [v, w] : adjacency[u]) {
      if (v > u) total += w;
    }
  }
  return total;
}

std::int64_t WordNetwork::num_edges() const {
  std::int64_t n = 0;
  for (const auto& row : adjacency) n += static_cast<std::int64_t>(row.size());
  return n / 2;
}

namespace {

/// Canonical upper-triangle accumulation, mirrored and sorted at the end.
WordNetwork finalize(std::vector<std::unordered_map<WordId, std::int64_t>>& upper,
                     std::int32_t vocab_size, int window_size) {
  WordNetwork net;
  net.num_words = vocab_size;
  net.window_size = window_size;
  net.adjacency.resize(static_cast<std::size_t>(vocab_size));
  for (WordId u = 0; u < vocab_size; ++u) {
    for (auto [v, w] : upper[u]) {
      net.adjacency[u].emplace_back(v, w);
      net.adjacency[v].emplace_back(u, w);
    }
  }
  for (auto& row : net.adjacency) {
    std::sort(row.begin(), row.end());
  }
  return net;
}

}  // namespace

WordNetwork build_network(const std::vector<std::vector<WordId>>& docs,
                          std::int32_t vocab_size, int window_size) {
  if (window_size < 2) throw Error("window size must be at least 2");
  if (docs.empty()) throw Error("cannot build a network from an empty corpus");

  std::vector<std::unordered_map<WordId, std::int64_t>> upper(
      static_cast<std::size_t>(vocab_size));
  for (const auto& doc : docs) {
    const std::size_t len = doc.size();
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t limit = std::min(len, i + static_cast<std::size_t>(window_size));
      for (std::size_t j = i + 1; j < limit; ++j) {
        WordId a = doc[i];
        WordId b = doc[j];
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        ++upper[a][b];
      }
    }
  }
  return finalize(upper, vocab_size, window_size);
}

WordNetwork build_network(const Corpus& corpus, int window_size) {
  return build_network(token_views(corpus.documents), corpus.vocabulary.size(),
                       window_size);
}

std::vector<NodeStats> node_stats(const WordNetwork& net) {
  std::vector<NodeStats> stats(static_cast<std::size_t>(net.num_words));
  for (std::int32_t u = 0; u < net.num_words; ++u) {
    NodeStats& s = stats[u];
    s.neighbor_count = static_cast<std::int64_t>(net.adjacency[u].size());
    for (auto [v, w] : net.adjacency[u]) s.degree += w;
    s.activity = s.neighbor_count == 0
                     ? 0.0
                     : static_cast<double>(s.degree) / static_cast<double>(s.neighbor_count);
  }
  return stats;
}

WordNetwork reweight(const WordNetwork& net) {
  // Stats frozen before the edge loop.
  std::vector<std::int64_t> degree(static_cast<std::size_t>(net.num_words), 0);
  std::vector<std::int64_t> nbr_count(static_cast<std::size_t>(net.num_words), 0);
  for (std::int32_t u = 0; u < net.num_words; ++u) {
    nbr_count[u] = static_cast<std::int64_t>(net.adjacency[u].size());
    for (auto [v, w] : net.adjacency[u]) degree[u] += w;
  }

  std::vector<std::unordered_map<WordId, std::int64_t>> upper(
      static_cast<std::size_t>(net.num_words));
  for (std::int32_t u = 0; u < net.num_words; ++u) {
    for (auto [v, w] : net.adjacency[u]) {
      if (v < u) continue;
      // Lower-degree endpoint; ties go to the smaller id (u here, u < v).
      WordId pick = degree[u] <= degree[v] ? u : v;
      // ceil(w / activity) with activity = degree/nbr_count, exactly.
      std::int64_t num = w * nbr_count[pick];
      std::int64_t rew = (num + degree[pick] - 1) / degree[pick];
      upper[u][v] = rew;
    }
  }
  return finalize(upper, net.num_words, net.window_size);
}

PseudoDocumentSet to_pseudo_documents(const WordNetwork& net) {
  if (net.num_words == 0) throw Error("cannot derive pseudo-documents from an empty network");
  PseudoDocumentSet set;
  set.docs.resize(static_cast<std::size_t>(net.num_words));
  set.isolated.resize(static_cast<std::size_t>(net.num_words), false);
  set.num_pseudo_docs = net.num_words;
  for (std::int32_t u = 0; u < net.num_words; ++u) {
    auto& doc = set.docs[u];
    for (auto [v, w] : net.adjacency[u]) {  // already ascending by id
      doc.insert(doc.end(), static_cast<std::size_t>(w), v);
    }
    if (doc.empty()) {
      set.isolated[u] = true;
      ++set.num_isolated;
    }
    set.total_length += static_cast<std::int64_t>(doc.size());
  }
  set.avg_length = static_cast<double>(set.total_length) /
                   static_cast<double>(set.num_pseudo_docs);
  return set;
}

void save_network_tsv(const std::string& path, const WordNetwork& net) {
  std::string out;
  for (std::int32_t u = 0; u < net.num_words; ++u) {
    for (auto [v, w] : net.adjacency[u]) {
      if (v <= u) continue;
      out += std::to_string(u);
      out += '\t';
      out += std::to_string(v);
      out += '\t';
      out += std::to_string(w);
      out += '\n';
    }
  }
  write_file(path, out);
}

WordNetwork load_network_tsv(const std::string& path, std::int32_t vocab_size,
                             int window_size) {
  std::vector<std::tuple<WordId, WordId, std::int64_t>> edges;
  WordId max_id = -1;
  for (const std::string& line : read_lines(path)) {
    if (line.empty()) continue;
    auto fields = split_tokens(line, "\t");
    if (fields.size() != 3) throw Error("malformed network line: '" + line + "'");
    WordId u = static_cast<WordId>(parse_int(fields[0]));
    WordId v = static_cast<WordId>(parse_int(fields[1]));
    std::int64_t w = parse_int(fields[2]);
    if (u >= v) throw Error("network edges must satisfy u < v");
    if (w < 1) throw Error("network weights must be >= 1");
    edges.emplace_back(u, v, w);
    max_id = std::max({max_id, u, v});
  }
  if (vocab_size < 0) vocab_size = max_id + 1;
  if (max_id >= vocab_size) throw Error("network node id exceeds vocabulary size");

  std::vector<std::unordered_map<WordId, std::int64_t>> upper(
      static_cast<std::size_t>(vocab_size));
  for (auto [u, v, w] : edges) {
    if (!upper[u].emplace(v, w).second) throw Error("duplicate network edge");
  }
  return finalize(upper, vocab_size, window_size);
}

}  // namespace wntm
