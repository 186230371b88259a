#include "wntm/gibbs.hpp"

#include <algorithm>
#include <string>

#include "wntm/error.hpp"
#include "wntm/textio.hpp"

namespace wntm::gibbs {

void SamplerConfig::validate() const {
  if (num_topics < 1) throw Error("num_topics must be >= 1");
  if (!(alpha > 0.0)) throw Error("alpha must be > 0");
  if (!(beta > 0.0)) throw Error("beta must be > 0");
  if (iterations < 1) throw Error("iterations must be >= 1");
}

const wntm::kernels::Kernels& SamplerConfig::kernel_table() const {
  return kernels ? *kernels : wntm::kernels::active();
}

SamplerState init(const std::vector<std::vector<WordId>>& docs,
                  std::int32_t vocab_size, const SamplerConfig& cfg) {
  cfg.validate();
  if (vocab_size < 1) throw Error("vocabulary must be non-empty");

  SamplerState st;
  st.num_docs = static_cast<std::int32_t>(docs.size());
  st.vocab_size = vocab_size;
  st.num_topics = cfg.num_topics;
  st.rng = Rng(cfg.seed);

  st.doc_offsets.reserve(docs.size() + 1);
  st.doc_offsets.push_back(0);
  for (const auto& doc : docs) {
    for (WordId w : doc) {
      if (w < 0 || w >= vocab_size) throw Error("token id out of vocabulary range");
      st.tokens.push_back(w);
    }
    st.doc_offsets.push_back(static_cast<std::int64_t>(st.tokens.size()));
  }
  if (st.tokens.empty()) throw Error("all documents are empty");

  const std::int32_t K = st.num_topics;
  st.assignments.resize(st.tokens.size());
  st.doc_topic.assign(static_cast<std::size_t>(st.num_docs) * K, 0);
  st.word_topic.assign(static_cast<std::size_t>(st.vocab_size) * K, 0);
  st.topic_total.assign(static_cast<std::size_t>(K), 0);

  for (std::int32_t d = 0; d < st.num_docs; ++d) {
    for (std::int64_t pos = st.doc_offsets[d]; pos < st.doc_offsets[d + 1]; ++pos) {
      const std::int32_t k = static_cast<std::int32_t>(
          st.rng.below(static_cast<std::uint32_t>(K)));
      st.assignments[pos] = k;
      ++st.doc_topic[static_cast<std::size_t>(d) * K + k];
      ++st.word_topic[static_cast<std::size_t>(st.tokens[pos]) * K + k];
      ++st.topic_total[k];
    }
  }
  return st;
}

void sweep(SamplerState& state, const SamplerConfig& cfg) {
  const auto& kern = cfg.kernel_table();
  const std::int32_t K = state.num_topics;
  const double vbeta = static_cast<double>(state.vocab_size) * cfg.beta;
  std::vector<double> weights(static_cast<std::size_t>(K));

  for (std::int32_t d = 0; d < state.num_docs; ++d) {
    std::int32_t* dt = state.doc_topic.data() + static_cast<std::size_t>(d) * K;
    for (std::int64_t pos = state.doc_offsets[d]; pos < state.doc_offsets[d + 1]; ++pos) {
      const std::int32_t w = state.tokens[pos];
      std::int32_t* wt = state.word_topic.data() + static_cast<std::size_t>(w) * K;
      const std::int32_t old = state.assignments[pos];
      --dt[old];
      --wt[old];
      --state.topic_total[old];

      kern.topic_weights(dt, wt, state.topic_total.data(), cfg.alpha, cfg.beta,
                         vbeta, weights.data(), static_cast<std::size_t>(K));

      // Sequential prefix sum and draw; kept scalar in every dispatch path so
      // the sampled index is identical regardless of kernel table.
      double total = 0.0;
      for (std::int32_t k = 0; k < K; ++k) {
        total += weights[k];
        weights[k] = total;
      }
      const double u = state.rng.uniform() * total;
      std::int32_t next = 0;
      while (next < K - 1 && weights[next] <= u) ++next;

      state.assignments[pos] = next;
      ++dt[next];
      ++wt[next];
      ++state.topic_total[next];
    }
  }
}

std::pair<SamplerState, TopicModel> run(
    const std::vector<std::vector<WordId>>& docs, std::int32_t vocab_size,
    const SamplerConfig& cfg, const std::function<void(std::int32_t)>& on_iteration) {
  SamplerState st = init(docs, vocab_size, cfg);
  for (std::int32_t it = 1; it <= cfg.iterations; ++it) {
    sweep(st, cfg);
    if (on_iteration) on_iteration(it);
  }
  TopicModel model{estimate_phi(st, cfg), estimate_theta(st, cfg)};
  return {std::move(st), std::move(model)};
}

Matrix estimate_phi(const SamplerState& state, const SamplerConfig& cfg) {
  const auto& kern = cfg.kernel_table();
  const std::int32_t K = state.num_topics;
  const std::int32_t V = state.vocab_size;
  const double vbeta = static_cast<double>(V) * cfg.beta;
  Matrix phi(static_cast<std::size_t>(K), static_cast<std::size_t>(V));
  // word_topic is word-major; gather each topic's column into a contiguous
  // row so the row kernel applies.
  std::vector<std::int32_t> counts(static_cast<std::size_t>(V));
  for (std::int32_t k = 0; k < K; ++k) {
    for (std::int32_t w = 0; w < V; ++w) {
      counts[w] = state.word_topic[static_cast<std::size_t>(w) * K + k];
    }
    const double denom = static_cast<double>(state.topic_total[k]) + vbeta;
    kern.smoothed_row(counts.data(), cfg.beta, denom, phi.row(k),
                      static_cast<std::size_t>(V));
  }
  return phi;
}

Matrix estimate_theta(const SamplerState& state, const SamplerConfig& cfg) {
  const auto& kern = cfg.kernel_table();
  const std::int32_t K = state.num_topics;
  Matrix theta(static_cast<std::size_t>(state.num_docs), static_cast<std::size_t>(K));
  const double kalpha = static_cast<double>(K) * cfg.alpha;
  for (std::int32_t d = 0; d < state.num_docs; ++d) {
    const double denom = static_cast<double>(state.doc_length(d)) + kalpha;
    kern.smoothed_row(state.doc_topic.data() + static_cast<std::size_t>(d) * K,
                      cfg.alpha, denom, theta.row(d), static_cast<std::size_t>(K));
  }
  return theta;
}

bool audit_counts(const SamplerState& state) {
  const std::int32_t K = state.num_topics;
  std::vector<std::int32_t> dt(state.doc_topic.size(), 0);
  std::vector<std::int32_t> wt(state.word_topic.size(), 0);
  std::vector<std::int32_t> tt(state.topic_total.size(), 0);
  for (std::int32_t d = 0; d < state.num_docs; ++d) {
    for (std::int64_t pos = state.doc_offsets[d]; pos < state.doc_offsets[d + 1]; ++pos) {
      const std::int32_t k = state.assignments[pos];
      if (k < 0 || k >= K) return false;
      ++dt[static_cast<std::size_t>(d) * K + k];
      ++wt[static_cast<std::size_t>(state.tokens[pos]) * K + k];
      ++tt[k];
    }
  }
  return dt == state.doc_topic && wt == state.word_topic && tt == state.topic_total;
}

namespace {

void save_matrix_tsv(const std::string& path, const Matrix& m, const std::string& header) {
  std::string out = header;
  out += '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.row(r);
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c > 0) out += '\t';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  write_file(path, out);
}

Matrix load_matrix_tsv(const std::string& path, const std::string& tag_rows,
                       const std::string& tag_cols) {
  auto lines = read_lines(path);
  if (lines.empty()) throw Error("empty matrix file: " + path);
  auto head = split_tokens(lines[0]);
  if (head.size() != 4 || head[0] != "#" + tag_rows || head[2] != tag_cols) {
    throw Error("bad matrix header in " + path);
  }
  const std::size_t rows = static_cast<std::size_t>(parse_int(head[1]));
  const std::size_t cols = static_cast<std::size_t>(parse_int(head[3]));
  Matrix m(rows, cols);
  std::size_t r = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    if (r >= rows) throw Error("too many matrix rows in " + path);
    auto fields = split_tokens(lines[i], "\t");
    if (fields.size() != cols) throw Error("bad matrix row width in " + path);
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = parse_double(fields[c]);
    ++r;
  }
  if (r != rows) throw Error("missing matrix rows in " + path);
  return m;
}

}  // namespace

void save_phi_tsv(const std::string& path, const Matrix& phi) {
  save_matrix_tsv(path, phi,
                  "#K " + std::to_string(phi.rows) + " V " + std::to_string(phi.cols));
}

void save_theta_tsv(const std::string& path, const Matrix& theta) {
  save_matrix_tsv(path, theta,
                  "#D " + std::to_string(theta.rows) + " K " + std::to_string(theta.cols));
}

Matrix load_phi_tsv(const std::string& path) { return load_matrix_tsv(path, "K", "V"); }
Matrix load_theta_tsv(const std::string& path) { return load_matrix_tsv(path, "D", "K"); }

void save_assignments_tsv(const std::string& path, const SamplerState& state) {
  std::string out;
  for (std::int32_t d = 0; d < state.num_docs; ++d) {
    for (std::int64_t pos = state.doc_offsets[d]; pos < state.doc_offsets[d + 1]; ++pos) {
      out += std::to_string(d);
      out += '\t';
      out += std::to_string(pos - state.doc_offsets[d]);
      out += '\t';
      out += std::to_string(state.tokens[pos]);
      out += '\t';
      out += std::to_string(state.assignments[pos]);
      out += '\n';
    }
  }
  write_file(path, out);
}

std::vector<std::int64_t> load_assignment_word_topic_counts(const std::string& path,
                                                            std::int32_t vocab_size,
                                                            std::int32_t num_topics) {
  std::vector<std::int64_t> counts(
      static_cast<std::size_t>(vocab_size) * static_cast<std::size_t>(num_topics), 0);
  for (const std::string& line : read_lines(path)) {
    if (line.empty()) continue;
    auto fields = split_tokens(line, "\t");
    if (fields.size() != 4) throw Error("malformed assignments line: '" + line + "'");
    const std::int64_t w = parse_int(fields[2]);
    const std::int64_t k = parse_int(fields[3]);
    if (w < 0 || w >= vocab_size || k < 0 || k >= num_topics) {
      throw Error("assignment out of range: '" + line + "'");
    }
    ++counts[static_cast<std::size_t>(w) * num_topics + static_cast<std::size_t>(k)];
  }
  return counts;
}

}  // namespace wntm::gibbs
