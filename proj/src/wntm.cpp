#include "wntm/wntm.hpp"

#include <algorithm>
#include <filesystem>

#include "wntm/error.hpp"
#include "wntm/textio.hpp"

namespace wntm {

WntmRun train_wntm(const Corpus& corpus, const WntmConfig& cfg,
                   const std::function<void(std::int32_t)>& on_iteration) {
  cfg.sampler.validate();
  const CorpusStats stats = corpus_stats(corpus);

  WntmRun run;
  run.network = build_network(corpus, cfg.window_size);
  if (run.network.num_edges() == 0) {
    throw Error("word network has no edges; nothing to sample");
  }

  bool apply_reweight = cfg.reweight == ReweightMode::On;
  if (cfg.reweight == ReweightMode::Auto) {
    apply_reweight = stats.avg_doc_length > static_cast<double>(cfg.window_size);
  }
  if (apply_reweight) run.network = reweight(run.network);

  run.pseudo_docs = to_pseudo_documents(run.network);
  auto [state, topic_model] =
      gibbs::run(run.pseudo_docs.docs, corpus.vocabulary.size(), cfg.sampler,
                 on_iteration);
  run.state = std::move(state);

  run.model.word_theta = std::move(topic_model.theta);
  run.model.group_phi = std::move(topic_model.phi);
  run.model.isolated = run.pseudo_docs.isolated;
  run.model.window_size = cfg.window_size;
  run.model.reweighted = apply_reweight;
  run.model.sampler_config = cfg.sampler;
  run.model.network_edges = run.network.num_edges();
  run.model.network_total_weight = run.network.total_edge_weight();
  return run;
}

std::vector<double> infer_document_topics(std::span<const WordId> tokens,
                                          const WordTopicModel& model) {
  const std::size_t K = model.word_theta.cols;
  const std::size_t V = model.word_theta.rows;
  if (tokens.empty()) throw Error("uninferable document: no in-vocabulary tokens");

  // Count occurrences per distinct word, ascending by id.
  std::vector<WordId> sorted(tokens.begin(), tokens.end());
  std::sort(sorted.begin(), sorted.end());
  const double len = static_cast<double>(sorted.size());

  const auto& kern = kernels::active();
  std::vector<double> out(K, 0.0);
  std::size_t i = 0;
  while (i < sorted.size()) {
    const WordId w = sorted[i];
    if (w < 0 || static_cast<std::size_t>(w) >= V) {
      throw Error("token id out of vocabulary range");
    }
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == w) ++j;
    const double weight = static_cast<double>(j - i) / len;
    kern.axpy(weight, model.word_theta.row(static_cast<std::size_t>(w)), out.data(), K);
    i = j;
  }
  return out;
}

std::pair<gibbs::SamplerState, gibbs::TopicModel> train_lda(
    const Corpus& corpus, const gibbs::SamplerConfig& cfg,
    const std::function<void(std::int32_t)>& on_iteration) {
  return gibbs::run(token_views(corpus.documents), corpus.vocabulary.size(), cfg,
                    on_iteration);
}

void save_manifest(const std::string& path, const Manifest& m) {
  std::string out;
  for (const auto& [k, v] : m) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  write_file(path, out);
}

Manifest load_manifest(const std::string& path) {
  Manifest m;
  for (const std::string& line : read_lines(path)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("malformed manifest line: '" + line + "'");
    m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

void save_common(const std::string& dir, const Corpus& corpus, const Matrix& phi,
                 const Matrix& theta, const gibbs::SamplerState& state,
                 const Manifest& manifest) {
  fs::create_directories(dir);
  save_manifest(join(dir, "manifest.txt"), manifest);
  save_vocabulary_tsv(join(dir, "vocabulary.tsv"), corpus.vocabulary);
  save_encoded_corpus(join(dir, "corpus.txt"), corpus.documents);
  gibbs::save_phi_tsv(join(dir, "phi.tsv"), phi);
  gibbs::save_theta_tsv(join(dir, "theta.tsv"), theta);
  gibbs::save_assignments_tsv(join(dir, "assignments.tsv"), state);
}

}  // namespace

void save_wntm_model(const std::string& dir, const WntmRun& run,
                     const Corpus& corpus, Manifest manifest) {
  manifest["model"] = "wntm";
  save_common(dir, corpus, run.model.group_phi, run.model.word_theta, run.state,
              manifest);
  save_network_tsv(join(dir, "network.tsv"), run.network);
}

void save_lda_model(const std::string& dir, const gibbs::SamplerState& state,
                    const gibbs::TopicModel& model, const Corpus& corpus,
                    Manifest manifest) {
  manifest["model"] = "lda";
  save_common(dir, corpus, model.phi, model.theta, state, manifest);
}

ModelDir load_model(const std::string& dir) {
  ModelDir m;
  m.dir = dir;
  m.manifest = load_manifest(join(dir, "manifest.txt"));
  m.vocabulary = load_vocabulary_tsv(join(dir, "vocabulary.tsv"));
  m.corpus_docs = load_encoded_corpus(join(dir, "corpus.txt"));
  m.phi = gibbs::load_phi_tsv(join(dir, "phi.tsv"));
  m.theta = gibbs::load_theta_tsv(join(dir, "theta.tsv"));
  if (m.type() != "wntm" && m.type() != "lda") {
    throw Error("unknown model type in manifest: '" + m.type() + "'");
  }
  return m;
}

std::string ModelDir::type() const {
  auto it = manifest.find("model");
  return it == manifest.end() ? "" : it->second;
}

std::string ModelDir::assignments_path() const { return join(dir, "assignments.tsv"); }

WordTopicModel ModelDir::as_word_topic_model() const {
  if (type() != "wntm") throw Error("model directory does not hold a wntm model");
  WordTopicModel model;
  model.word_theta = theta;
  model.group_phi = phi;
  model.isolated.assign(theta.rows, false);
  model.window_size = 0;
  if (auto it = manifest.find("window_size"); it != manifest.end()) {
    model.window_size = static_cast<int>(parse_int(it->second));
  }
  if (auto it = manifest.find("reweight"); it != manifest.end()) {
    model.reweighted = it->second == "on";
  }
  return model;
}

}  // namespace wntm
