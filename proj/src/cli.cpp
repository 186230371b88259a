#include "wntm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "wntm/coocnet.hpp"
#include "wntm/corpus.hpp"
#include "wntm/error.hpp"
#include "wntm/eval.hpp"
#include "wntm/gibbs.hpp"
#include "wntm/textio.hpp"
#include "wntm/wntm.hpp"

namespace wntm::cli {

namespace {

namespace fs = std::filesystem;

struct IngestOptions {
  std::string input;
  std::string output_dir;
  std::string stopwords;
  std::int64_t min_frequency = 20;
  std::int64_t min_doc_length = 10;
};

struct TrainOptions {
  std::string model = "wntm";
  std::string input;
  std::string output_dir;
  std::string stopwords;
  std::int64_t min_frequency = 20;
  std::int64_t min_doc_length = 10;
  int window = 10;
  std::string reweight = "auto";
  std::int32_t num_topics = 100;
  double alpha = -1.0;  // < 0 resolves to 50/k
  double beta = 0.01;
  std::int32_t iterations = 2000;
  std::uint64_t seed = 0;
  std::int32_t chains = 1;
};

Corpus ingest_corpus(const std::string& input, const std::string& stopwords_path,
                     std::int64_t min_frequency, std::int64_t min_doc_length) {
  auto raw = load_raw_documents(input);
  std::unordered_set<std::string> stopwords;
  if (!stopwords_path.empty()) stopwords = load_stopwords(stopwords_path);
  return build_vocabulary(raw, FilterConfig{min_frequency, min_doc_length}, stopwords);
}

ReweightMode parse_reweight(const std::string& s) {
  if (s == "auto") return ReweightMode::Auto;
  if (s == "on") return ReweightMode::On;
  if (s == "off") return ReweightMode::Off;
  throw Error("unknown --reweight value: '" + s + "' (expected auto|on|off)");
}

void progress_to_stderr(std::int32_t iter, std::int32_t total) {
  if (iter % 100 == 0 || iter == total) {
    std::cerr << "iteration " << iter << "/" << total << "\n";
  }
}

Manifest base_manifest(const TrainOptions& opt, double alpha) {
  Manifest m;
  m["command"] = "train";
  m["input"] = opt.input;
  m["input_digest"] = file_digest(opt.input);
  m["stopwords"] = opt.stopwords;
  m["stopwords_digest"] = opt.stopwords.empty() ? "" : file_digest(opt.stopwords);
  m["min_frequency"] = std::to_string(opt.min_frequency);
  m["min_doc_length"] = std::to_string(opt.min_doc_length);
  m["num_topics"] = std::to_string(opt.num_topics);
  m["alpha"] = format_double(alpha);
  m["beta"] = format_double(opt.beta);
  m["iterations"] = std::to_string(opt.iterations);
  return m;
}

void run_train_chain(const TrainOptions& opt, const Corpus& corpus,
                     const std::string& out_dir, std::uint64_t seed,
                     std::int32_t chain_index,
                     const std::function<void(std::int32_t)>& progress) {
  const double alpha =
      opt.alpha < 0.0 ? 50.0 / static_cast<double>(opt.num_topics) : opt.alpha;
  gibbs::SamplerConfig sampler;
  sampler.num_topics = opt.num_topics;
  sampler.alpha = alpha;
  sampler.beta = opt.beta;
  sampler.iterations = opt.iterations;
  sampler.seed = seed;

  Manifest manifest = base_manifest(opt, alpha);
  manifest["seed"] = std::to_string(seed);
  manifest["chains"] = std::to_string(opt.chains);
  manifest["chain_index"] = std::to_string(chain_index);
  const CorpusStats stats = corpus_stats(corpus);
  manifest["num_documents"] = std::to_string(stats.num_documents);
  manifest["total_tokens"] = std::to_string(stats.total_tokens);
  manifest["vocab_size"] = std::to_string(stats.vocab_size);

  if (opt.model == "wntm") {
    WntmConfig cfg;
    cfg.window_size = opt.window;
    cfg.reweight = parse_reweight(opt.reweight);
    cfg.sampler = sampler;
    WntmRun run = train_wntm(corpus, cfg, progress);
    manifest["window_size"] = std::to_string(opt.window);
    manifest["reweight"] = run.model.reweighted ? "on" : "off";
    manifest["network_edges"] = std::to_string(run.model.network_edges);
    manifest["network_total_weight"] = std::to_string(run.model.network_total_weight);
    manifest["pseudo_docs"] = std::to_string(run.pseudo_docs.num_pseudo_docs);
    manifest["pseudo_total_length"] = std::to_string(run.pseudo_docs.total_length);
    save_wntm_model(out_dir, run, corpus, std::move(manifest));
  } else if (opt.model == "lda") {
    auto [state, model] = train_lda(corpus, sampler, progress);
    save_lda_model(out_dir, state, model, corpus, std::move(manifest));
  } else {
    throw Error("unknown --model: '" + opt.model + "' (expected wntm|lda)");
  }
}

int cmd_train(const TrainOptions& opt) {
  // Validate the whole configuration before any work begins.
  if (opt.chains < 1) throw Error("--chains must be >= 1");
  if (opt.model != "wntm" && opt.model != "lda") {
    throw Error("unknown --model: '" + opt.model + "' (expected wntm|lda)");
  }
  parse_reweight(opt.reweight);
  if (opt.min_frequency < 1) throw Error("min_frequency must be >= 1");
  if (opt.min_doc_length < 0) throw Error("min_doc_length must be >= 0");
  {
    gibbs::SamplerConfig probe;
    probe.num_topics = opt.num_topics;
    probe.alpha =
        opt.alpha < 0.0 ? 50.0 / std::max<std::int32_t>(opt.num_topics, 1) : opt.alpha;
    probe.beta = opt.beta;
    probe.iterations = opt.iterations;
    probe.validate();
  }
  if (opt.model == "wntm" && opt.window < 2) {
    throw Error("window size must be at least 2");
  }

  Corpus corpus = ingest_corpus(opt.input, opt.stopwords, opt.min_frequency,
                                opt.min_doc_length);
  if (opt.chains == 1) {
    auto progress = [&](std::int32_t it) { progress_to_stderr(it, opt.iterations); };
    run_train_chain(opt, corpus, opt.output_dir, opt.seed, 0, progress);
    std::cout << opt.output_dir << "\n";
    return 0;
  }

  // Independent seeded chains over the shared immutable corpus, one thread
  // each, reported separately and in order.
  std::vector<std::string> dirs(static_cast<std::size_t>(opt.chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(opt.chains));
  std::mutex stderr_mutex;
  std::vector<std::thread> workers;
  for (std::int32_t c = 0; c < opt.chains; ++c) {
    dirs[c] = (fs::path(opt.output_dir) / ("chain-" + std::to_string(c))).string();
    workers.emplace_back([&, c] {
      try {
        auto progress = [&, c](std::int32_t it) {
          if (it % 100 == 0 || it == opt.iterations) {
            std::lock_guard<std::mutex> lock(stderr_mutex);
            std::cerr << "chain " << c << " iteration " << it << "/" << opt.iterations
                      << "\n";
          }
        };
        run_train_chain(opt, corpus, dirs[c], opt.seed + static_cast<std::uint64_t>(c),
                        c, progress);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (std::int32_t c = 0; c < opt.chains; ++c) {
    if (errors[c]) std::rethrow_exception(errors[c]);
    std::cout << dirs[c] << "\n";
  }
  return 0;
}

int cmd_ingest(const IngestOptions& opt) {
  Corpus corpus = ingest_corpus(opt.input, opt.stopwords, opt.min_frequency,
                                opt.min_doc_length);
  fs::create_directories(opt.output_dir);
  Manifest m;
  m["command"] = "ingest";
  m["input"] = opt.input;
  m["input_digest"] = file_digest(opt.input);
  m["stopwords"] = opt.stopwords;
  m["stopwords_digest"] = opt.stopwords.empty() ? "" : file_digest(opt.stopwords);
  m["min_frequency"] = std::to_string(opt.min_frequency);
  m["min_doc_length"] = std::to_string(opt.min_doc_length);
  const CorpusStats stats = corpus_stats(corpus);
  m["num_documents"] = std::to_string(stats.num_documents);
  m["total_tokens"] = std::to_string(stats.total_tokens);
  m["vocab_size"] = std::to_string(stats.vocab_size);
  save_manifest((fs::path(opt.output_dir) / "manifest.txt").string(), m);
  save_vocabulary_tsv((fs::path(opt.output_dir) / "vocabulary.tsv").string(),
                      corpus.vocabulary);
  save_encoded_corpus((fs::path(opt.output_dir) / "corpus.txt").string(),
                      corpus.documents);
  std::cout << "documents\t" << stats.num_documents << "\n"
            << "tokens\t" << stats.total_tokens << "\n"
            << "vocabulary\t" << stats.vocab_size << "\n"
            << "avg_doc_length\t" << format_double(stats.avg_doc_length) << "\n";
  return 0;
}

int cmd_build_net(const std::string& corpus_dir, int window, const std::string& out) {
  Vocabulary vocab =
      load_vocabulary_tsv((fs::path(corpus_dir) / "vocabulary.tsv").string());
  auto docs = load_encoded_corpus((fs::path(corpus_dir) / "corpus.txt").string());
  WordNetwork net = build_network(token_views(docs), vocab.size(), window);
  save_network_tsv(out, net);
  std::cout << "nodes\t" << net.num_words << "\n"
            << "edges\t" << net.num_edges() << "\n"
            << "total_weight\t" << net.total_edge_weight() << "\n";
  return 0;
}

int cmd_reweight(const std::string& network_path, const std::string& out) {
  WordNetwork net = load_network_tsv(network_path);
  WordNetwork rew = reweight(net);
  save_network_tsv(out, rew);
  std::cout << "edges\t" << rew.num_edges() << "\n"
            << "total_weight_before\t" << net.total_edge_weight() << "\n"
            << "total_weight_after\t" << rew.total_edge_weight() << "\n";
  return 0;
}

int cmd_infer(const std::string& model_dir, const std::string& input,
              const std::string& out_path) {
  ModelDir model = load_model(model_dir);
  WordTopicModel wtm = model.as_word_topic_model();
  auto raw = load_raw_documents(input);

  std::ostringstream out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto ids = encode_tokens(model.vocabulary, raw[i]);
    if (ids.empty()) {
      throw Error("uninferable document at line " + std::to_string(i + 1) +
                  ": no in-vocabulary tokens");
    }
    auto dist = infer_document_topics(ids, wtm);
    for (std::size_t k = 0; k < dist.size(); ++k) {
      if (k > 0) out << '\t';
      out << format_double(dist[k]);
    }
    out << '\n';
  }
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    write_file(out_path, out.str());
  }
  return 0;
}

eval::DocFrequencyIndex reference_index(const ModelDir& model, const std::string& ref) {
  if (ref.empty()) {
    return eval::DocFrequencyIndex::build(token_views(model.corpus_docs),
                                          model.vocabulary.size());
  }
  auto raw = load_raw_documents(ref);
  std::vector<std::vector<WordId>> docs;
  docs.reserve(raw.size());
  for (const auto& d : raw) docs.push_back(encode_tokens(model.vocabulary, d));
  return eval::DocFrequencyIndex::build(docs, model.vocabulary.size());
}

int cmd_coherence(const std::string& model_dir, const std::string& ref, int top_t,
                  double epsilon, const std::string& out_path) {
  ModelDir model = load_model(model_dir);
  eval::CoherenceConfig cfg{top_t, epsilon};
  auto index = reference_index(model, ref);
  auto scores = eval::per_topic_coherence(model.phi, index, cfg);

  std::string out;
  double total = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    out += std::to_string(k);
    out += '\t';
    out += format_double(scores[k]);
    out += '\n';
    total += scores[k];
  }
  out += "mean\t";
  out += format_double(total / static_cast<double>(scores.size()));
  out += '\n';
  if (out_path.empty()) {
    std::cout << out;
  } else {
    write_file(out_path, out);
  }
  return 0;
}

int cmd_wordsim(const std::string& model_dir, const std::string& ratings_path,
                const std::string& measure_name) {
  ModelDir model = load_model(model_dir);
  auto ratings = eval::load_ratings_tsv(ratings_path);
  auto measure = eval::parse_measure(measure_name);

  std::function<std::optional<std::vector<double>>(const std::string&)> represent;
  if (model.type() == "wntm") {
    WordTopicModel wtm = model.as_word_topic_model();
    represent = [&model, wtm = std::move(wtm)](const std::string& word)
        -> std::optional<std::vector<double>> {
      WordId id = model.vocabulary.id_of(word);
      if (id < 0) return std::nullopt;
      return eval::wntm_word_representation(id, wtm);
    };
  } else {
    auto counts = gibbs::load_assignment_word_topic_counts(
        model.assignments_path(), model.vocabulary.size(), model.num_topics());
    represent = [&model, counts = std::move(counts)](const std::string& word)
        -> std::optional<std::vector<double>> {
      WordId id = model.vocabulary.id_of(word);
      if (id < 0) return std::nullopt;
      return eval::lda_word_representation(id, counts, model.num_topics());
    };
  }

  auto result = eval::wordsim_correlation(ratings, represent, measure);
  std::cerr << "pairs used " << result.used_pairs << ", dropped " << result.dropped_pairs
            << " (out-of-vocabulary)\n";
  std::cout << format_double(result.correlation) << "\n";
  return 0;
}

int cmd_export_features(const std::string& model_dir, const std::string& input,
                        const std::string& labels_path, const std::string& out_path) {
  ModelDir model = load_model(model_dir);

  std::vector<std::string> labels;
  for (const std::string& line : read_lines(labels_path)) {
    auto toks = split_tokens(line);
    if (!toks.empty()) labels.emplace_back(toks.front());
  }

  Matrix proportions;
  if (model.type() == "wntm") {
    if (input.empty()) throw Error("--input is required for wntm feature export");
    WordTopicModel wtm = model.as_word_topic_model();
    auto raw = load_raw_documents(input);
    proportions = Matrix(raw.size(), static_cast<std::size_t>(model.num_topics()));
    for (std::size_t i = 0; i < raw.size(); ++i) {
      auto ids = encode_tokens(model.vocabulary, raw[i]);
      if (ids.empty()) {
        throw Error("uninferable document at line " + std::to_string(i + 1) +
                    ": no in-vocabulary tokens");
      }
      auto dist = infer_document_topics(ids, wtm);
      std::copy(dist.begin(), dist.end(), proportions.row(i));
    }
  } else {
    // The LDA baseline has proportions only for its training documents.
    if (!input.empty()) {
      std::cerr << "note: --input is ignored for lda models; exporting training theta\n";
    }
    proportions = model.theta;
  }

  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + out_path);
  eval::export_features(out, proportions, labels);
  return 0;
}

}  // namespace

int dispatch(std::vector<std::string> args) {
  CLI::App app{"word network topic modeling toolkit"};
  app.name("wntm");
  app.require_subcommand(1);

  // ingest
  IngestOptions ing;
  auto* ingest = app.add_subcommand("ingest", "filter a corpus and build its vocabulary");
  ingest->add_option("--input", ing.input, "raw corpus, one document per line")->required();
  ingest->add_option("--out", ing.output_dir, "output directory")->required();
  ingest->add_option("--stopwords", ing.stopwords, "stopword file, one word per line");
  ingest->add_option("--min-freq", ing.min_frequency, "minimum word frequency");
  ingest->add_option("--min-doc-len", ing.min_doc_length, "minimum document length after filtering");

  // build-net
  std::string bn_corpus, bn_out;
  int bn_window = 10;
  auto* build_net = app.add_subcommand("build-net", "build the word co-occurrence network");
  build_net->add_option("--corpus", bn_corpus, "ingest output directory")->required();
  build_net->add_option("--window", bn_window, "sliding window size");
  build_net->add_option("--out", bn_out, "network TSV path")->required();

  // reweight
  std::string rw_net, rw_out;
  auto* rew = app.add_subcommand("reweight", "re-weight a word network");
  rew->add_option("--network", rw_net, "network TSV path")->required();
  rew->add_option("--out", rw_out, "output network TSV path")->required();

  // train
  TrainOptions tr;
  auto* train = app.add_subcommand("train", "train a wntm or lda model");
  train->add_option("--model", tr.model, "wntm|lda");
  train->add_option("--input", tr.input, "raw corpus, one document per line")->required();
  train->add_option("--out", tr.output_dir, "model output directory")->required();
  train->add_option("--stopwords", tr.stopwords, "stopword file");
  train->add_option("--min-freq", tr.min_frequency, "minimum word frequency");
  train->add_option("--min-doc-len", tr.min_doc_length, "minimum document length");
  train->add_option("--window", tr.window, "sliding window size (wntm)");
  train->add_option("--reweight", tr.reweight, "auto|on|off (wntm)");
  train->add_option("--k", tr.num_topics, "number of topics");
  train->add_option("--alpha", tr.alpha, "document-topic prior (default 50/k)");
  train->add_option("--beta", tr.beta, "topic-word prior");
  train->add_option("--iters", tr.iterations, "Gibbs sweeps");
  train->add_option("--seed", tr.seed, "random seed");
  train->add_option("--chains", tr.chains, "independent seeded chains");

  // infer
  std::string inf_model, inf_input, inf_out;
  auto* infer = app.add_subcommand("infer", "infer document topic proportions (wntm)");
  infer->add_option("--model", inf_model, "model directory")->required();
  infer->add_option("--input", inf_input, "documents to infer")->required();
  infer->add_option("--out", inf_out, "output TSV (default stdout)");

  // coherence
  std::string coh_model, coh_ref, coh_out;
  int coh_top = 5;
  double coh_eps = 1e-12;
  auto* coh = app.add_subcommand("coherence", "per-topic coherence report");
  coh->add_option("--model", coh_model, "model directory")->required();
  coh->add_option("--ref", coh_ref, "reference corpus (default: training corpus)");
  coh->add_option("--top", coh_top, "top words per topic");
  coh->add_option("--epsilon", coh_eps, "numerator smoothing");
  coh->add_option("--out", coh_out, "output TSV (default stdout)");

  // wordsim
  std::string ws_model, ws_ratings, ws_measure = "cosine";
  auto* ws = app.add_subcommand("wordsim", "rank correlation against human word-pair ratings");
  ws->add_option("--model", ws_model, "model directory")->required();
  ws->add_option("--ratings", ws_ratings, "TSV word1 word2 rating")->required();
  ws->add_option("--measure", ws_measure, "cosine|js");

  // export-features
  std::string ef_model, ef_input, ef_labels, ef_out;
  auto* ef = app.add_subcommand("export-features", "write sparse classifier features");
  ef->add_option("--model", ef_model, "model directory")->required();
  ef->add_option("--input", ef_input, "documents to featurize (wntm)");
  ef->add_option("--labels", ef_labels, "one label per line")->required();
  ef->add_option("--out", ef_out, "feature file path")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*ingest) return cmd_ingest(ing);
    if (*build_net) return cmd_build_net(bn_corpus, bn_window, bn_out);
    if (*rew) return cmd_reweight(rw_net, rw_out);
    if (*train) return cmd_train(tr);
    if (*infer) return cmd_infer(inf_model, inf_input, inf_out);
    if (*coh) return cmd_coherence(coh_model, coh_ref, coh_top, coh_eps, coh_out);
    if (*ws) return cmd_wordsim(ws_model, ws_ratings, ws_measure);
    if (*ef) return cmd_export_features(ef_model, ef_input, ef_labels, ef_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace wntm::cli
