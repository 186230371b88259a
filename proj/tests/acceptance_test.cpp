// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier direction experiments train real models; the CLI binary
// (passed via --cli) is exercised end to end by the determinism criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "testutil.hpp"
#include "wntm/coocnet.hpp"
#include "wntm/corpus.hpp"
#include "wntm/eval.hpp"
#include "wntm/gibbs.hpp"
#include "wntm/wntm.hpp"

using namespace wntm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1. Sampler oracle equivalence on the micro-corpus.
Outcome criterion_sampler_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  testutil::EnumerationOracle oracle{{{0, 1}, {1, 2}}, 2, 3, 0.5, 0.5, {}, {}};
  oracle.solve();

  gibbs::SamplerConfig cfg;
  cfg.num_topics = 2;
  cfg.alpha = 0.5;
  cfg.beta = 0.5;
  cfg.iterations = 1;
  cfg.seed = 20240901;
  gibbs::SamplerState st = gibbs::init(oracle.docs, 3, cfg);
  const std::size_t n = st.tokens.size();

  const int burn_in = 2000;
  const int samples = 50000;
  for (int i = 0; i < burn_in; ++i) gibbs::sweep(st, cfg);
  std::vector<std::vector<double>> emp(n, std::vector<double>(2, 0.0));
  for (int s = 0; s < samples; ++s) {
    gibbs::sweep(st, cfg);
    for (std::size_t i = 0; i < n; ++i) emp[i][st.assignments[i]] += 1.0;
  }

  double worst_tv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double tv = 0.0;
    for (int k = 0; k < 2; ++k) {
      tv += std::abs(emp[i][k] / samples - oracle.token_marginals[i][k]);
    }
    worst_tv = std::max(worst_tv, 0.5 * tv);
  }
  const double secs = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max TV %.4f (limit 0.05), %.1fs (limit 30s)",
                worst_tv, secs);
  return {worst_tv <= 0.05 && secs < 30.0, buf};
}

// ---------------------------------------------------------------------------
// 2. Count-consistency audit on 100 fuzzed corpora.
Outcome criterion_count_audit() {
  Rng rng(9001);
  int cases = 0;
  while (cases < 100) {
    const int vocab = 2 + static_cast<int>(rng.below(20));
    auto docs = testutil::random_docs(rng, 10, vocab, 12);
    bool any = false;
    for (const auto& d : docs) any = any || !d.empty();
    if (!any) continue;
    ++cases;
    gibbs::SamplerConfig cfg;
    cfg.num_topics = 1 + static_cast<std::int32_t>(rng.below(8));
    cfg.alpha = 0.05 + rng.uniform();
    cfg.beta = 0.01 + rng.uniform();
    cfg.iterations = 1;
    cfg.seed = rng.raw();
    gibbs::SamplerState st = gibbs::init(docs, vocab, cfg);
    for (int s = 0; s < 5; ++s) {
      gibbs::sweep(st, cfg);
      if (!gibbs::audit_counts(st)) {
        return {false, "rebuilt counts diverged on fuzz case " + std::to_string(cases)};
      }
    }
  }
  return {true, "100 fuzz cases, counts rebuilt exactly after every sweep"};
}

// ---------------------------------------------------------------------------
// 3. Network bound: total pseudo-doc length = 2 * sum(w) <= 2 * N_d * L_d * (c-1).
Outcome criterion_network_bound() {
  Rng rng(9002);
  for (int trial = 0; trial < 50; ++trial) {
    const int vocab = 3 + static_cast<int>(rng.below(12));
    auto docs = testutil::random_docs(rng, 14, vocab, 16);
    std::int64_t tokens = 0;
    for (const auto& d : docs) tokens += static_cast<std::int64_t>(d.size());
    for (int c : {2, 5, 10}) {
      WordNetwork net = build_network(docs, vocab, c);
      auto set = to_pseudo_documents(net);
      if (set.total_length != 2 * net.total_edge_weight()) {
        return {false, "pseudo length != 2 * edge weight"};
      }
      if (set.total_length > 2 * tokens * (c - 1)) {
        return {false, "anchor-count bound violated at c=" + std::to_string(c)};
      }
    }
  }
  return {true, "50 corpora x c in {2,5,10}: equality and bound hold exactly"};
}

// ---------------------------------------------------------------------------
// 4. Re-weighting safety on 50 random networks.
Outcome criterion_reweight_safety() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(9003);
  for (int trial = 0; trial < 50; ++trial) {
    WordNetwork net = testutil::random_network(rng, 40, 30);
    WordNetwork rew = reweight(net);
    auto before = to_pseudo_documents(net);
    auto after = to_pseudo_documents(rew);
    if (after.total_length > before.total_length) {
      return {false, "total pseudo length increased"};
    }
    for (WordId u = 0; u < net.num_words; ++u) {
      if (net.adjacency[u].size() != rew.adjacency[u].size()) {
        return {false, "edge set changed"};
      }
      for (std::size_t i = 0; i < net.adjacency[u].size(); ++i) {
        const auto [v0, w0] = net.adjacency[u][i];
        const auto [v1, w1] = rew.adjacency[u][i];
        if (v0 != v1) return {false, "edge set changed"};
        if (w1 < 1 || w1 > w0) return {false, "weight outside [1, w]"};
        // symmetry: mirrored entry carries the same weight
        const auto& row = rew.adjacency[v1];
        auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(u, INT64_MIN));
        if (it == row.end() || it->first != u || it->second != w1) {
          return {false, "symmetry broken"};
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "50 networks safe, %.2fs (limit 10s)", secs);
  return {secs < 10.0, buf};
}

// ---------------------------------------------------------------------------
// Shared corpus and runs for criteria 5 and 6.
struct PlantedRuns {
  Corpus corpus;
  std::vector<std::vector<std::string>> planted_top;  // top-10 strings per topic
  std::vector<Matrix> wntm_phi;                       // one per seed
  std::vector<Matrix> lda_phi;
  double build_seconds = 0.0;
  double wntm_seconds = 0.0;
  double lda_seconds = 0.0;
};

PlantedRuns run_planted_experiment() {
  PlantedRuns out;
  const auto t0 = std::chrono::steady_clock::now();

  std::mt19937_64 gen(4242);
  auto planted = testutil::make_planted_model(gen, 5, 200, 0.05);
  std::vector<RawDocument> raw;
  raw.reserve(3000);
  for (int d = 0; d < 3000; ++d) {
    raw.push_back(testutil::draw_planted_doc(gen, planted, 8, 0.5));
  }
  out.corpus = build_vocabulary(raw, {1, 0});
  out.planted_top.resize(5);
  for (int k = 0; k < 5; ++k) {
    for (int idx : testutil::top_indices(planted.topic_word.row_span(k), 10)) {
      out.planted_top[k].push_back(planted.word_names[idx]);
    }
  }
  out.build_seconds = seconds_since(t0);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto tw = std::chrono::steady_clock::now();
    WntmConfig cfg;
    cfg.window_size = 10;
    cfg.reweight = ReweightMode::Auto;
    cfg.sampler.num_topics = 5;
    cfg.sampler.alpha = 10.0;  // 50/K
    cfg.sampler.beta = 0.01;
    cfg.sampler.iterations = 1000;
    cfg.sampler.seed = seed;
    out.wntm_phi.push_back(train_wntm(out.corpus, cfg).model.group_phi);
    out.wntm_seconds += seconds_since(tw);

    const auto tl = std::chrono::steady_clock::now();
    gibbs::SamplerConfig lda_cfg = cfg.sampler;
    out.lda_phi.push_back(train_lda(out.corpus, lda_cfg).second.phi);
    out.lda_seconds += seconds_since(tl);
  }
  return out;
}

/// Greedy one-to-one matching of learned to planted topics by top-10 overlap.
double greedy_overlap(const Matrix& phi, const Corpus& corpus,
                      const std::vector<std::vector<std::string>>& planted_top) {
  const int k = static_cast<int>(phi.rows);
  std::vector<std::vector<std::string>> learned(k);
  for (int i = 0; i < k; ++i) {
    for (WordId w : eval::top_words(phi.row_span(i), 10)) {
      learned[i].push_back(corpus.vocabulary.word_of(w));
    }
  }
  std::vector<bool> used_l(k, false), used_p(planted_top.size(), false);
  double total = 0.0;
  const int rounds = std::min<int>(k, static_cast<int>(planted_top.size()));
  for (int round = 0; round < rounds; ++round) {
    double best = -1.0;
    int bl = -1, bp = -1;
    for (int l = 0; l < k; ++l) {
      if (used_l[l]) continue;
      for (std::size_t p = 0; p < planted_top.size(); ++p) {
        if (used_p[p]) continue;
        int inter = 0;
        for (const auto& w : learned[l]) {
          if (std::find(planted_top[p].begin(), planted_top[p].end(), w) !=
              planted_top[p].end()) {
            ++inter;
          }
        }
        if (inter / 10.0 > best) {
          best = inter / 10.0;
          bl = l;
          bp = static_cast<int>(p);
        }
      }
    }
    used_l[bl] = used_p[bp] = true;
    total += best;
  }
  return total / rounds;
}

// 5. Planted-topic recovery.
Outcome criterion_topic_recovery(const PlantedRuns& runs) {
  int recovered = 0;
  double min_overlap = 1.0;
  for (const Matrix& phi : runs.wntm_phi) {
    const double overlap = greedy_overlap(phi, runs.corpus, runs.planted_top);
    min_overlap = std::min(min_overlap, overlap);
    if (overlap >= 0.6) ++recovered;
  }
  const double secs = runs.build_seconds + runs.wntm_seconds;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d/10 seeds with avg overlap >= 0.6 (need 8), min %.2f, %.0fs (limit 180s)",
                recovered, min_overlap, secs);
  return {recovered >= 8 && secs < 180.0, buf};
}

// 6. Short-text coherence direction, paired seeds.
Outcome criterion_coherence_direction(const PlantedRuns& runs) {
  const auto t0 = std::chrono::steady_clock::now();
  auto index = eval::DocFrequencyIndex::build(token_views(runs.corpus.documents),
                                              runs.corpus.vocabulary.size());
  eval::CoherenceConfig cfg{5, 1e-12};
  int wins = 0;
  for (std::size_t s = 0; s < runs.wntm_phi.size(); ++s) {
    const double cw = eval::average_coherence(runs.wntm_phi[s], index, cfg);
    const double cl = eval::average_coherence(runs.lda_phi[s], index, cfg);
    if (cw >= cl) ++wins;
  }
  const double secs =
      runs.build_seconds + runs.wntm_seconds + runs.lda_seconds + seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "WNTM >= LDA in %d/10 paired seeds (need 7), %.0fs (limit 300s)",
                wins, secs);
  return {wins >= 7 && secs < 300.0, buf};
}

// ---------------------------------------------------------------------------
// 7. Rare-topic sensitivity: injected signature word in some top-20 list
// strictly more often for WNTM.
Outcome criterion_rare_topic() {
  std::mt19937_64 gen(777);
  auto background = testutil::make_planted_model(gen, 40, 1000, 0.05);
  auto rare = testutil::make_planted_model(gen, 1, 20, 0.3, "r");
  const int sig_idx = testutil::top_indices(rare.topic_word.row_span(0), 1)[0];
  const std::string signature = rare.word_names[sig_idx];

  std::vector<RawDocument> raw;
  raw.reserve(4040);
  for (int d = 0; d < 4000; ++d) {
    raw.push_back(testutil::draw_planted_doc(gen, background, 8, 2.0));
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto rare_row = rare.topic_word.row_span(0);
  const std::vector<double> rare_dist(rare_row.begin(), rare_row.end());
  for (int d = 0; d < 40; ++d) {
    auto theta = testutil::dirichlet(gen, 40, 2.0);
    RawDocument doc;
    for (int i = 0; i < 8; ++i) {
      if (unif(gen) < 0.3) {
        doc.push_back(rare.word_names[testutil::draw_categorical(gen, rare_dist)]);
      } else {
        const int k = testutil::draw_categorical(gen, theta);
        auto row = background.topic_word.row_span(k);
        doc.push_back(background.word_names[testutil::draw_categorical(
            gen, {row.begin(), row.end()})]);
      }
    }
    raw.push_back(std::move(doc));
  }

  Corpus corpus = build_vocabulary(raw, {1, 0});
  const WordId sig_id = corpus.vocabulary.id_of(signature);
  if (sig_id < 0) return {false, "signature word missing from the corpus"};

  auto found_in_top20 = [&](const Matrix& phi) {
    for (std::size_t k = 0; k < phi.rows; ++k) {
      auto top = eval::top_words(phi.row_span(k), 20);
      if (std::find(top.begin(), top.end(), sig_id) != top.end()) return true;
    }
    return false;
  };

  int found_wntm = 0, found_lda = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    WntmConfig cfg;
    cfg.window_size = 10;
    cfg.reweight = ReweightMode::Auto;
    cfg.sampler.num_topics = 20;
    cfg.sampler.alpha = 2.5;  // 50/K
    cfg.sampler.beta = 0.01;
    cfg.sampler.iterations = 300;
    cfg.sampler.seed = seed;
    if (found_in_top20(train_wntm(corpus, cfg).model.group_phi)) ++found_wntm;
    if (found_in_top20(train_lda(corpus, cfg.sampler).second.phi)) ++found_lda;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "signature found: WNTM %d/10 vs LDA %d/10 (need strict >)",
                found_wntm, found_lda);
  return {found_wntm > found_lda, buf};
}

// ---------------------------------------------------------------------------
// 8. Linearity of document inference in the empirical word distribution.
Outcome criterion_inference_linearity() {
  Rng rng(9008);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t v = 2 + rng.below(10);
    const std::size_t k = 1 + rng.below(6);
    WordTopicModel model;
    model.word_theta = Matrix(v, k);
    for (std::size_t w = 0; w < v; ++w) {
      double total = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        model.word_theta.at(w, j) = rng.uniform() + 1e-3;
        total += model.word_theta.at(w, j);
      }
      for (std::size_t j = 0; j < k; ++j) model.word_theta.at(w, j) /= total;
    }
    model.isolated.assign(v, false);

    const int len = 1 + static_cast<int>(rng.below(15));
    std::vector<WordId> doc;
    for (int i = 0; i < len; ++i) {
      doc.push_back(static_cast<WordId>(rng.below(static_cast<uint32_t>(v))));
    }
    auto got = infer_document_topics(doc, model);

    std::vector<int> counts(v, 0);
    for (WordId w : doc) counts[static_cast<std::size_t>(w)]++;
    std::vector<double> want(k, 0.0);
    for (std::size_t w = 0; w < v; ++w) {
      if (counts[w] == 0) continue;
      std::vector<WordId> single = {static_cast<WordId>(w)};
      auto row = infer_document_topics(single, model);
      for (std::size_t j = 0; j < k; ++j) {
        want[j] += static_cast<double>(counts[w]) / len * row[j];
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (std::abs(got[j] - want[j]) > 1e-12) {
        return {false, "linearity residual above 1e-12"};
      }
    }

    // single-word documents return theta rows bit-exactly
    const WordId w0 = doc[0];
    std::vector<WordId> single = {w0};
    auto row = infer_document_topics(single, model);
    for (std::size_t j = 0; j < k; ++j) {
      if (row[j] != model.word_theta.at(static_cast<std::size_t>(w0), j)) {
        return {false, "single-word inference is not the theta row"};
      }
    }
  }
  return {true, "100 random models: residual <= 1e-12, single-word rows exact"};
}

// ---------------------------------------------------------------------------
// 9. Metric unit checks at pinned tolerances.
Outcome criterion_metric_units() {
  const double js = eval::js_divergence(std::vector<double>{1.0, 0.0},
                                        std::vector<double>{0.0, 1.0});
  if (std::abs(js - std::log(2.0)) > 1e-12) return {false, "JS ln2 case"};

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double cos45 = eval::cosine_similarity(
      std::vector<double>{inv_sqrt2, inv_sqrt2}, std::vector<double>{1.0, 0.0});
  if (std::abs(cos45 - std::sqrt(2.0) / 2.0) > 1e-12) return {false, "cosine 45 case"};

  const std::vector<double> base = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> agree = {2.0, 3.0, 5.0, 9.0};
  const std::vector<double> reversed = {9.0, 5.0, 3.0, 2.0};
  if (eval::spearman(base, agree) != 1.0) return {false, "Spearman +1 case"};
  if (eval::spearman(base, reversed) != -1.0) return {false, "Spearman -1 case"};

  std::vector<std::vector<WordId>> docs;
  for (int i = 0; i < 5; ++i) docs.push_back({0, 1});
  for (int i = 0; i < 5; ++i) docs.push_back({0});
  auto index = eval::DocFrequencyIndex::build(docs, 2);
  const double coh =
      eval::topic_coherence(std::vector<WordId>{0, 1}, index, {2, 1e-12});
  if (std::abs(coh - std::log(0.5 + 1e-13)) > 1e-9) return {false, "coherence unit case"};

  return {true, "JS, cosine, Spearman, coherence all at pinned tolerances"};
}

// ---------------------------------------------------------------------------
// 10. End-to-end CLI determinism.
Outcome criterion_cli_determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no --cli path supplied"};
  testutil::TempDir tmp("acceptance-cli");

  std::string corpus_text;
  std::mt19937_64 gen(31337);
  auto planted = testutil::make_planted_model(gen, 3, 30, 0.1);
  for (int d = 0; d < 40; ++d) {
    corpus_text += testutil::join_tokens(testutil::draw_planted_doc(gen, planted, 6, 0.5));
    corpus_text += '\n';
  }
  testutil::write_text(tmp.path("docs.txt"), corpus_text);

  auto train_into = [&](const std::string& out_dir) {
    const std::string cmd = cli + " train --model wntm --input " + tmp.path("docs.txt") +
                            " --out " + out_dir +
                            " --min-freq 1 --min-doc-len 0 --k 5 --window 10" +
                            " --iters 50 --seed 7 > " + tmp.path("stdout.log") +
                            " 2> " + tmp.path("stderr.log");
    return std::system(cmd.c_str());
  };
  if (train_into(tmp.path("m1")) != 0) return {false, "first train run failed"};
  if (train_into(tmp.path("m2")) != 0) return {false, "second train run failed"};

  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(tmp.path("m1"))) {
    names.push_back(e.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) return {false, "model directory is empty"};
  for (const auto& n : names) {
    if (!fs::exists(fs::path(tmp.path("m2")) / n)) return {false, "missing file " + n};
    if (testutil::read_text((fs::path(tmp.path("m1")) / n).string()) !=
        testutil::read_text((fs::path(tmp.path("m2")) / n).string())) {
      return {false, n + " differs between runs"};
    }
  }
  return {true, std::to_string(names.size()) + " files byte-identical across runs"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
  }

  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("%s  %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  report(1, "sampler-oracle-equivalence", criterion_sampler_oracle());
  report(2, "count-consistency-audit", criterion_count_audit());
  report(3, "network-bound", criterion_network_bound());
  report(4, "reweighting-safety", criterion_reweight_safety());

  PlantedRuns runs = run_planted_experiment();
  report(5, "planted-topic-recovery", criterion_topic_recovery(runs));
  report(6, "short-text-coherence-direction", criterion_coherence_direction(runs));
  report(7, "rare-topic-sensitivity", criterion_rare_topic());
  report(8, "inference-linearity", criterion_inference_linearity());
  report(9, "metric-unit-checks", criterion_metric_units());
  report(10, "end-to-end-determinism", criterion_cli_determinism(cli));

  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
