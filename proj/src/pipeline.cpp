#include "rasm/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <mutex>
#include <thread>

#include "json.hpp"

namespace rasm {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Runs task(0..n-1) on up to `threads` workers. Task results must be
// written into pre-sized slots so the output is independent of scheduling.
template <typename Task>
void parallel_for(std::size_t n, int threads, Task&& task) {
  threads = std::max(1, threads);
  if (threads == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(threads), n));
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct Combo {
  std::size_t input = 0;
  Scheme scheme = Scheme::word;
  bool dotted = true;
};

// Per-input working set: preprocessed corpus, its undotted image, and the
// dotted morph stream when a segmentation is attached.
struct Prepared {
  Corpus prep;
  Corpus undotted;
  std::vector<std::string> morph_lines;
  bool has_morph = false;
};

std::vector<Prepared> prepare_inputs(const std::vector<PipelineInput>& raw,
                                     const PipelineConfig& cfg) {
  std::vector<PipelineInput> combined;
  if (cfg.aggregate && raw.size() > 1) {
    PipelineInput all;
    all.corpus.name = "aggregated";
    all.corpus.mode = raw.front().corpus.mode;
    for (const PipelineInput& in : raw) {
      all.corpus.samples.insert(all.corpus.samples.end(),
                                in.corpus.samples.begin(),
                                in.corpus.samples.end());
      all.morph_lines.insert(all.morph_lines.end(), in.morph_lines.begin(),
                             in.morph_lines.end());
    }
    combined.push_back(std::move(all));
  }
  const std::vector<PipelineInput>& inputs =
      combined.empty() ? raw : combined;

  std::vector<Prepared> out(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const PipelineInput& in = inputs[i];
    Prepared& p = out[i];
    p.has_morph = !in.morph_lines.empty();
    if (p.has_morph && in.morph_lines.size() != in.corpus.samples.size()) {
      throw Error(in.corpus.name + ": segmentation has " +
                  std::to_string(in.morph_lines.size()) + " lines, corpus " +
                  std::to_string(in.corpus.samples.size()));
    }
    p.prep.name = in.corpus.name;
    p.prep.mode = in.corpus.mode;
    for (std::size_t s = 0; s < in.corpus.samples.size(); ++s) {
      std::string norm = preprocess(in.corpus.samples[s], in.corpus.mode);
      if (norm.empty()) continue;  // dropped sample, with its morph line
      if (cfg.min_tokens > 0 || cfg.max_tokens != kUnbounded) {
        const std::size_t words = count_words(norm);
        if (words < cfg.min_tokens || words > cfg.max_tokens) continue;
      }
      p.prep.samples.push_back(std::move(norm));
      if (p.has_morph) p.morph_lines.push_back(in.morph_lines[s]);
    }
    if (p.prep.empty()) {
      throw Error(in.corpus.name + ": no samples survive preprocessing");
    }
    if (in.corpus.mode == LanguageMode::arabic && cfg.run_dotless) {
      p.undotted = undot_corpus(p.prep, cfg.positional_overrides);
    }
  }
  return out;
}

std::vector<Combo> enumerate_combos(const std::vector<Prepared>& prepared,
                                    const PipelineConfig& cfg) {
  std::vector<Combo> combos;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    const bool arabic = prepared[i].prep.mode == LanguageMode::arabic;
    for (Scheme scheme : cfg.schemes) {
      if (scheme == Scheme::morph && !prepared[i].has_morph) {
        throw Error(prepared[i].prep.name +
                    ": morph scheme requested without a segmentation file");
      }
      if (cfg.run_dotted) combos.push_back({i, scheme, true});
      if (cfg.run_dotless && arabic) combos.push_back({i, scheme, false});
    }
  }
  return combos;
}

TokenStream build_stream(const Prepared& p, Scheme scheme, bool dotted,
                         const PipelineConfig& cfg) {
  if (scheme == Scheme::morph) {
    TokenStream s =
        morph_stream_from_lines(p.morph_lines, cfg.morph_delimiter, p.prep);
    return dotted ? s : undot_stream(s, cfg.positional_overrides);
  }
  return tokenize(dotted ? p.prep : p.undotted, scheme);
}

std::string dotted_label(bool dotted) { return dotted ? "dotted" : "dotless"; }

std::string d(double v) { return fmt_double(v); }

}  // namespace

std::string PipelineConfig::to_json() const {
  ordered_json j;
  j["version"] = std::string(kToolVersion);
  j["corpora"] = corpus_paths;
  j["language_mode"] = mode == LanguageMode::arabic ? "arabic" : "latin";
  std::vector<std::string> names;
  for (Scheme s : schemes) names.emplace_back(scheme_name(s));
  j["schemes"] = names;
  j["dotted"] = run_dotted;
  j["dotless"] = run_dotless;
  j["positional_overrides"] = positional_overrides;
  j["split_sentence_dots"] = split_sentence_dots;
  j["aggregate"] = aggregate;
  j["morph_path"] = morph_path;
  j["morph_delimiter"] = morph_delimiter;
  j["ratio_curves"] = ratio_curves;
  j["heap_points"] = heap_points;
  j["zipf_min_freq"] = zipf_min_freq;
  j["orders"] = orders;
  j["split"] = {{"train", split.train_fraction},
                {"validation", split.validation_fraction},
                {"test", split.test_fraction},
                {"seed", split.seed},
                {"shuffle", split.shuffle}};
  j["score_eos"] = score_eos;
  j["smoothing"] =
      smoothing == Smoothing::modified_kn ? "modified_kn" : "simple_kn";
  j["fixed_discount"] = fixed_discount;
  j["vocab_coverage"] = vocab_coverage;
  j["min_tokens"] = min_tokens;
  j["max_tokens"] = max_tokens == kUnbounded ? 0 : max_tokens;
  j["threads"] = threads;
  return j.dump(2) + "\n";
}

std::string run_manifest(const PipelineConfig& cfg) { return cfg.to_json(); }

PipelineInput load_input(const std::string& path, const PipelineConfig& cfg) {
  PipelineInput in;
  LoadOptions opts;
  opts.split_sentence_dots = cfg.split_sentence_dots;
  in.corpus = load_corpus(path, cfg.mode, opts);
  if (!cfg.morph_path.empty()) {
    const std::string text = read_file(cfg.morph_path);
    for (std::string& l : split_lines(text)) {
      if (!l.empty()) in.morph_lines.push_back(std::move(l));
    }
  }
  return in;
}

ArtifactMap run_stats(const std::vector<PipelineInput>& inputs,
                      const PipelineConfig& cfg) {
  const std::vector<Prepared> prepared = prepare_inputs(inputs, cfg);
  const std::vector<Combo> combos = enumerate_combos(prepared, cfg);

  struct ComboResult {
    StatsReport report;
    std::string ratio_csv;  // dotted combos only
  };
  std::vector<ComboResult> results(combos.size());

  parallel_for(combos.size(), cfg.threads, [&](std::size_t i) {
    const Combo& c = combos[i];
    const Prepared& p = prepared[c.input];
    const TokenStream stream = build_stream(p, c.scheme, c.dotted, cfg);
    const VocabTable vocab = build_vocab(stream, c.dotted);
    results[i].report = make_stats_report(vocab);
    // Ratio curves cover the word and subword schemes; single characters
    // reduce to the 19/31 inventory ratio and are reported in the tables.
    if (c.dotted && cfg.ratio_curves && c.scheme != Scheme::character &&
        p.prep.mode == LanguageMode::arabic) {
      std::vector<int> percents(100);
      for (int k = 0; k < 100; ++k) percents[k] = k + 1;
      std::string csv = "percent,ratio\n";
      for (const auto& [pct, ratio] :
           dotless_ratio_curve(vocab, percents, cfg.positional_overrides)) {
        csv += std::to_string(pct) + "," + d(ratio) + "\n";
      }
      results[i].ratio_csv = std::move(csv);
    }
  });

  ArtifactMap artifacts;
  std::string tsv =
      "corpus\tscheme\tdottedness\tV\tN\tV_over_N_pct\tH_bits\tS\tS_top10"
      "\tredundancy\n";
  ordered_json jrows = ordered_json::array();
  for (std::size_t i = 0; i < combos.size(); ++i) {
    const Combo& c = combos[i];
    const StatsReport& r = results[i].report;
    const std::string corpus = prepared[c.input].prep.name;
    tsv += corpus + "\t" + std::string(scheme_name(c.scheme)) + "\t" +
           dotted_label(c.dotted) + "\t" + std::to_string(r.vocab_size) +
           "\t" + std::to_string(r.token_count) + "\t" + d(r.v_over_n_pct) +
           "\t" + d(r.entropy_bits) + "\t" + d(r.mean_length) + "\t" +
           d(r.mean_length_top10) + "\t" +
           (r.redundancy ? d(*r.redundancy) : "nan") + "\n";
    ordered_json row;
    row["corpus"] = corpus;
    row["scheme"] = std::string(scheme_name(c.scheme));
    row["dottedness"] = dotted_label(c.dotted);
    row["V"] = r.vocab_size;
    row["N"] = r.token_count;
    row["V_over_N_pct"] = r.v_over_n_pct;
    row["H_bits"] = r.entropy_bits;
    row["S"] = r.mean_length;
    row["S_top10"] = r.mean_length_top10;
    if (r.redundancy) row["redundancy"] = *r.redundancy;
    jrows.push_back(std::move(row));

    if (!results[i].ratio_csv.empty()) {
      artifacts[corpus + "." + std::string(scheme_name(c.scheme)) +
                ".ratio.csv"] = std::move(results[i].ratio_csv);
    }
  }
  artifacts["stats.tsv"] = std::move(tsv);

  // Dotted-vs-dotless comparison rows wherever both sides ran.
  std::string cmp =
      "corpus\tscheme\tV\tV_dotless\tV_ratio_pct\tN\tH\tH_dotless\tdelta_H"
      "\tS\tS_dotless\n";
  ordered_json jcmp = ordered_json::array();
  for (std::size_t i = 0; i < combos.size(); ++i) {
    if (!combos[i].dotted) continue;
    for (std::size_t j = 0; j < combos.size(); ++j) {
      if (combos[j].dotted || combos[j].input != combos[i].input ||
          combos[j].scheme != combos[i].scheme) {
        continue;
      }
      const ComparisonRow row =
          compare_report(results[i].report, results[j].report);
      const std::string corpus = prepared[combos[i].input].prep.name;
      cmp += corpus + "\t" + std::string(scheme_name(row.scheme)) + "\t" +
             std::to_string(row.v_dotted) + "\t" +
             std::to_string(row.v_dotless) + "\t" + d(row.v_ratio_pct) +
             "\t" + std::to_string(row.token_count) + "\t" + d(row.h_dotted) +
             "\t" + d(row.h_dotless) + "\t" + d(row.delta_h) + "\t" +
             d(row.s_dotted) + "\t" + d(row.s_dotless) + "\n";
      ordered_json jc;
      jc["corpus"] = corpus;
      jc["scheme"] = std::string(scheme_name(row.scheme));
      jc["V"] = row.v_dotted;
      jc["V_dotless"] = row.v_dotless;
      jc["V_ratio_pct"] = row.v_ratio_pct;
      jc["N"] = row.token_count;
      jc["H"] = row.h_dotted;
      jc["H_dotless"] = row.h_dotless;
      jc["delta_H"] = row.delta_h;
      jc["S"] = row.s_dotted;
      jc["S_dotless"] = row.s_dotless;
      jcmp.push_back(std::move(jc));
    }
  }
  artifacts["comparison.tsv"] = std::move(cmp);

  ordered_json doc;
  doc["rows"] = std::move(jrows);
  doc["comparisons"] = std::move(jcmp);
  artifacts["stats.json"] = doc.dump(2) + "\n";
  return artifacts;
}

ArtifactMap run_laws(const std::vector<PipelineInput>& inputs,
                     const PipelineConfig& cfg) {
  const std::vector<Prepared> prepared = prepare_inputs(inputs, cfg);
  const std::vector<Combo> combos = enumerate_combos(prepared, cfg);

  struct ComboResult {
    ZipfFit zipf;
    HeapFit heap;
  };
  std::vector<ComboResult> results(combos.size());

  parallel_for(combos.size(), cfg.threads, [&](std::size_t i) {
    const Combo& c = combos[i];
    const TokenStream stream =
        build_stream(prepared[c.input], c.scheme, c.dotted, cfg);
    const VocabTable vocab = build_vocab(stream, c.dotted);
    results[i].zipf = zipf_fit(vocab, cfg.zipf_min_freq);
    results[i].heap = heap_fit(stream, cfg.heap_points);
  });

  ArtifactMap artifacts;
  std::string tsv =
      "corpus\tscheme\tdottedness\talpha\tC\tzipf_r2\tzipf_points\tk\tbeta"
      "\theap_r2\theap_points\n";
  ordered_json jrows = ordered_json::array();
  for (std::size_t i = 0; i < combos.size(); ++i) {
    const Combo& c = combos[i];
    const std::string corpus = prepared[c.input].prep.name;
    const std::string stem = corpus + "." +
                             std::string(scheme_name(c.scheme)) + "." +
                             dotted_label(c.dotted);
    const ZipfFit& z = results[i].zipf;
    const HeapFit& h = results[i].heap;
    tsv += corpus + "\t" + std::string(scheme_name(c.scheme)) + "\t" +
           dotted_label(c.dotted) + "\t" + d(z.alpha) + "\t" + d(z.c) + "\t" +
           d(z.r_squared) + "\t" + std::to_string(z.points.size()) + "\t" +
           d(h.k) + "\t" + d(h.beta) + "\t" + d(h.r_squared) + "\t" +
           std::to_string(h.points.size()) + "\n";
    ordered_json row;
    row["corpus"] = corpus;
    row["scheme"] = std::string(scheme_name(c.scheme));
    row["dottedness"] = dotted_label(c.dotted);
    row["zipf"] = {{"alpha", z.alpha},
                   {"C", z.c},
                   {"r_squared", z.r_squared},
                   {"points", z.points.size()}};
    row["heap"] = {{"k", h.k},
                   {"beta", h.beta},
                   {"r_squared", h.r_squared},
                   {"points", h.points.size()}};
    jrows.push_back(std::move(row));
    artifacts[stem + ".zipf.csv"] = zipf_plot_csv(z);
    artifacts[stem + ".heap.csv"] = heap_plot_csv(h);
  }
  artifacts["fits.tsv"] = std::move(tsv);
  ordered_json doc;
  doc["fits"] = std::move(jrows);
  artifacts["fits.json"] = doc.dump(2) + "\n";
  return artifacts;
}

ArtifactMap run_lm(const std::vector<PipelineInput>& inputs,
                   const PipelineConfig& cfg) {
  if (cfg.orders.empty()) throw Error("no n-gram orders requested");
  int max_order = kMinOrder;
  for (int o : cfg.orders) {
    if (o < kMinOrder || o > kMaxOrder) {
      throw Error("n-gram order out of range: " + std::to_string(o));
    }
    max_order = std::max(max_order, o);
  }

  const std::vector<Prepared> prepared = prepare_inputs(inputs, cfg);
  const std::vector<Combo> combos = enumerate_combos(prepared, cfg);

  // One split per input, shared by every scheme and dottedness so that the
  // dotless corpus is exactly the undotted image of the dotted one.
  struct SplitSet {
    Corpus train, valid, test;
    Corpus train_undot, valid_undot, test_undot;
    std::vector<std::string> morph_train, morph_valid, morph_test;
  };
  std::vector<SplitSet> splits(prepared.size());
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    const Prepared& p = prepared[i];
    const SplitIndices idx = split_indices(p.prep.size(), cfg.split);
    auto take = [&](const std::vector<std::size_t>& which, Corpus& dst,
                    std::vector<std::string>* morph_dst, const char* suffix) {
      dst.name = p.prep.name + suffix;
      dst.mode = p.prep.mode;
      for (std::size_t k : which) {
        dst.samples.push_back(p.prep.samples[k]);
        if (p.has_morph && morph_dst) {
          morph_dst->push_back(p.morph_lines[k]);
        }
      }
    };
    SplitSet& s = splits[i];
    take(idx.train, s.train, &s.morph_train, ".train");
    take(idx.validation, s.valid, &s.morph_valid, ".valid");
    take(idx.test, s.test, &s.morph_test, ".test");
    if (s.train.empty() || s.test.empty()) {
      throw Error(p.prep.name + ": train/test split is empty");
    }
    if (p.prep.mode == LanguageMode::arabic && cfg.run_dotless) {
      s.train_undot = undot_corpus(s.train, cfg.positional_overrides);
      s.valid_undot = undot_corpus(s.valid, cfg.positional_overrides);
      s.test_undot = undot_corpus(s.test, cfg.positional_overrides);
    }
  }

  struct ComboResult {
    std::vector<EvalReport> by_order;
    std::uint64_t oov_tokens = 0;
    std::uint64_t oov_types = 0;
    std::uint64_t test_tokens = 0;
  };
  std::vector<ComboResult> results(combos.size());

  parallel_for(combos.size(), cfg.threads, [&](std::size_t i) {
    const Combo& c = combos[i];
    const SplitSet& s = splits[c.input];

    TokenStream train_stream, test_stream;
    if (c.scheme == Scheme::morph) {
      TokenStream train_dotted = morph_stream_from_lines(
          s.morph_train, cfg.morph_delimiter, s.train);
      TokenStream test_dotted =
          morph_stream_from_lines(s.morph_test, cfg.morph_delimiter, s.test);
      if (c.dotted) {
        train_stream = std::move(train_dotted);
        test_stream = std::move(test_dotted);
      } else {
        train_stream = undot_stream(train_dotted, cfg.positional_overrides);
        test_stream = undot_stream(test_dotted, cfg.positional_overrides);
      }
    } else {
      train_stream = tokenize(c.dotted ? s.train : s.train_undot, c.scheme);
      test_stream = tokenize(c.dotted ? s.test : s.test_undot, c.scheme);
    }
    if (cfg.vocab_coverage > 0.0 && cfg.vocab_coverage < 1.0) {
      train_stream = apply_vocab_coverage(train_stream, cfg.vocab_coverage);
    }

    const VocabTable train_vocab = build_vocab(train_stream, c.dotted);
    const auto [oov_tok, oov_typ] = oov_stats(train_vocab, test_stream);
    results[i].oov_tokens = oov_tok;
    results[i].oov_types = oov_typ;
    results[i].test_tokens = test_stream.size();

    const NgramCounts counts(train_stream, max_order);
    for (int order : cfg.orders) {
      const NgramModel model =
          estimate_kn(counts, order, cfg.smoothing, cfg.fixed_discount);
      results[i].by_order.push_back(
          model.perplexity(test_stream, cfg.score_eos));
    }
  });

  ArtifactMap artifacts;
  std::string ppl_csv =
      "corpus,scheme,dottedness,order,ppl,scored_tokens,oov_tokens,"
      "oov_types\n";
  ordered_json jrows = ordered_json::array();
  for (std::size_t i = 0; i < combos.size(); ++i) {
    const Combo& c = combos[i];
    const std::string corpus = prepared[c.input].prep.name;
    for (std::size_t k = 0; k < cfg.orders.size(); ++k) {
      const EvalReport& r = results[i].by_order[k];
      ppl_csv += corpus + "," + std::string(scheme_name(c.scheme)) + "," +
                 dotted_label(c.dotted) + "," +
                 std::to_string(cfg.orders[k]) + "," + d(r.ppl) + "," +
                 std::to_string(r.token_count) + "," +
                 std::to_string(r.oov_tokens) + "," +
                 std::to_string(r.oov_types) + "\n";
      ordered_json row;
      row["corpus"] = corpus;
      row["scheme"] = std::string(scheme_name(c.scheme));
      row["dottedness"] = dotted_label(c.dotted);
      row["order"] = cfg.orders[k];
      row["ppl"] = r.ppl;
      row["scored_tokens"] = r.token_count;
      row["oov_tokens"] = r.oov_tokens;
      row["oov_types"] = r.oov_types;
      jrows.push_back(std::move(row));
    }
  }
  artifacts["ppl_by_order.csv"] = std::move(ppl_csv);

  std::string oov_tsv =
      "corpus\tscheme\ttest_tokens\tdotted_oov_tokens\tdotless_oov_tokens"
      "\ttoken_ratio_pct\tdotted_oov_types\tdotless_oov_types"
      "\ttype_ratio_pct\n";
  for (std::size_t i = 0; i < combos.size(); ++i) {
    if (!combos[i].dotted) continue;
    for (std::size_t j = 0; j < combos.size(); ++j) {
      if (combos[j].dotted || combos[j].input != combos[i].input ||
          combos[j].scheme != combos[i].scheme) {
        continue;
      }
      const auto& a = results[i];
      const auto& b = results[j];
      const double tok_ratio =
          a.oov_tokens == 0 ? 0.0
                            : 100.0 * static_cast<double>(b.oov_tokens) /
                                  static_cast<double>(a.oov_tokens);
      const double typ_ratio =
          a.oov_types == 0 ? 0.0
                           : 100.0 * static_cast<double>(b.oov_types) /
                                 static_cast<double>(a.oov_types);
      oov_tsv += prepared[combos[i].input].prep.name + "\t" +
                 std::string(scheme_name(combos[i].scheme)) + "\t" +
                 std::to_string(a.test_tokens) + "\t" +
                 std::to_string(a.oov_tokens) + "\t" +
                 std::to_string(b.oov_tokens) + "\t" + d(tok_ratio) + "\t" +
                 std::to_string(a.oov_types) + "\t" +
                 std::to_string(b.oov_types) + "\t" + d(typ_ratio) + "\n";
    }
  }
  artifacts["oov.tsv"] = std::move(oov_tsv);

  ordered_json doc;
  doc["ppl"] = std::move(jrows);
  artifacts["lm.json"] = doc.dump(2) + "\n";

  // Split corpora, written in the plain one-sample-per-line format.
  for (std::size_t i = 0; i < splits.size(); ++i) {
    auto emit = [&](const Corpus& part) {
      if (part.empty()) return;
      std::string text;
      for (const std::string& s : part.samples) {
        text += s;
        text += '\n';
      }
      artifacts[part.name + ".txt"] = std::move(text);
    };
    emit(splits[i].train);
    emit(splits[i].valid);
    emit(splits[i].test);
  }
  return artifacts;
}

void write_artifacts(const ArtifactMap& artifacts, const PipelineConfig& cfg,
                     const std::string& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  try {
    const fs::path run_json = fs::path(dir) / "run.json";
    write_file(run_json.string(), run_manifest(cfg));
    written.push_back(run_json);
    for (const auto& [name, content] : artifacts) {
      const fs::path p = fs::path(dir) / name;
      write_file(p.string(), content);
      written.push_back(p);
    }
  } catch (...) {
    std::error_code ec;
    for (const fs::path& p : written) fs::remove(p, ec);
    throw;
  }
}

}  // namespace rasm
