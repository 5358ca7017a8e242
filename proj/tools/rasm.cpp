// Command-line front end: exposes preprocessing/undotting, tokenization,
// corpus statistics, Zipf/Heap fits and n-gram language modeling as
// subcommands that write machine-readable reports.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rasm/alphabet.hpp"
#include "rasm/arpa.hpp"
#include "rasm/pipeline.hpp"

namespace fs = std::filesystem;
using namespace rasm;

namespace {

struct CommonOpts {
  std::vector<std::string> inputs;
  bool latin = false;
  std::string schemes = "word,char,disjoint";
  bool dotted_only = false;
  bool dotless_only = false;
  bool no_overrides = false;
  bool split_dots = false;
  bool aggregate = false;
  std::string morph_file;
  std::string morph_delimiter = "+";
  std::size_t min_tokens = 0;
  std::size_t max_tokens = 0;  // 0 = unbounded
  int threads = 1;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool need_out_dir = true) {
  cmd->add_option("input", o.inputs, "input corpus file(s), one sample per line")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_flag("--latin", o.latin, "treat input as Latin-script text");
  cmd->add_option("--schemes", o.schemes,
                  "comma list of word,char,disjoint,morph");
  cmd->add_flag("--dotted-only", o.dotted_only, "skip the dotless runs");
  cmd->add_flag("--dotless-only", o.dotless_only, "skip the dotted runs");
  cmd->add_flag("--no-positional-overrides", o.no_overrides,
                "undot strictly by the letter table");
  cmd->add_flag("--split-on-sentence-dot", o.split_dots,
                "additionally split samples on ASCII/Arabic full stops");
  cmd->add_flag("--aggregate", o.aggregate,
                "concatenate all inputs into one corpus named 'aggregated'");
  cmd->add_option("--morph-file", o.morph_file,
                  "externally segmented companion corpus (morph scheme)");
  cmd->add_option("--morph-delimiter", o.morph_delimiter,
                  "subword delimiter in the segmented file");
  cmd->add_option("--min-tokens", o.min_tokens,
                  "drop samples shorter than this many words");
  cmd->add_option("--max-tokens", o.max_tokens,
                  "drop samples longer than this many words (0 = unbounded)");
  cmd->add_option("--threads", o.threads, "worker threads");
  auto* out = cmd->add_option("-o,--out-dir", o.out_dir, "output directory");
  if (need_out_dir) out->required();
}

PipelineConfig to_config(const CommonOpts& o) {
  PipelineConfig cfg;
  cfg.corpus_paths = o.inputs;
  cfg.mode = o.latin ? LanguageMode::latin : LanguageMode::arabic;
  cfg.schemes.clear();
  std::size_t start = 0;
  while (start <= o.schemes.size()) {
    std::size_t comma = o.schemes.find(',', start);
    if (comma == std::string::npos) comma = o.schemes.size();
    if (comma > start) {
      cfg.schemes.push_back(
          scheme_from_name(o.schemes.substr(start, comma - start)));
    }
    start = comma + 1;
  }
  if (cfg.schemes.empty()) throw Error("no tokenization schemes selected");
  if (o.dotted_only && o.dotless_only) {
    throw Error("--dotted-only and --dotless-only are mutually exclusive");
  }
  cfg.run_dotted = !o.dotless_only;
  cfg.run_dotless = !o.dotted_only && !o.latin;
  cfg.positional_overrides = !o.no_overrides;
  cfg.split_sentence_dots = o.split_dots;
  cfg.aggregate = o.aggregate;
  cfg.morph_path = o.morph_file;
  cfg.morph_delimiter = o.morph_delimiter;
  cfg.min_tokens = o.min_tokens;
  cfg.max_tokens = o.max_tokens == 0 ? kUnbounded : o.max_tokens;
  cfg.threads = o.threads;
  return cfg;
}

std::vector<PipelineInput> load_inputs(const CommonOpts& o,
                                       const PipelineConfig& cfg) {
  std::vector<PipelineInput> inputs;
  bool morph_used = false;
  for (const std::string& path : o.inputs) {
    PipelineConfig per = cfg;
    // A single segmentation file can only accompany a single corpus.
    if (morph_used) per.morph_path.clear();
    inputs.push_back(load_input(path, per));
    morph_used = true;
  }
  if (o.inputs.size() > 1 && !o.morph_file.empty()) {
    throw Error("--morph-file supports exactly one input corpus");
  }
  return inputs;
}

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> orders;
  const std::size_t dash = text.find('-');
  if (dash != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dash));
    const int hi = std::stoi(text.substr(dash + 1));
    for (int k = lo; k <= hi; ++k) orders.push_back(k);
    return orders;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    if (comma > start) orders.push_back(std::stoi(text.substr(start, comma - start)));
    if (comma == text.size()) break;
    start = comma + 1;
  }
  return orders;
}

void print_drops(const DropHistogram& drops) {
  std::fprintf(stderr, "dropped %llu characters of %zu distinct kinds\n",
               static_cast<unsigned long long>(drops.total),
               drops.dropped.size());
  for (const auto& [c, n] : drops.dropped) {
    std::fprintf(stderr, "  U+%04X x%llu\n", static_cast<unsigned>(c),
                 static_cast<unsigned long long>(n));
  }
}

// Writes through a guard that removes the file if this run fails later.
struct OutputGuard {
  std::vector<std::string> paths;
  bool armed = true;
  void wrote(const std::string& p) { paths.push_back(p); }
  void commit() { armed = false; }
  ~OutputGuard() {
    if (!armed) return;
    for (const std::string& p : paths) std::remove(p.c_str());
  }
};

int cmd_undot(const std::string& in_path, const std::string& out_path,
              bool overrides, bool report_drops) {
  const std::string text = read_file(in_path);
  std::size_t bad = 0;
  if (!validate_utf8(text, &bad)) {
    throw Error(in_path + ": invalid UTF-8 at offset " + std::to_string(bad));
  }
  DropHistogram drops;
  std::string out;
  const std::vector<std::string> lines = split_lines(text);
  for (const std::string& line : lines) {
    const std::string norm =
        preprocess(line, LanguageMode::arabic, report_drops ? &drops : nullptr);
    out += undot(norm, overrides);
    out += '\n';
  }
  write_file(out_path, out);
  if (report_drops) print_drops(drops);
  std::fprintf(stderr, "undotted %zu lines -> %s\n", lines.size(),
               out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dotless Arabic text analysis toolkit"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // --- alphabet dump ---
  auto* alphabet_cmd = app.add_subcommand("alphabet", "character inventory");
  auto* dump_cmd = alphabet_cmd->add_subcommand(
      "dump", "write the letter inventory and rasm mapping as JSON");
  std::string dump_out;
  dump_cmd->add_option("-o,--output", dump_out, "output file (default stdout)");
  alphabet_cmd->require_subcommand(1);

  // --- undot ---
  auto* undot_cmd =
      app.add_subcommand("undot", "preprocess and undot a text file");
  std::string undot_in, undot_out;
  bool undot_no_overrides = false, undot_drops = false;
  undot_cmd->add_option("input", undot_in, "input text file")
      ->required()
      ->check(CLI::ExistingFile);
  undot_cmd->add_option("-o,--output", undot_out, "output file")->required();
  undot_cmd->add_flag("--no-positional-overrides", undot_no_overrides,
                      "undot strictly by the letter table");
  undot_cmd->add_flag("--report-drops", undot_drops,
                      "print a dropped-character histogram to stderr");

  // --- tokenize ---
  auto* tok_cmd = app.add_subcommand("tokenize", "tokenize a corpus");
  std::string tok_in, tok_scheme = "word", tok_out, tok_vocab;
  std::string tok_morph, tok_delim = "+";
  bool tok_dotless = false, tok_latin = false;
  tok_cmd->add_option("input", tok_in, "input corpus")->required()->check(
      CLI::ExistingFile);
  tok_cmd->add_option("--scheme", tok_scheme, "word|char|disjoint|morph");
  tok_cmd->add_option("--tokens-out", tok_out, "one token per line");
  tok_cmd->add_option("--vocab-tsv", tok_vocab, "(id, token, frequency) table");
  tok_cmd->add_flag("--dotless", tok_dotless, "tokenize the undotted text");
  tok_cmd->add_flag("--latin", tok_latin, "Latin-script mode");
  tok_cmd->add_option("--morph-file", tok_morph, "segmented companion corpus");
  tok_cmd->add_option("--morph-delimiter", tok_delim, "subword delimiter");

  // --- stats / compare / laws ---
  CommonOpts stats_opts;
  auto* stats_cmd =
      app.add_subcommand("stats", "vocabulary, entropy and length statistics");
  add_common(stats_cmd, stats_opts);
  bool stats_no_curves = false;
  stats_cmd->add_flag("--no-ratio-curves", stats_no_curves,
                      "skip the dotless/dotted vocabulary ratio curves");

  CommonOpts compare_opts;
  auto* compare_cmd = app.add_subcommand(
      "compare", "side-by-side dotted vs dotless comparison report");
  add_common(compare_cmd, compare_opts);

  CommonOpts laws_opts;
  auto* laws_cmd =
      app.add_subcommand("laws", "Zipf and Heap law fits with plot data");
  add_common(laws_cmd, laws_opts);
  std::size_t heap_points = 64;
  std::uint64_t zipf_min_freq = 0;
  laws_cmd->add_option("--heap-points", heap_points,
                       "log-spaced sample points for the Heap fit");
  laws_cmd->add_option("--min-freq,--zipf-min-freq", zipf_min_freq,
                       "exclude types rarer than this from the Zipf fit");

  // --- lm-train ---
  auto* train_cmd =
      app.add_subcommand("lm-train", "train one Kneser-Ney n-gram model");
  std::string train_in, train_scheme = "word", train_out, train_bin;
  std::string train_morph, train_delim = "+";
  int train_order = 3;
  bool train_simple = false, train_dotless = false, train_latin = false;
  bool train_no_overrides = false;
  double train_discount = 0.75;
  double train_coverage = 0.0;
  train_cmd->add_option("input", train_in, "training corpus")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--scheme", train_scheme, "word|char|disjoint|morph");
  train_cmd->add_option("--order", train_order, "n-gram order (2-6)");
  train_cmd->add_flag("--kn-simple", train_simple,
                      "single fixed discount instead of modified KN");
  train_cmd->add_option("--discount", train_discount,
                        "fixed discount for --kn-simple and fallbacks");
  train_cmd->add_option(
      "--vocab-coverage", train_coverage,
      "keep only the types covering this fraction of the running text, "
      "rewriting the rest to <unk> (0 = full vocabulary)");
  train_cmd->add_flag("--dotless", train_dotless, "train on undotted text");
  train_cmd->add_flag("--latin", train_latin, "Latin-script mode");
  train_cmd->add_flag("--no-positional-overrides", train_no_overrides,
                      "undot strictly by the letter table");
  train_cmd->add_option("--morph-file", train_morph, "segmented companion");
  train_cmd->add_option("--morph-delimiter", train_delim, "subword delimiter");
  train_cmd->add_option("-o,--output", train_out, "ARPA text model")
      ->required();
  train_cmd->add_option("--binary", train_bin, "also write a binary cache");

  // --- lm-eval ---
  auto* eval_cmd = app.add_subcommand(
      "lm-eval", "evaluate a model file, or sweep orders over a corpus");
  std::string eval_model, eval_test, eval_scheme = "word", eval_report;
  std::string eval_orders = "2-6";
  bool eval_no_eos = false;
  CommonOpts eval_opts;
  eval_cmd->add_option("--model", eval_model,
                       "trained model (.arpa or binary cache)");
  eval_cmd->add_option("--test", eval_test, "held-out test corpus");
  eval_cmd->add_option("--scheme", eval_scheme,
                       "tokenization for --model/--test mode");
  eval_cmd->add_option("--report", eval_report,
                       "write the single-model report JSON here");
  eval_cmd->add_option("--orders", eval_orders,
                       "orders for sweep mode, e.g. 2-6 or 2,4,6");
  eval_cmd->add_flag("--no-score-eos", eval_no_eos,
                     "do not score the end-of-sample token");
  eval_cmd->add_option("input", eval_opts.inputs,
                       "corpus file(s) for sweep mode");
  eval_cmd->add_flag("--latin", eval_opts.latin, "Latin-script mode");
  eval_cmd->add_option("--schemes", eval_opts.schemes,
                       "sweep schemes, comma list");
  eval_cmd->add_flag("--dotted-only", eval_opts.dotted_only, "");
  eval_cmd->add_flag("--dotless-only", eval_opts.dotless_only, "");
  eval_cmd->add_flag("--no-positional-overrides", eval_opts.no_overrides, "");
  eval_cmd->add_flag("--split-on-sentence-dot", eval_opts.split_dots, "");
  eval_cmd->add_option("--morph-file", eval_opts.morph_file, "");
  eval_cmd->add_option("--morph-delimiter", eval_opts.morph_delimiter, "");
  eval_cmd->add_option("--min-tokens", eval_opts.min_tokens, "");
  eval_cmd->add_option("--max-tokens", eval_opts.max_tokens, "");
  eval_cmd->add_option("--threads", eval_opts.threads, "");
  eval_cmd->add_option("-o,--out-dir", eval_opts.out_dir,
                       "output directory for sweep mode");
  double eval_train_frac = 0.9, eval_valid_frac = 0.0, eval_test_frac = 0.1;
  std::uint64_t eval_seed = 42;
  bool eval_no_shuffle = false, eval_simple = false;
  double eval_coverage = 0.0;
  eval_cmd->add_option("--vocab-coverage", eval_coverage,
                       "training-vocabulary coverage cutoff for sweep mode");
  eval_cmd->add_option("--train-fraction", eval_train_frac, "");
  eval_cmd->add_option("--valid-fraction", eval_valid_frac, "");
  eval_cmd->add_option("--test-fraction", eval_test_frac, "");
  eval_cmd->add_option("--seed", eval_seed, "split seed");
  eval_cmd->add_flag("--no-shuffle", eval_no_shuffle,
                     "sequential prefix split instead of a seeded shuffle");
  eval_cmd->add_flag("--kn-simple", eval_simple, "fixed-discount smoothing");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dump_cmd->parsed()) {
      const std::string doc = dump_alphabet_json();
      if (dump_out.empty()) {
        std::fputs(doc.c_str(), stdout);
      } else {
        write_file(dump_out, doc);
      }
      return 0;
    }

    if (undot_cmd->parsed()) {
      return cmd_undot(undot_in, undot_out, !undot_no_overrides, undot_drops);
    }

    if (tok_cmd->parsed()) {
      const LanguageMode mode =
          tok_latin ? LanguageMode::latin : LanguageMode::arabic;
      Corpus raw = load_corpus(tok_in, mode);
      Corpus prep = preprocess_corpus(raw);
      if (tok_dotless && !tok_morph.empty()) {
        throw Error("--dotless with --morph-file: undotting applies to the "
                    "stream, not the file; omit --dotless and undot the "
                    "stream downstream");
      }
      const Scheme scheme = scheme_from_name(tok_scheme);
      TokenStream stream;
      if (scheme == Scheme::morph) {
        stream = load_morph_segmentation(tok_morph, tok_delim, prep);
      } else {
        stream = tokenize(tok_dotless ? undot_corpus(prep) : prep, scheme);
      }
      OutputGuard guard;
      if (!tok_out.empty()) {
        write_tokens(stream, tok_out);
        guard.wrote(tok_out);
      }
      if (!tok_vocab.empty()) {
        write_vocab_tsv(build_vocab(stream), tok_vocab);
        guard.wrote(tok_vocab);
      }
      guard.commit();
      std::fprintf(stderr, "%zu tokens, %zu distinct\n", stream.size(),
                   stream.pool.size());
      return 0;
    }

    if (stats_cmd->parsed() || compare_cmd->parsed() || laws_cmd->parsed()) {
      CommonOpts& o = stats_cmd->parsed()
                          ? stats_opts
                          : (compare_cmd->parsed() ? compare_opts : laws_opts);
      PipelineConfig cfg = to_config(o);
      if (stats_cmd->parsed()) cfg.ratio_curves = !stats_no_curves;
      if (laws_cmd->parsed()) {
        cfg.heap_points = heap_points;
        cfg.zipf_min_freq = zipf_min_freq;
      }
      const std::vector<PipelineInput> inputs = load_inputs(o, cfg);
      const ArtifactMap artifacts = laws_cmd->parsed()
                                        ? run_laws(inputs, cfg)
                                        : run_stats(inputs, cfg);
      write_artifacts(artifacts, cfg, o.out_dir);
      std::fprintf(stderr, "wrote %zu artifacts to %s\n", artifacts.size() + 1,
                   o.out_dir.c_str());
      return 0;
    }

    if (train_cmd->parsed()) {
      const LanguageMode mode =
          train_latin ? LanguageMode::latin : LanguageMode::arabic;
      Corpus prep = preprocess_corpus(load_corpus(train_in, mode));
      const Scheme scheme = scheme_from_name(train_scheme);
      TokenStream stream;
      if (scheme == Scheme::morph) {
        stream = load_morph_segmentation(train_morph, train_delim, prep);
        if (train_dotless) stream = undot_stream(stream, !train_no_overrides);
      } else {
        stream = tokenize(
            train_dotless ? undot_corpus(prep, !train_no_overrides) : prep,
            scheme);
      }
      if (train_coverage > 0.0 && train_coverage < 1.0) {
        stream = apply_vocab_coverage(stream, train_coverage);
      }
      const NgramCounts counts(stream, train_order);
      const NgramModel model = estimate_kn(
          counts, train_order,
          train_simple ? Smoothing::simple_kn : Smoothing::modified_kn,
          train_discount);
      OutputGuard guard;
      write_arpa(model, train_out);
      guard.wrote(train_out);
      if (!train_bin.empty()) {
        to_arpa_model(model).save_binary(train_bin);
        guard.wrote(train_bin);
      }
      guard.commit();
      std::fprintf(stderr, "order-%d model over %zu tokens -> %s\n",
                   train_order, stream.size(), train_out.c_str());
      return 0;
    }

    if (eval_cmd->parsed()) {
      if (!eval_model.empty()) {
        if (eval_test.empty()) throw Error("--model requires --test");
        const ArpaModel model = ArpaModel::load(eval_model);
        Corpus prep = preprocess_corpus(
            load_corpus(eval_test, eval_opts.latin ? LanguageMode::latin
                                                   : LanguageMode::arabic));
        const TokenStream stream =
            tokenize(prep, scheme_from_name(eval_scheme));
        const EvalReport r = model.perplexity(stream, !eval_no_eos);
        nlohmann::ordered_json j;
        j["ppl"] = r.ppl;
        j["scored_tokens"] = r.token_count;
        j["oov_tokens"] = r.oov_tokens;
        j["oov_types"] = r.oov_types;
        j["total_log_prob_nats"] = r.total_log_prob;
        const std::string doc = j.dump(2) + "\n";
        if (eval_report.empty()) {
          std::fputs(doc.c_str(), stdout);
        } else {
          write_file(eval_report, doc);
        }
        return 0;
      }
      if (eval_opts.inputs.empty() || eval_opts.out_dir.empty()) {
        throw Error("sweep mode needs input corpora and --out-dir");
      }
      PipelineConfig cfg = to_config(eval_opts);
      cfg.orders = parse_orders(eval_orders);
      cfg.split.train_fraction = eval_train_frac;
      cfg.split.validation_fraction = eval_valid_frac;
      cfg.split.test_fraction = eval_test_frac;
      cfg.split.seed = eval_seed;
      cfg.split.shuffle = !eval_no_shuffle;
      cfg.score_eos = !eval_no_eos;
      cfg.smoothing =
          eval_simple ? Smoothing::simple_kn : Smoothing::modified_kn;
      cfg.vocab_coverage = eval_coverage;
      const std::vector<PipelineInput> inputs = load_inputs(eval_opts, cfg);
      const ArtifactMap artifacts = run_lm(inputs, cfg);
      write_artifacts(artifacts, cfg, eval_opts.out_dir);
      std::fprintf(stderr, "wrote %zu artifacts to %s\n", artifacts.size() + 1,
                   eval_opts.out_dir.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
