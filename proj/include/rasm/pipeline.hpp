#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rasm/corpus.hpp"
#include "rasm/fit.hpp"
#include "rasm/lm.hpp"
#include "rasm/stats.hpp"

namespace rasm {

inline constexpr std::string_view kToolVersion = "rasm 0.1.0";

/// Resolved configuration of one pipeline run; echoed into run.json.
struct PipelineConfig {
  std::vector<std::string> corpus_paths;  // informational when in-memory
  LanguageMode mode = LanguageMode::arabic;
  std::vector<Scheme> schemes{Scheme::word, Scheme::character,
                              Scheme::disjoint};
  bool run_dotted = true;
  bool run_dotless = true;
  bool positional_overrides = true;
  bool split_sentence_dots = false;
  // Concatenate all inputs (in argument order) into one corpus named
  // "aggregated" instead of reporting them separately.
  bool aggregate = false;

  std::string morph_path;        // segmented companion (morph scheme)
  std::string morph_delimiter = "+";

  bool ratio_curves = true;      // stats/compare: emit percent curves
  std::size_t heap_points = 64;  // laws
  std::uint64_t zipf_min_freq = 0;

  std::vector<int> orders{2, 3, 4, 5, 6};  // lm sweep
  SplitSpec split;
  bool score_eos = true;
  Smoothing smoothing = Smoothing::modified_kn;
  double fixed_discount = 0.75;
  double vocab_coverage = 0.0;  // 0 = full vocabulary
  std::size_t min_tokens = 0;  // sample length filter
  std::size_t max_tokens = kUnbounded;

  int threads = 1;

  std::string to_json() const;
};

/// A corpus plus its optional line-aligned morphological segmentation.
struct PipelineInput {
  Corpus corpus;                  // raw (not yet preprocessed)
  std::vector<std::string> morph_lines;
};

/// All artifacts of one run, keyed by output file name. Writing them is the
/// caller's job; keeping them in memory makes determinism checks and tests
/// exact.
using ArtifactMap = std::map<std::string, std::string>;

PipelineInput load_input(const std::string& path, const PipelineConfig& cfg);

/// Descriptive-statistics pipeline: per (corpus, scheme, dottedness) a row
/// of V, N, V/N%, H, S, S(10%); dotted-vs-dotless comparison rows; ratio
/// curves. Emits stats.tsv, comparison.tsv, stats.json and per-combination
/// ratio CSVs.
ArtifactMap run_stats(const std::vector<PipelineInput>& inputs,
                      const PipelineConfig& cfg);

/// Zipf/Heap fits per combination plus plot CSVs
/// (fits.tsv, fits.json, *.zipf.csv, *.heap.csv).
ArtifactMap run_laws(const std::vector<PipelineInput>& inputs,
                     const PipelineConfig& cfg);

/// N-gram sweep: split, train orders, evaluate. Emits ppl_by_order.csv,
/// oov.tsv, lm.json and the split corpora (<name>.train.txt etc).
ArtifactMap run_lm(const std::vector<PipelineInput>& inputs,
                   const PipelineConfig& cfg);

/// run.json payload (resolved config + tool version), byte-stable.
std::string run_manifest(const PipelineConfig& cfg);

/// Writes every artifact under `dir` (created if needed), plus run.json.
/// On failure removes whatever this call already wrote before rethrowing.
void write_artifacts(const ArtifactMap& artifacts, const PipelineConfig& cfg,
                     const std::string& dir);

}  // namespace rasm
