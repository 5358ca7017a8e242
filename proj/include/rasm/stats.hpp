#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rasm/tokenize.hpp"

namespace rasm {

/// Type -> frequency table for one (corpus, scheme, dottedness)
/// combination. Entries are ordered by frequency descending, ties broken
/// lexicographically by code point, which also defines token ids
/// (id = index).
struct VocabTable {
  Scheme scheme = Scheme::word;
  bool dotted = true;
  std::uint64_t total = 0;  // running-text token count N
  std::vector<std::pair<std::string, std::uint64_t>> entries;

  std::size_t vocab_size() const { return entries.size(); }
  bool contains(std::string_view token) const {
    return index_.find(token) != index_.end();
  }
  std::uint64_t frequency(std::string_view token) const {
    auto it = index_.find(token);
    return it == index_.end() ? 0 : entries[it->second].second;
  }

  /// Sorts entries and rebuilds the lookup index; called by the builders.
  void finalize();

 private:
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>>
      index_;
};

/// Exact frequency count over a stream. Throws on an empty stream.
VocabTable build_vocab(const TokenStream& stream, bool dotted = true);

/// Associative merge, for sharded counting: merge(build(a), build(b)) equals
/// build(a ++ b).
VocabTable merge_vocab(const VocabTable& a, const VocabTable& b);

/// Unigram entropy in bits/token: sum of -p log2 p over types, accumulated
/// in frequency-descending order.
double entropy(const VocabTable& vocab);

/// 1 - H/log2(V). Requires V > 1.
double redundancy(const VocabTable& vocab);
double redundancy_from(double entropy_bits, std::uint64_t vocab_size);

/// Mean code-point length over all types (S) and over the
/// ceil(top_fraction*V) most frequent types (S_top).
struct LengthProfile {
  double mean_all = 0.0;
  double mean_top = 0.0;
};
LengthProfile length_profile(const VocabTable& vocab, double top_fraction);

/// For each percent p: undot the top p% most frequent dotted types and
/// report distinct-dotless/selected-dotted. Types are undotted as standalone
/// words (exact for the word and disjoint schemes).
std::vector<std::pair<int, double>> dotless_ratio_curve(
    const VocabTable& dotted_vocab, const std::vector<int>& percents,
    bool positional_overrides = true);

/// Descriptive statistics for one table, mirroring the report columns.
struct StatsReport {
  Scheme scheme = Scheme::word;
  bool dotted = true;
  std::uint64_t vocab_size = 0;         // V
  std::uint64_t token_count = 0;        // N
  double v_over_n_pct = 0.0;            // V/N * 100
  double entropy_bits = 0.0;            // H
  double mean_length = 0.0;             // S
  double mean_length_top10 = 0.0;       // S(10%)
  std::optional<double> redundancy;     // absent when V <= 1
};

StatsReport make_stats_report(const VocabTable& vocab);

/// Dotted and dotless statistics side by side, for one corpus and scheme.
struct ComparisonRow {
  Scheme scheme = Scheme::word;
  std::uint64_t v_dotted = 0;
  std::uint64_t v_dotless = 0;
  double v_ratio_pct = 0.0;  // V'/V * 100
  std::uint64_t token_count = 0;
  double h_dotted = 0.0;
  double h_dotless = 0.0;
  double delta_h = 0.0;
  double s_dotted = 0.0;
  double s_dotless = 0.0;
};

/// Throws on scheme mismatch.
ComparisonRow compare_report(const StatsReport& dotted,
                             const StatsReport& dotless);

/// (id, token, frequency) rows, tab-separated.
void write_vocab_tsv(const VocabTable& vocab, const std::string& path);

}  // namespace rasm
