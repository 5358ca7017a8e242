#include "rasm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rasm/normalize.hpp"

namespace rasm {

void VocabTable::finalize() {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;  // UTF-8 byte order == code-point order
  });
  index_.clear();
  index_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    index_.emplace(entries[i].first, static_cast<std::uint32_t>(i));
  }
}

VocabTable build_vocab(const TokenStream& stream, bool dotted) {
  if (stream.size() == 0) throw Error("cannot build a vocabulary from an empty stream");
  // Counting by interned id is exact and avoids hashing every occurrence.
  std::vector<std::uint64_t> counts(stream.pool.size(), 0);
  for (std::uint32_t id : stream.ids) ++counts[id];

  VocabTable vocab;
  vocab.scheme = stream.scheme;
  vocab.dotted = dotted;
  vocab.total = stream.size();
  vocab.entries.reserve(stream.pool.size());
  for (std::size_t i = 0; i < stream.pool.size(); ++i) {
    if (counts[i] > 0) vocab.entries.emplace_back(stream.pool[i], counts[i]);
  }
  vocab.finalize();
  return vocab;
}

VocabTable merge_vocab(const VocabTable& a, const VocabTable& b) {
  if (a.scheme != b.scheme || a.dotted != b.dotted) {
    throw Error("cannot merge vocabularies of different schemes");
  }
  std::unordered_map<std::string, std::uint64_t, StringHash, std::equal_to<>>
      counts;
  counts.reserve(a.entries.size() + b.entries.size());
  for (const auto& [tok, n] : a.entries) counts[tok] += n;
  for (const auto& [tok, n] : b.entries) counts[tok] += n;

  VocabTable out;
  out.scheme = a.scheme;
  out.dotted = a.dotted;
  out.total = a.total + b.total;
  out.entries.assign(counts.begin(), counts.end());
  out.finalize();
  return out;
}

double entropy(const VocabTable& vocab) {
  if (vocab.total == 0) throw Error("entropy of an empty table");
  const double n = static_cast<double>(vocab.total);
  double h = 0.0;
  for (const auto& [tok, f] : vocab.entries) {
    const double p = static_cast<double>(f) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double redundancy_from(double entropy_bits, std::uint64_t vocab_size) {
  if (vocab_size <= 1) throw Error("redundancy requires V > 1");
  return 1.0 - entropy_bits / std::log2(static_cast<double>(vocab_size));
}

double redundancy(const VocabTable& vocab) {
  return redundancy_from(entropy(vocab), vocab.vocab_size());
}

LengthProfile length_profile(const VocabTable& vocab, double top_fraction) {
  if (vocab.entries.empty()) throw Error("length profile of an empty table");
  if (!(top_fraction > 0.0) || top_fraction > 1.0) {
    throw Error("top_fraction must lie in (0, 1]");
  }
  const std::size_t v = vocab.entries.size();
  const std::size_t top =
      std::min(v, static_cast<std::size_t>(
                      std::ceil(top_fraction * static_cast<double>(v))));
  LengthProfile profile;
  double sum = 0.0;
  for (std::size_t i = 0; i < v; ++i) {
    sum += static_cast<double>(utf8_length(vocab.entries[i].first));
    if (i + 1 == top) profile.mean_top = sum / static_cast<double>(top);
  }
  profile.mean_all = sum / static_cast<double>(v);
  return profile;
}

std::vector<std::pair<int, double>> dotless_ratio_curve(
    const VocabTable& dotted_vocab, const std::vector<int>& percents,
    bool positional_overrides) {
  const std::size_t v = dotted_vocab.entries.size();
  if (v == 0) throw Error("ratio curve of an empty table");

  // Undot each type once; prefix-distinct counts then answer every percent.
  // The character scheme's space stand-in is its own image.
  std::vector<std::string> images(v);
  for (std::size_t i = 0; i < v; ++i) {
    const std::string& type = dotted_vocab.entries[i].first;
    images[i] = type == kSpaceToken
                    ? type
                    : undot_word(type, positional_overrides);
  }

  std::vector<std::pair<int, double>> curve;
  curve.reserve(percents.size());
  std::vector<int> sorted_percents = percents;
  std::sort(sorted_percents.begin(), sorted_percents.end());

  std::unordered_set<std::string_view> distinct;
  std::size_t consumed = 0;
  for (int p : sorted_percents) {
    if (p < 1 || p > 100) throw Error("ratio-curve percent out of range");
    const auto want = static_cast<std::size_t>(
        std::ceil(static_cast<double>(p) / 100.0 * static_cast<double>(v)));
    while (consumed < want) {
      distinct.insert(images[consumed]);
      ++consumed;
    }
    curve.emplace_back(p, static_cast<double>(distinct.size()) /
                              static_cast<double>(want));
  }
  return curve;
}

StatsReport make_stats_report(const VocabTable& vocab) {
  StatsReport r;
  r.scheme = vocab.scheme;
  r.dotted = vocab.dotted;
  r.vocab_size = vocab.vocab_size();
  r.token_count = vocab.total;
  r.v_over_n_pct = 100.0 * static_cast<double>(r.vocab_size) /
                   static_cast<double>(r.token_count);
  r.entropy_bits = entropy(vocab);
  const LengthProfile lp = length_profile(vocab, 0.10);
  r.mean_length = lp.mean_all;
  r.mean_length_top10 = lp.mean_top;
  if (r.vocab_size > 1) r.redundancy = redundancy_from(r.entropy_bits, r.vocab_size);
  return r;
}

ComparisonRow compare_report(const StatsReport& dotted,
                             const StatsReport& dotless) {
  if (dotted.scheme != dotless.scheme) {
    throw Error("comparison requires matching tokenization schemes");
  }
  ComparisonRow row;
  row.scheme = dotted.scheme;
  row.v_dotted = dotted.vocab_size;
  row.v_dotless = dotless.vocab_size;
  row.v_ratio_pct = 100.0 * static_cast<double>(row.v_dotless) /
                    static_cast<double>(row.v_dotted);
  row.token_count = dotted.token_count;
  row.h_dotted = dotted.entropy_bits;
  row.h_dotless = dotless.entropy_bits;
  row.delta_h = dotted.entropy_bits - dotless.entropy_bits;
  row.s_dotted = dotted.mean_length;
  row.s_dotless = dotless.mean_length;
  return row;
}

void write_vocab_tsv(const VocabTable& vocab, const std::string& path) {
  std::string out = "id\ttoken\tfrequency\n";
  for (std::size_t i = 0; i < vocab.entries.size(); ++i) {
    out += std::to_string(i);
    out += '\t';
    out += vocab.entries[i].first;
    out += '\t';
    out += std::to_string(vocab.entries[i].second);
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace rasm
