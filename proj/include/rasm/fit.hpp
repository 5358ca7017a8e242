#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rasm/stats.hpp"

namespace rasm {

/// Ordinary least squares of y on x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};
LinearFit ols(std::span<const double> x, std::span<const double> y);

/// Rank-frequency power-law fit: log2 F(r) regressed on log2 r over ranks
/// 1..V (frequency descending, ties lexicographic). alpha = -slope; C is
/// the frequency of the rank-1 type.
struct ZipfFit {
  double alpha = 0.0;
  double c = 0.0;  // F(1)
  double intercept_log2 = 0.0;
  double r_squared = 1.0;
  std::vector<std::pair<double, double>> points;  // (rank, frequency)
};

/// Requires at least 3 ranks.
ZipfFit zipf_fit(const VocabTable& vocab, std::uint64_t min_freq = 0);
/// Core fit on raw frequencies already in rank order (rank = index + 1).
ZipfFit zipf_fit_frequencies(std::span<const double> frequencies);

/// Vocabulary-growth fit: log2 V(n) regressed on log2 n, with V(n) measured
/// at `sample_points` positions spaced uniformly in log n.
struct HeapFit {
  double k = 0.0;
  double beta = 0.0;
  double r_squared = 1.0;
  std::vector<std::pair<double, double>> points;  // (n, V(n))
};

/// `min_n` restricts sampling to prefixes of at least that many tokens.
/// Throws on a constant-vocabulary stream (V(n) = 1 everywhere).
HeapFit heap_fit(const TokenStream& stream, std::size_t sample_points = 64,
                 std::size_t min_n = 1);
/// Core fit on measured (n, V(n)) points.
HeapFit heap_fit_points(std::span<const std::pair<double, double>> points);

/// Plot data as CSV: observed points plus the fitted line.
/// Zipf columns: rank,freq,fit_freq. Heap columns: n,V,fit_V.
std::string zipf_plot_csv(const ZipfFit& fit);
std::string heap_plot_csv(const HeapFit& fit);
void emit_plot_data(const ZipfFit& fit, const std::string& path);
void emit_plot_data(const HeapFit& fit, const std::string& path);

}  // namespace rasm
