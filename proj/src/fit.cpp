#include "rasm/fit.hpp"

#include <cmath>
#include <cstdio>

#include "rasm/util.hpp"

namespace rasm {

LinearFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error("OLS needs at least two (x, y) pairs");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw Error("OLS is degenerate: all x identical");

  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - (fit.intercept + fit.slope * x[i]);
      ss_res += e * e;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

ZipfFit zipf_fit_frequencies(std::span<const double> frequencies) {
  if (frequencies.size() < 3) {
    throw Error("Zipf fit needs at least 3 ranks");
  }
  std::vector<double> lx, ly;
  lx.reserve(frequencies.size());
  ly.reserve(frequencies.size());
  ZipfFit fit;
  fit.points.reserve(frequencies.size());
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    const double rank = static_cast<double>(i + 1);
    fit.points.emplace_back(rank, frequencies[i]);
    lx.push_back(std::log2(rank));
    ly.push_back(std::log2(frequencies[i]));
  }
  const LinearFit lin = ols(lx, ly);
  fit.alpha = -lin.slope;
  fit.intercept_log2 = lin.intercept;
  fit.r_squared = lin.r_squared;
  fit.c = frequencies[0];
  return fit;
}

ZipfFit zipf_fit(const VocabTable& vocab, std::uint64_t min_freq) {
  std::vector<double> freqs;
  freqs.reserve(vocab.entries.size());
  for (const auto& [tok, f] : vocab.entries) {
    if (f < min_freq) break;  // entries are frequency-descending
    freqs.push_back(static_cast<double>(f));
  }
  return zipf_fit_frequencies(freqs);
}

HeapFit heap_fit_points(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw Error("Heap fit needs at least 3 points");
  std::vector<double> lx, ly;
  lx.reserve(points.size());
  ly.reserve(points.size());
  HeapFit fit;
  fit.points.assign(points.begin(), points.end());
  for (const auto& [n, v] : points) {
    lx.push_back(std::log2(n));
    ly.push_back(std::log2(v));
  }
  const LinearFit lin = ols(lx, ly);
  fit.beta = lin.slope;
  fit.k = std::exp2(lin.intercept);
  fit.r_squared = lin.r_squared;
  if (!(fit.beta > 0.0 && fit.beta <= 1.0)) {
    std::fprintf(stderr,
                 "warning: Heap exponent beta = %g outside (0, 1]; natural "
                 "corpora grow sublinearly\n",
                 fit.beta);
  }
  return fit;
}

HeapFit heap_fit(const TokenStream& stream, std::size_t sample_points,
                 std::size_t min_n) {
  const std::size_t n = stream.size();
  if (sample_points < 3) throw Error("Heap fit needs at least 3 sample points");
  if (n < sample_points || n < min_n) {
    throw Error("stream too short for the requested Heap sampling");
  }

  // Log-spaced prefix lengths in [min_n, n], deduplicated.
  std::vector<std::size_t> marks;
  marks.reserve(sample_points);
  const double lo = std::log(static_cast<double>(min_n));
  const double hi = std::log(static_cast<double>(n));
  for (std::size_t j = 0; j < sample_points; ++j) {
    const double t = sample_points == 1
                         ? hi
                         : lo + (hi - lo) * static_cast<double>(j) /
                                   static_cast<double>(sample_points - 1);
    auto mark = static_cast<std::size_t>(std::llround(std::exp(t)));
    mark = std::min(std::max<std::size_t>(mark, min_n), n);
    if (marks.empty() || mark > marks.back()) marks.push_back(mark);
  }

  std::vector<std::pair<double, double>> points;
  points.reserve(marks.size());
  std::vector<bool> seen(stream.pool.size(), false);
  std::size_t distinct = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n && next < marks.size(); ++i) {
    if (!seen[stream.ids[i]]) {
      seen[stream.ids[i]] = true;
      ++distinct;
    }
    while (next < marks.size() && i + 1 == marks[next]) {
      points.emplace_back(static_cast<double>(i + 1),
                          static_cast<double>(distinct));
      ++next;
    }
  }
  if (points.size() >= 2 && points.front().second == points.back().second &&
      points.front().second == 1.0) {
    throw Error("constant vocabulary: V(n) = 1 at every sampled prefix");
  }
  return heap_fit_points(points);
}

std::string zipf_plot_csv(const ZipfFit& fit) {
  std::string out = "rank,freq,fit_freq\n";
  for (const auto& [rank, freq] : fit.points) {
    const double fitted =
        std::exp2(fit.intercept_log2 - fit.alpha * std::log2(rank));
    out += fmt_double(rank) + "," + fmt_double(freq) + "," +
           fmt_double(fitted) + "\n";
  }
  return out;
}

std::string heap_plot_csv(const HeapFit& fit) {
  std::string out = "n,V,fit_V\n";
  for (const auto& [n, v] : fit.points) {
    const double fitted = fit.k * std::pow(n, fit.beta);
    out += fmt_double(n) + "," + fmt_double(v) + "," + fmt_double(fitted) +
           "\n";
  }
  return out;
}

void emit_plot_data(const ZipfFit& fit, const std::string& path) {
  write_file(path, zipf_plot_csv(fit));
}

void emit_plot_data(const HeapFit& fit, const std::string& path) {
  write_file(path, heap_plot_csv(fit));
}

}  // namespace rasm
