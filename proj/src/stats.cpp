#include "equibench/stats.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "equibench/parallel.hpp"

namespace equibench {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DegenerateNoise: return "degenerate-noise";
    case ErrorCode::DegenerateSignal: return "degenerate-signal";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::NoRealRoot: return "no-real-root";
    case ErrorCode::SizeCap: return "size-cap";
    case ErrorCode::NotImplemented: return "not-implemented";
  }
  return "unknown";
}

int resolve_threads(std::optional<int> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("EQUIBENCH_THREADS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<Index> argsort(VectorRef v) {
  std::vector<Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return v[a] < v[b]; });
  return order;
}

Vector mid_ranks(VectorRef v) {
  const auto order = argsort(v);
  const Index n = v.size();
  Vector ranks(n);
  for (Index start = 0; start < n;) {
    Index stop = start + 1;
    while (stop < n && v[order[stop]] == v[order[start]]) ++stop;
    const double rank = 0.5 * static_cast<double>(start + stop - 1) + 1.0;
    for (Index k = start; k < stop; ++k) ranks[order[k]] = rank;
    start = stop;
  }
  return ranks;
}

std::vector<Index> min_ranks(VectorRef v) {
  const auto order = argsort(v);
  const Index n = v.size();
  std::vector<Index> ranks(static_cast<std::size_t>(n));
  for (Index start = 0; start < n;) {
    Index stop = start + 1;
    while (stop < n && v[order[stop]] == v[order[start]]) ++stop;
    for (Index k = start; k < stop; ++k) ranks[order[k]] = start;
    start = stop;
  }
  return ranks;
}

double mean(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, std::min(p, centre - half)), std::min(1.0, std::max(p, centre + half))};
}

std::pair<std::size_t, std::size_t> binomial_central_interval(std::size_t trials, double p, double level) {
  const double tail = 0.5 * (1.0 - level);
  // pmf by recurrence in log space
  std::vector<double> pmf(trials + 1);
  const double lp = std::log(p), lq = std::log1p(-p);
  for (std::size_t k = 0; k <= trials; ++k) {
    const double logc = std::lgamma(static_cast<double>(trials) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                        std::lgamma(static_cast<double>(trials - k) + 1.0);
    pmf[k] = std::exp(logc + static_cast<double>(k) * lp + static_cast<double>(trials - k) * lq);
  }
  std::size_t lo = 0;
  double below = 0.0;
  while (lo < trials && below + pmf[lo] <= tail) below += pmf[lo++];
  std::size_t hi = trials;
  double above = 0.0;
  while (hi > 0 && above + pmf[hi] <= tail) above += pmf[hi--];
  return {lo, hi};
}

}  // namespace equibench
