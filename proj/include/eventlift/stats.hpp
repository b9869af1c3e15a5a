#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "eventlift/errors.hpp"

namespace eventlift {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw validation_error("mean of empty vector");
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Sample variance (n-1 denominator); 0 for fewer than two points.
inline double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

/// Linear-interpolation percentile on a sorted vector (the common "type 7"
/// definition: h = (n-1)p, interpolate between floor and ceil order stats).
inline double percentile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw validation_error("percentile of empty vector");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  size_t lo = static_cast<size_t>(h);
  double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  return percentile_sorted(v, p);
}

// --- deterministic seed derivation -----------------------------------------

inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t fnv1a64(const std::string& s, uint64_t h = 1469598103934665603ull) {
  return fnv1a64(s.data(), s.size(), h);
}

/// Stable per-task seed: independent of scheduling, platform, and build.
inline uint64_t derive_seed(uint64_t global_seed, const std::string& a,
                            const std::string& b = {}, const std::string& c = {}) {
  uint64_t h = fnv1a64(&global_seed, sizeof(global_seed));
  h = fnv1a64(a + "\x1f" + b + "\x1f" + c, h);
  return h ? h : 0x9e3779b97f4a7c15ull;
}

}  // namespace eventlift
