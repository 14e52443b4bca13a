#pragma once

#include <span>
#include <vector>

namespace nsgal {

/// Running trapezoid integral of g over the sample times t; out[0] = 0.
inline std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> g) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (g[i] + g[i - 1]);
  return out;
}

inline double trapezoid(std::span<const double> t, std::span<const double> g) {
  double sum = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) sum += 0.5 * (t[i] - t[i - 1]) * (g[i] + g[i - 1]);
  return sum;
}

}  // namespace nsgal
