#include "xychain/mq_dynamics.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace xychain {

double pairwise_sum(const double* values, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += values[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

IntensitySeries trace_intensities(const std::vector<double>& eigenvalues, const std::vector<double>& times) {
  if (eigenvalues.empty()) throw std::invalid_argument("trace_intensities: empty eigenvalue list");
  const double n = static_cast<double>(eigenvalues.size());
  IntensitySeries out;
  out.times = times;
  out.G0.reserve(times.size());
  out.G2.reserve(times.size());
  std::vector<double> cosines(eigenvalues.size());
  for (double t : times) {
    for (std::size_t l = 0; l < eigenvalues.size(); ++l) cosines[l] = std::cos(2.0 * eigenvalues[l] * t);
    const double c = pairwise_sum(cosines.data(), cosines.size()) / n;
    // cos^2 = (1 + cos 2x)/2, sin^2 = (1 - cos 2x)/2
    out.G0.push_back(0.5 * (1.0 + c));
    out.G2.push_back(0.25 * (1.0 - c));
  }
  return out;
}

std::vector<double> uniform_time_grid(double t_max, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
  if (!std::isfinite(t_max) || t_max < 0.0) throw std::invalid_argument("t_max must be finite and non-negative");
  std::vector<double> times(steps);
  for (int i = 0; i < steps; ++i) {
    times[i] = steps == 1 ? 0.0 : t_max * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return times;
}

}  // namespace xychain
