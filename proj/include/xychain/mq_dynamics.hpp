#pragma once

#include <vector>

namespace xychain {

// Multiple-quantum coherence intensities sampled at `times`. G2 holds the
// common value of G_2 and G_-2.
struct IntensitySeries {
  std::vector<double> times;
  std::vector<double> G0;
  std::vector<double> G2;
};

// G0(t) = (1/N) sum_l cos^2(lambda_l t), G2(t) = (1/2N) sum_l sin^2(lambda_l t),
// with lambda_l the eigenvalues of the single-particle matrix with zero
// diagonal. Sums are pairwise. Throws std::invalid_argument for an empty
// eigenvalue list.
IntensitySeries trace_intensities(const std::vector<double>& eigenvalues, const std::vector<double>& times);

// steps points evenly spaced over [0, t_max], both ends included (a single
// step gives t = 0 only). Throws std::invalid_argument for steps < 1 or a
// negative or non-finite t_max.
std::vector<double> uniform_time_grid(double t_max, int steps);

// Pairwise (cascade) sum.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace xychain
