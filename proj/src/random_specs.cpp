#include "xychain/random_specs.hpp"

#include <stdexcept>

namespace xychain {

namespace {

double random_coupling(std::mt19937_64& rng, const RandomSpecRanges& r) {
  std::uniform_real_distribution<double> magnitude(r.coupling_min, r.coupling_max);
  std::bernoulli_distribution negative(0.5);
  const double d = magnitude(rng);
  return negative(rng) ? -d : d;
}

}  // namespace

PeriodicChainSpec random_periodic_spec(std::mt19937_64& rng, const RandomSpecRanges& ranges) {
  if (ranges.coupling_min <= 0.0) throw std::invalid_argument("coupling_min must be positive");
  std::uniform_int_distribution<int> pick_k(ranges.k_min, ranges.k_max);
  std::uniform_int_distribution<int> pick_n(ranges.n_min, ranges.n_max);
  std::uniform_real_distribution<double> pick_omega(-ranges.omega_max, ranges.omega_max);
  PeriodicChainSpec spec;
  spec.k = pick_k(rng);
  spec.n = pick_n(rng);
  spec.form = ResidueForm::kn_minus_1;
  for (int r = 0; r < spec.k; ++r) spec.omega.push_back(pick_omega(rng));
  for (int r = 0; r < spec.k; ++r) spec.couplings.push_back(random_coupling(rng, ranges));
  return spec;
}

std::vector<PeriodicChainSpec> random_periodic_specs(std::uint64_t seed, int count, const RandomSpecRanges& ranges) {
  std::mt19937_64 rng(seed);
  std::vector<PeriodicChainSpec> out;
  out.reserve(count > 0 ? count : 0);
  for (int i = 0; i < count; ++i) out.push_back(random_periodic_spec(rng, ranges));
  return out;
}

ChainArrays random_mq_chain(std::mt19937_64& rng, int sites, const RandomSpecRanges& ranges) {
  if (sites < 1) throw std::invalid_argument("random_mq_chain: sites must be positive");
  ChainArrays arrays;
  arrays.diag.assign(sites, 0.0);
  for (int i = 0; i + 1 < sites; ++i) arrays.offdiag.push_back(random_coupling(rng, ranges));
  return arrays;
}

}  // namespace xychain
