#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "xychain/chain_model.hpp"

namespace xychain {

struct RandomSpecRanges {
  int k_min = 3, k_max = 6;
  int n_min = 2, n_max = 40;
  double omega_max = 2.0;              // omega ~ U[-omega_max, omega_max]
  double coupling_min = 0.1, coupling_max = 2.0;  // |D| ~ U[min, max], random sign
};

// Random kn-1 spec drawn from `ranges`.
PeriodicChainSpec random_periodic_spec(std::mt19937_64& rng, const RandomSpecRanges& ranges = {});

// `count` specs from a fixed seed; identical across runs.
std::vector<PeriodicChainSpec> random_periodic_specs(std::uint64_t seed, int count,
                                                     const RandomSpecRanges& ranges = {});

// N sites with zero Larmor offsets and random couplings, for MQ checks.
ChainArrays random_mq_chain(std::mt19937_64& rng, int sites, const RandomSpecRanges& ranges = {});

}  // namespace xychain
