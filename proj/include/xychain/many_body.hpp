#pragma once

#include <vector>

#include <Eigen/Dense>

#include "xychain/chain_model.hpp"
#include "xychain/mq_dynamics.hpp"

namespace xychain {

inline constexpr int kMaxManyBodySites = 12;

// Dense operator on N spins-1/2. Basis state b has site s (1-based) up when
// bit N-s of b is set, so site 1 is the most significant bit.
struct ManyBodyState {
  int sites = 0;
  Eigen::MatrixXcd matrix;

  [[nodiscard]] int dim() const { return static_cast<int>(matrix.rows()); }
  // 2 * total I_z of basis state b (an integer in -N..N).
  [[nodiscard]] static int twice_total_iz(int sites, int basis_state);
  // Tr(rho_n rho_-n): squared weight of the matrix elements whose bra and
  // ket total I_z differ by `order`.
  [[nodiscard]] double order_weight(int order) const;
  [[nodiscard]] double hermiticity_defect() const;
};

// Total I_z, also the initial density operator.
ManyBodyState total_iz(int sites);

// (1/2) sum_n D_n (I+_n I+_{n+1} + I-_n I-_{n+1}) from the chain couplings;
// the diagonal of `arrays` is ignored.
ManyBodyState mq_hamiltonian(const ChainArrays& arrays);

struct ManyBodyIntensities {
  IntensitySeries series;           // G0 and G2 (= G-2)
  std::vector<double> g_minus2;     // G-2 separately
  double max_other_order = 0.0;     // largest weight in any order other than 0, +-2
  double max_purity_drift = 0.0;    // max |Tr rho(t)^2 - Tr rho(0)^2| / Tr rho(0)^2
};

// Exact evolution rho(t) = exp(-i H t) I_z exp(i H t) with H the MQ
// Hamiltonian. Intensities are normalised by Tr(I_z^2) = N 2^(N-2). The
// Hamiltonian conserves the staggered magnetisation sum_n (-1)^n I_{n,z},
// so each sector is diagonalised on its own. Throws CapacityError for
// N > kMaxManyBodySites, ValidationError for negative or non-finite times.
ManyBodyIntensities manybody_mq_intensities(const ChainArrays& arrays, const std::vector<double>& times);

}  // namespace xychain
