#pragma once

#include "xychain/chain_model.hpp"
#include "xychain/spectrum.hpp"

namespace xychain {

struct DenseOptions {
  bool vectors = true;
  // Eigenvalues closer than cluster_gap * scale are reorthogonalised
  // against each other during inverse iteration.
  double cluster_gap = 1e-3;
};

// Brute-force eigensolver for an arbitrary symmetric tridiagonal matrix
// (zero couplings allowed): Sturm bisection isolates each eigenvalue,
// safeguarded Newton on the determinant converges it, and inverse iteration
// gives the vectors. Knows nothing about periodic structure. Throws
// OracleError if inverse iteration does not converge.
Spectrum dense_eigensolve(const ChainArrays& arrays, const DenseOptions& options = {});

// Eigenvalues only.
std::vector<double> dense_eigenvalues(const ChainArrays& arrays);

}  // namespace xychain
