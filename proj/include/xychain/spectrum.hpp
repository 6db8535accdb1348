#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xychain/chain_model.hpp"

namespace xychain {

// Which construction produced an eigenpair.
enum class BranchKind {
  polynomial,   // root of the reduced characteristic equation for sine index j
  head_block,   // eigenvalue of the leading (k-1)x(k-1) block of the cell
  homogeneous,  // closed form of the uniform chain
  dense,        // brute-force oracle
};

struct BranchTag {
  BranchKind kind = BranchKind::dense;
  int j = 0;  // sine index for polynomial/homogeneous tags, 0 otherwise

  [[nodiscard]] std::string to_string() const;
  bool operator==(const BranchTag&) const = default;
};

// Ascending eigenvalues with unit eigenvectors in the matching columns.
// Eigenvectors may be absent (0x0) when only values were requested; then
// residual_max is NaN.
struct Spectrum {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::vector<BranchTag> branch_tags;
  double residual_max = std::numeric_limits<double>::quiet_NaN();

  [[nodiscard]] int size() const { return static_cast<int>(eigenvalues.size()); }
  [[nodiscard]] bool has_vectors() const { return eigenvectors.size() > 0; }
};

// y = H x for the tridiagonal H described by `arrays`.
void apply_tridiagonal(const ChainArrays& arrays, const double* x, double* y);

// Sort eigenpairs by eigenvalue, carrying columns and tags along.
void sort_ascending(Spectrum& spectrum);

// Flip the sign of `v` so that its first entry of largest magnitude is
// positive.
void normalise_sign(Eigen::Ref<Eigen::VectorXd> v);

// max over columns of ||H u - lambda u||_inf.
double max_residual(const ChainArrays& arrays, const Spectrum& spectrum);

// max |U^T U - I|.
double orthonormality_defect(const Eigen::MatrixXd& vectors);

struct VerificationReport {
  int size = 0;
  double scale = 0.0;
  double tolerance = 0.0;
  double max_residual = 0.0;        // absolute; NaN without vectors
  double orthonormality_defect = 0.0;  // NaN without vectors
  double min_gap = 0.0;             // absolute; +inf when N < 2
  bool residual_ok = true;
  bool orthonormality_ok = true;
  bool gap_ok = true;
  bool sturm_ok = true;
  int sturm_mismatches = 0;

  [[nodiscard]] bool ok() const { return residual_ok && orthonormality_ok && gap_ok && sturm_ok; }
};

// Residual <= tol*scale, orthonormality defect <= tol, strictly increasing
// eigenvalues, and the Sturm count at every midpoint between neighbours
// equal to the number of eigenvalues below it.
VerificationReport verify_spectrum(const ChainArrays& arrays, const Spectrum& spectrum,
                                   double tol = 1e-10);

}  // namespace xychain
