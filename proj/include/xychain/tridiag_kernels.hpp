#pragma once

#include <span>

#include "xychain/chain_model.hpp"
#include "xychain/spectrum.hpp"

namespace xychain {

// View of the tridiagonal sub-block H_{i,j} (1-based, inclusive) of a larger
// matrix given by its diagonal and coupling arrays. first == last + 1 is the
// empty block, whose determinant is 1.
class SubBlockRef {
 public:
  SubBlockRef(std::span<const double> diag, std::span<const double> offdiag, int first, int last);
  SubBlockRef(const ChainArrays& arrays, int first, int last);

  [[nodiscard]] int first() const { return first_; }
  [[nodiscard]] int last() const { return last_; }
  [[nodiscard]] int size() const { return last_ - first_ + 1; }

  // Local 1-based accessors: diag_at(1) is the entry at global site `first`.
  [[nodiscard]] double diag_at(int s) const { return diag_[first_ + s - 2]; }
  // Coupling between local sites s and s+1.
  [[nodiscard]] double coupling_at(int s) const { return offdiag_[first_ + s - 2]; }

  // Local 1-based sub-range [s, t]; t == s - 1 gives an empty block.
  [[nodiscard]] SubBlockRef slice(int s, int t) const;

  [[nodiscard]] double scale() const;

 private:
  std::span<const double> diag_;
  std::span<const double> offdiag_;
  int first_;
  int last_;
};

// Eigenpairs of the n x n uniform tridiagonal matrix with diagonal a and
// off-diagonal c: a + 2c cos(pi j/(n+1)) with sine eigenvectors. Requires
// c != 0 and n >= 1.
Spectrum homogeneous_eigenpairs(int n, double a, double c);

// det(H_{i,j} - lambda I) by the three-term recurrence. Blocks larger than
// kMaxRawDeterminantSize are rejected; use principal_minor_logdet for those.
inline constexpr int kMaxRawDeterminantSize = 64;
double principal_minor_det(const SubBlockRef& block, double lambda);

// Polynomial value and derivative in lambda of det(H_{i,j} - lambda I).
struct DetWithDerivative {
  double value = 1.0;
  double derivative = 0.0;
};
DetWithDerivative principal_minor_det_with_derivative(const SubBlockRef& block, double lambda);

// sign * exp(log_abs); sign is 0 for an exactly vanishing determinant.
struct SignedLog {
  int sign = 1;
  double log_abs = 0.0;
};
SignedLog principal_minor_logdet(const SubBlockRef& block, double lambda);

// Entry (s, t) of adj(H_{i,j} - lambda I), local 1-based indices.
double adjugate_entry(const SubBlockRef& block, double lambda, int s, int t);

// Entry (s, t) of (H_{i,j} - lambda I)^{-1}. Throws SingularResolventError
// when |det| <= 1e-13 * scale^size.
double resolvent_entry(const SubBlockRef& block, double lambda, int s, int t);

// Number of eigenvalues of the tridiagonal matrix strictly below lambda,
// from the signs of the LDL^T pivots.
int sturm_count(std::span<const double> diag, std::span<const double> offdiag, double lambda);
int sturm_count(const ChainArrays& arrays, double lambda);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval gershgorin_bounds(std::span<const double> diag, std::span<const double> offdiag);

// Solve (T - shift I) x = b in place by Gaussian elimination with partial
// pivoting. Exactly zero pivots are replaced by eps * (|shift| + scale), so
// the call also serves inverse iteration at an eigenvalue.
void solve_shifted(std::span<const double> diag, std::span<const double> offdiag, double shift,
                   std::span<double> b);

}  // namespace xychain
