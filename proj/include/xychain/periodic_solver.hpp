#pragma once

#include <optional>
#include <vector>

#include "xychain/chain_model.hpp"
#include "xychain/spectrum.hpp"
#include "xychain/tridiag_kernels.hpp"

namespace xychain {

// One period of the chain: diag[r-1] = 2 omega_r and couplings[r-1] = D_r for
// r = 1..k. D_k joins the last site of a period to the first of the next.
struct PeriodCell {
  std::vector<double> diag;
  std::vector<double> couplings;

  [[nodiscard]] int k() const { return static_cast<int>(diag.size()); }
  [[nodiscard]] double scale() const;
  [[nodiscard]] double coupling_product() const;
  // H_{i,j} restricted to the cell, 1-based.
  [[nodiscard]] SubBlockRef block(int i, int j) const { return {diag, couplings, i, j}; }
};

PeriodCell make_cell(const PeriodicChainSpec& spec);

// P(lambda) = det(H_{1,k} - lambda) - D_k^2 det(H_{2,k-1} - lambda), a
// degree-k polynomial with leading coefficient (-1)^k. Requires k >= 3.
double reduced_characteristic(const PeriodCell& cell, double lambda);
DetWithDerivative reduced_characteristic_with_derivative(const PeriodCell& cell, double lambda);

// Coefficients of P in ascending powers of lambda (size k + 1).
std::vector<double> reduced_characteristic_coefficients(const PeriodCell& cell);

// Root solver for P(lambda) = rhs with |rhs| < 2|D_1...D_k|. Each such
// equation has exactly one root in each of the k bands where |P| <= 2|prod D|;
// the band edges are computed once on construction.
class ReducedEquation {
 public:
  explicit ReducedEquation(PeriodCell cell);

  [[nodiscard]] const PeriodCell& cell() const { return cell_; }
  // (-1)^k 2 D_1...D_k cos(pi j / denominator).
  [[nodiscard]] double rhs(int denominator, int j) const;
  // The k roots in ascending order, polished to |P - rhs| <= 1e-12 scale^k.
  [[nodiscard]] std::vector<double> roots(double rhs) const;
  // Sorted solutions of P = +-2|prod D| (2k values); band b is
  // [edges[2b], edges[2b+1]].
  [[nodiscard]] const std::vector<double>& band_edges() const { return edges_; }

 private:
  std::vector<double> cubic_roots(double rhs) const;
  std::vector<double> bracketed_roots(double rhs) const;

  PeriodCell cell_;
  double scale_;
  std::vector<double> coefficients_;
  std::vector<double> edges_;
};

// Roots of P(lambda) = (-1)^k 2 D_1...D_k cos(pi j / denominator). The kn-1
// chain uses denominator n with 1 <= j <= n-1; the 3n+2 chain uses n+1.
std::vector<double> branch_roots(const PeriodCell& cell, int denominator, int j);

// Eigenvalues of the (k-1)x(k-1) leading block H_{1,k-1}, ascending.
std::vector<double> head_block_eigenvalues(const PeriodCell& cell);

// Residue-class components u_(1)..u_(k) of an eigenvector. Component r holds
// the sites r, r+k, r+2k, ... (1-based).
struct ReducedComponents {
  std::vector<std::vector<double>> components;
  std::optional<int> j;

  [[nodiscard]] std::vector<double> interleave() const;
};

// Polynomial-branch eigenvector of the kn-1 chain for root lambda of sine
// index j: u_(k) is the sine vector and the other components follow from the
// resolvent of H_{1,k-1}. Components are returned multiplied through by
// det(H_{1,k-1} - lambda), so nothing is divided. std::nullopt signals that
// this product is too small to trust and inverse iteration should be used.
std::optional<ReducedComponents> assemble_polynomial_branch_vector(const PeriodCell& cell, int n,
                                                                   double lambda, int j);

// Head-block eigenvector of the kn-1 chain: u_(k) = 0 and u_(1) is the
// geometric kernel vector, other components proportional to it.
ReducedComponents assemble_head_branch_vector(const PeriodCell& cell, int n, double lambda);

struct SolveOptions {
  bool vectors = true;
  int threads = 1;  // 0 = hardware concurrency
};

// Full spectrum of a k-periodic chain with kn-1 sites (k >= 3).
Spectrum solve_kn_minus_1(const PeriodicChainSpec& spec, const SolveOptions& options = {});

// Full spectrum of a 3-periodic chain with 3n+2 sites, from n cubics and one
// quadratic.
Spectrum solve_3n_plus_2(const PeriodicChainSpec& spec, const SolveOptions& options = {});

// Dispatch on spec.form. Throws ValidationError for forms with no closed form
// (explicit, or k = 2).
Spectrum solve_periodic(const PeriodicChainSpec& spec, const SolveOptions& options = {});

}  // namespace xychain
