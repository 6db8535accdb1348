#include "xychain/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "xychain/tridiag_kernels.hpp"

namespace xychain {

std::string BranchTag::to_string() const {
  switch (kind) {
    case BranchKind::polynomial:
      return "poly:" + std::to_string(j);
    case BranchKind::head_block:
      return "head";
    case BranchKind::homogeneous:
      return "homog:" + std::to_string(j);
    case BranchKind::dense:
      return "dense";
  }
  return "?";
}

void apply_tridiagonal(const ChainArrays& arrays, const double* x, double* y) {
  const int n = arrays.size();
  for (int i = 0; i < n; ++i) {
    double acc = arrays.diag[i] * x[i];
    if (i > 0) acc += arrays.offdiag[i - 1] * x[i - 1];
    if (i + 1 < n) acc += arrays.offdiag[i] * x[i + 1];
    y[i] = acc;
  }
}

void sort_ascending(Spectrum& spectrum) {
  const int n = spectrum.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return spectrum.eigenvalues[a] < spectrum.eigenvalues[b];
  });
  if (std::is_sorted(order.begin(), order.end())) return;

  std::vector<double> values(n);
  std::vector<BranchTag> tags(n);
  for (int i = 0; i < n; ++i) {
    values[i] = spectrum.eigenvalues[order[i]];
    tags[i] = spectrum.branch_tags[order[i]];
  }
  spectrum.eigenvalues = std::move(values);
  spectrum.branch_tags = std::move(tags);
  if (spectrum.has_vectors()) {
    Eigen::MatrixXd vectors(spectrum.eigenvectors.rows(), n);
    for (int i = 0; i < n; ++i) vectors.col(i) = spectrum.eigenvectors.col(order[i]);
    spectrum.eigenvectors = std::move(vectors);
  }
}

void normalise_sign(Eigen::Ref<Eigen::VectorXd> v) {
  if (v.size() == 0) return;
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  if (v(at) < 0) v = -v;
}

double max_residual(const ChainArrays& arrays, const Spectrum& spectrum) {
  if (!spectrum.has_vectors()) return std::numeric_limits<double>::quiet_NaN();
  const int n = arrays.size();
  std::vector<double> hv(n);
  double worst = 0.0;
  for (int col = 0; col < spectrum.size(); ++col) {
    const double* u = spectrum.eigenvectors.col(col).data();
    apply_tridiagonal(arrays, u, hv.data());
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(hv[i] - spectrum.eigenvalues[col] * u[i]));
    }
  }
  return worst;
}

double orthonormality_defect(const Eigen::MatrixXd& vectors) {
  if (vectors.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXd gram = vectors.transpose() * vectors;
  gram.diagonal().array() -= 1.0;
  return gram.cwiseAbs().maxCoeff();
}

VerificationReport verify_spectrum(const ChainArrays& arrays, const Spectrum& spectrum, double tol) {
  const int n = arrays.size();
  if (spectrum.size() != n) throw std::invalid_argument("verify_spectrum: dimension mismatch");
  if (spectrum.has_vectors() &&
      (spectrum.eigenvectors.rows() != n || spectrum.eigenvectors.cols() != n)) {
    throw std::invalid_argument("verify_spectrum: eigenvector matrix has wrong shape");
  }

  VerificationReport report;
  report.size = n;
  report.scale = arrays.scale();
  report.tolerance = tol;

  if (spectrum.has_vectors()) {
    report.max_residual = max_residual(arrays, spectrum);
    report.orthonormality_defect = orthonormality_defect(spectrum.eigenvectors);
    report.residual_ok = report.max_residual <= tol * report.scale;
    report.orthonormality_ok = report.orthonormality_defect <= tol;
  } else {
    report.max_residual = std::numeric_limits<double>::quiet_NaN();
    report.orthonormality_defect = std::numeric_limits<double>::quiet_NaN();
  }

  report.min_gap = std::numeric_limits<double>::infinity();
  for (int i = 1; i < n; ++i) {
    report.min_gap = std::min(report.min_gap, spectrum.eigenvalues[i] - spectrum.eigenvalues[i - 1]);
  }
  report.gap_ok = report.min_gap > 0.0;

  // Midpoints between neighbours, plus one point beyond each end.
  const double pad = std::max(report.scale, 1.0);
  for (int i = 0; i <= n; ++i) {
    double probe;
    if (n == 0) break;
    if (i == 0) {
      probe = spectrum.eigenvalues.front() - pad;
    } else if (i == n) {
      probe = spectrum.eigenvalues.back() + pad;
    } else {
      probe = 0.5 * (spectrum.eigenvalues[i - 1] + spectrum.eigenvalues[i]);
    }
    if (sturm_count(arrays, probe) != i) ++report.sturm_mismatches;
  }
  report.sturm_ok = report.sturm_mismatches == 0;
  return report;
}

}  // namespace xychain
