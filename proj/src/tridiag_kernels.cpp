#include "xychain/tridiag_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "xychain/errors.hpp"

namespace xychain {

SubBlockRef::SubBlockRef(std::span<const double> diag, std::span<const double> offdiag, int first,
                         int last)
    : diag_(diag), offdiag_(offdiag), first_(first), last_(last) {
  const int n = static_cast<int>(diag.size());
  if (first < 1 || last > n || first > last + 1) {
    throw std::out_of_range("sub-block [" + std::to_string(first) + ", " + std::to_string(last) +
                            "] outside 1.." + std::to_string(n));
  }
  if (size() > 1 && static_cast<int>(offdiag.size()) < last - 1) {
    throw std::out_of_range("coupling array too short for sub-block");
  }
}

SubBlockRef::SubBlockRef(const ChainArrays& arrays, int first, int last)
    : SubBlockRef(arrays.diag, arrays.offdiag, first, last) {}

SubBlockRef SubBlockRef::slice(int s, int t) const {
  if (s < 1 || t > size() || s > t + 1) {
    throw std::out_of_range("slice [" + std::to_string(s) + ", " + std::to_string(t) +
                            "] outside block of size " + std::to_string(size()));
  }
  return SubBlockRef(diag_, offdiag_, first_ + s - 1, first_ + t - 1);
}

double SubBlockRef::scale() const {
  double d = 0.0;
  double e = 0.0;
  for (int s = 1; s <= size(); ++s) d = std::max(d, std::abs(diag_at(s)));
  for (int s = 1; s < size(); ++s) e = std::max(e, std::abs(coupling_at(s)));
  return d + 2.0 * e;
}

Spectrum homogeneous_eigenpairs(int n, double a, double c) {
  if (n < 1) throw std::invalid_argument("homogeneous_eigenpairs: n >= 1 required");
  if (c == 0.0) throw std::invalid_argument("homogeneous_eigenpairs: c != 0 required");

  Spectrum out;
  out.eigenvalues.resize(n);
  out.branch_tags.resize(n);
  out.eigenvectors.resize(n, n);
  const double h = std::numbers::pi / (n + 1);
  const double norm = std::sqrt(2.0 / (n + 1));
  for (int col = 0; col < n; ++col) {
    // cos is decreasing in j, so ascending order runs j = n..1 when c > 0.
    const int j = c > 0 ? n - col : col + 1;
    out.eigenvalues[col] = a + 2.0 * c * std::cos(h * j);
    out.branch_tags[col] = {BranchKind::homogeneous, j};
    for (int m = 1; m <= n; ++m) out.eigenvectors(m - 1, col) = norm * std::sin(h * m * j);
  }
  out.residual_max = 0.0;
  return out;
}

double principal_minor_det(const SubBlockRef& block, double lambda) {
  if (block.size() > kMaxRawDeterminantSize) {
    throw std::invalid_argument("principal_minor_det: block of size " +
                                std::to_string(block.size()) +
                                " exceeds raw limit; use principal_minor_logdet");
  }
  double prev = 1.0;  // empty block
  if (block.size() == 0) return prev;
  double cur = block.diag_at(1) - lambda;
  for (int s = 2; s <= block.size(); ++s) {
    const double e = block.coupling_at(s - 1);
    const double next = (block.diag_at(s) - lambda) * cur - e * e * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

DetWithDerivative principal_minor_det_with_derivative(const SubBlockRef& block, double lambda) {
  if (block.size() > kMaxRawDeterminantSize) {
    throw std::invalid_argument("principal_minor_det_with_derivative: block too large");
  }
  double p_prev = 1.0, dp_prev = 0.0;
  if (block.size() == 0) return {p_prev, dp_prev};
  double p = block.diag_at(1) - lambda, dp = -1.0;
  for (int s = 2; s <= block.size(); ++s) {
    const double e2 = block.coupling_at(s - 1) * block.coupling_at(s - 1);
    const double a = block.diag_at(s) - lambda;
    const double p_next = a * p - e2 * p_prev;
    const double dp_next = -p + a * dp - e2 * dp_prev;
    p_prev = p;
    dp_prev = dp;
    p = p_next;
    dp = dp_next;
  }
  return {p, dp};
}

SignedLog principal_minor_logdet(const SubBlockRef& block, double lambda) {
  constexpr double kHuge = 1e150;
  constexpr double kTiny = 1e-150;
  double prev = 1.0;
  if (block.size() == 0) return {1, 0.0};
  double cur = block.diag_at(1) - lambda;
  double log_scale = 0.0;
  for (int s = 2; s <= block.size(); ++s) {
    const double e = block.coupling_at(s - 1);
    const double next = (block.diag_at(s) - lambda) * cur - e * e * prev;
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(prev), std::abs(cur));
    if (mag > kHuge || (mag < kTiny && mag > 0.0)) {
      prev /= mag;
      cur /= mag;
      log_scale += std::log(mag);
    }
  }
  if (cur == 0.0) return {0, -std::numeric_limits<double>::infinity()};
  return {cur > 0 ? 1 : -1, log_scale + std::log(std::abs(cur))};
}

double adjugate_entry(const SubBlockRef& block, double lambda, int s, int t) {
  const int m = block.size();
  if (s < 1 || t < 1 || s > m || t > m) {
    throw std::out_of_range("adjugate_entry: index (" + std::to_string(s) + ", " +
                            std::to_string(t) + ") outside block of size " + std::to_string(m));
  }
  if (s > t) std::swap(s, t);
  if (s == t) {
    return principal_minor_det(block.slice(1, s - 1), lambda) *
           principal_minor_det(block.slice(s + 1, m), lambda);
  }
  double couplings = 1.0;
  for (int r = s; r < t; ++r) couplings *= block.coupling_at(r);
  const double sign = ((s + t) % 2 == 0) ? 1.0 : -1.0;
  return sign * principal_minor_det(block.slice(1, s - 1), lambda) * couplings *
         principal_minor_det(block.slice(t + 1, m), lambda);
}

double resolvent_entry(const SubBlockRef& block, double lambda, int s, int t) {
  const double det = principal_minor_det(block, lambda);
  const double threshold = 1e-13 * std::pow(block.scale(), block.size());
  if (std::abs(det) <= threshold) {
    throw SingularResolventError("resolvent_entry: lambda = " + std::to_string(lambda) +
                                 " is an eigenvalue of the block to working precision");
  }
  return adjugate_entry(block, lambda, s, t) / det;
}

int sturm_count(std::span<const double> diag, std::span<const double> offdiag, double lambda) {
  const std::size_t n = diag.size();
  if (n == 0) return 0;
  double max_e2 = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) max_e2 = std::max(max_e2, offdiag[i] * offdiag[i]);
  const double pivmin = std::numeric_limits<double>::min() * max_e2;

  int count = 0;
  double q = diag[0] - lambda;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    q = (diag[i] - lambda) - offdiag[i - 1] * offdiag[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
  }
  return count;
}

int sturm_count(const ChainArrays& arrays, double lambda) {
  return sturm_count(arrays.diag, arrays.offdiag, lambda);
}

Interval gershgorin_bounds(std::span<const double> diag, std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  if (n == 0) return {0.0, 0.0};
  Interval box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(offdiag[i - 1]);
    if (i + 1 < n) radius += std::abs(offdiag[i]);
    box.lo = std::min(box.lo, diag[i] - radius);
    box.hi = std::max(box.hi, diag[i] + radius);
  }
  return box;
}

void solve_shifted(std::span<const double> diag, std::span<const double> offdiag, double shift,
                   std::span<double> b) {
  const std::size_t n = diag.size();
  if (b.size() != n) throw std::invalid_argument("solve_shifted: size mismatch");
  if (n == 0) return;

  double scale = 0.0;
  for (double v : diag) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i + 1 < n; ++i) scale = std::max(scale, 2.0 * std::abs(offdiag[i]));
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(std::abs(shift) + scale, 1e-300);

  std::vector<double> d(n), du(n > 1 ? n - 1 : 0), dl(n > 1 ? n - 1 : 0), du2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) du[i] = dl[i] = offdiag[i];

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double f = dl[i] / d[i];
      d[i + 1] -= f * du[i];
      b[i + 1] -= f * b[i];
    } else {
      const double f = d[i] / dl[i];
      const double old_next = d[i + 1];
      d[i] = dl[i];
      d[i + 1] = du[i] - f * old_next;
      du[i] = old_next;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du2[i];
      }
      const double bi = b[i];
      b[i] = b[i + 1];
      b[i + 1] = bi - f * b[i];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;

  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  if (n >= 3) {
    for (std::size_t ii = n - 2; ii-- > 0;) {
      b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
    }
  }
}

}  // namespace xychain
