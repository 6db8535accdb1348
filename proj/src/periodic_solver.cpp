#include "xychain/periodic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "xychain/errors.hpp"

namespace xychain {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Characteristic polynomial of a tridiagonal block in ascending powers.
std::vector<double> minor_polynomial(std::span<const double> diag,
                                     std::span<const double> couplings) {
  std::vector<double> prev{1.0};
  if (diag.empty()) return prev;
  std::vector<double> cur{diag[0], -1.0};
  for (std::size_t s = 1; s < diag.size(); ++s) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t p = 0; p < cur.size(); ++p) {
      next[p] += diag[s] * cur[p];
      next[p + 1] -= cur[p];
    }
    const double e2 = couplings[s - 1] * couplings[s - 1];
    for (std::size_t p = 0; p < prev.size(); ++p) next[p] -= e2 * prev[p];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// Three real roots of x^3 + b x^2 + c x + d by the trigonometric formula,
// ascending. Assumes distinct real roots; the caller polishes and checks.
std::vector<double> trig_cubic(double b, double c, double d) {
  const double shift = -b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  if (!(p < 0.0)) return {shift, shift, shift};
  const double r = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::clamp(1.5 * q / p * std::sqrt(-3.0 / p), -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  std::vector<double> roots(3);
  for (int m = 0; m < 3; ++m) {
    roots[m] = shift + r * std::cos(phi - 2.0 * std::numbers::pi * m / 3.0);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

template <class F>
double polish_newton(F&& f_and_df, double x, int steps) {
  auto [f, df] = f_and_df(x);
  for (int it = 0; it < steps && f != 0.0 && df != 0.0; ++it) {
    const double candidate = x - f / df;
    const auto [fc, dfc] = f_and_df(candidate);
    if (!(std::abs(fc) < std::abs(f))) break;
    x = candidate;
    f = fc;
    df = dfc;
  }
  return x;
}

void parallel_for(int count, int threads, const std::function<void(int, int)>& body) {
  if (threads == 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::clamp(threads, 1, std::max(count, 1));
  if (threads == 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(body, begin, end);
  }
  for (auto& th : pool) th.join();
}

// Inverse iteration on the full chain, started from `seed`.
std::vector<double> refine_by_inverse_iteration(const ChainArrays& arrays, double lambda,
                                                std::vector<double> x) {
  for (int it = 0; it < 3; ++it) {
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0 || !std::isfinite(norm)) {
      std::fill(x.begin(), x.end(), 1.0);
      norm = std::sqrt(static_cast<double>(x.size()));
    }
    for (double& v : x) v /= norm;
    solve_shifted(arrays.diag, arrays.offdiag, lambda, x);
  }
  return x;
}

double vector_residual(const ChainArrays& arrays, const Eigen::VectorXd& u, double lambda) {
  Eigen::VectorXd hu(u.size());
  apply_tridiagonal(arrays, u.data(), hu.data());
  return (hu - lambda * u).cwiseAbs().maxCoeff();
}

// Normalise, sign-fix and, if the closed form is inaccurate, replace by
// inverse iteration seeded with the closed-form vector.
void store_column(const ChainArrays& arrays, double lambda, std::vector<double> v, bool degenerate,
                  Eigen::Ref<Eigen::VectorXd> column) {
  const double scale = arrays.scale();
  Eigen::Map<Eigen::VectorXd> mapped(v.data(), static_cast<Eigen::Index>(v.size()));
  const double norm = mapped.norm();
  bool ok = !degenerate && norm > 0.0 && std::isfinite(norm);
  Eigen::VectorXd u;
  if (ok) {
    u = mapped / norm;
    ok = vector_residual(arrays, u, lambda) <= 1e-11 * scale;
  }
  if (!ok) {
    std::vector<double> refined = refine_by_inverse_iteration(arrays, lambda, std::move(v));
    Eigen::Map<Eigen::VectorXd> r(refined.data(), static_cast<Eigen::Index>(refined.size()));
    Eigen::VectorXd candidate = r / r.norm();
    if (u.size() == 0 || vector_residual(arrays, candidate, lambda) < vector_residual(arrays, u, lambda)) {
      u = std::move(candidate);
    }
  }
  normalise_sign(u);
  column = u;
}

std::vector<double> sine_vector(int length, int j, int denominator) {
  std::vector<double> s(length);
  const double h = std::numbers::pi * j / denominator;
  for (int m = 1; m <= length; ++m) s[m - 1] = std::sin(h * m);
  return s;
}

void require_periodic(const PeriodicChainSpec& spec, ResidueForm form, const char* who) {
  const ValidationReport report = validate_spec(spec);
  if (!report.ok()) throw ValidationError(report.failures());
  if (spec.form != form) {
    throw ValidationError(std::string(who) + ": spec has form " + to_string(spec.form));
  }
  if (spec.k < 3) throw ValidationError(std::string(who) + ": closed form requires k ≥ 3");
}

}  // namespace

double PeriodCell::scale() const {
  double d = 0.0;
  double e = 0.0;
  for (double v : diag) d = std::max(d, std::abs(v));
  for (double v : couplings) e = std::max(e, std::abs(v));
  return d + 2.0 * e;
}

double PeriodCell::coupling_product() const {
  double p = 1.0;
  for (double v : couplings) p *= v;
  return p;
}

PeriodCell make_cell(const PeriodicChainSpec& spec) {
  if (spec.form == ResidueForm::explicit_sites) {
    throw ValidationError("closed form requires periodic form");
  }
  PeriodCell cell;
  cell.diag.resize(spec.omega.size());
  for (std::size_t r = 0; r < spec.omega.size(); ++r) cell.diag[r] = 2.0 * spec.omega[r];
  cell.couplings = spec.couplings;
  return cell;
}

DetWithDerivative reduced_characteristic_with_derivative(const PeriodCell& cell, double lambda) {
  const int k = cell.k();
  if (k < 3) throw ValidationError("reduced characteristic requires k ≥ 3");
  const auto full = principal_minor_det_with_derivative(cell.block(1, k), lambda);
  const auto inner = principal_minor_det_with_derivative(cell.block(2, k - 1), lambda);
  const double dk2 = cell.couplings[k - 1] * cell.couplings[k - 1];
  return {full.value - dk2 * inner.value, full.derivative - dk2 * inner.derivative};
}

double reduced_characteristic(const PeriodCell& cell, double lambda) {
  return reduced_characteristic_with_derivative(cell, lambda).value;
}

std::vector<double> reduced_characteristic_coefficients(const PeriodCell& cell) {
  const int k = cell.k();
  if (k < 3) throw ValidationError("reduced characteristic requires k ≥ 3");
  std::span<const double> diag(cell.diag);
  std::span<const double> cpl(cell.couplings);
  std::vector<double> full = minor_polynomial(diag, cpl.first(k - 1));
  const std::vector<double> inner = minor_polynomial(diag.subspan(1, k - 2), cpl.subspan(1, k - 3));
  const double dk2 = cell.couplings[k - 1] * cell.couplings[k - 1];
  for (std::size_t p = 0; p < inner.size(); ++p) full[p] -= dk2 * inner[p];
  return full;
}

ReducedEquation::ReducedEquation(PeriodCell cell) : cell_(std::move(cell)), scale_(cell_.scale()) {
  const int k = cell_.k();
  if (k < 3) throw ValidationError("reduced characteristic requires k ≥ 3");
  for (double d : cell_.couplings) {
    if (d == 0.0) throw ValidationError("reduced characteristic requires nonzero couplings");
  }

  // Band edges are the eigenvalues of the k-site ring closed by +D_k or -D_k.
  for (double sign : {1.0, -1.0}) {
    Eigen::MatrixXd ring = Eigen::MatrixXd::Zero(k, k);
    for (int r = 0; r < k; ++r) ring(r, r) = cell_.diag[r];
    for (int r = 0; r + 1 < k; ++r) ring(r, r + 1) = ring(r + 1, r) = cell_.couplings[r];
    ring(0, k - 1) = ring(k - 1, 0) = sign * cell_.couplings[k - 1];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ring, Eigen::EigenvaluesOnly);
    for (int r = 0; r < k; ++r) edges_.push_back(solver.eigenvalues()(r));
  }
  std::sort(edges_.begin(), edges_.end());

  if (k == 3) {
    // Coefficients of P about the mean diagonal so the quadratic term vanishes.
    PeriodCell centred = cell_;
    const double mean = (cell_.diag[0] + cell_.diag[1] + cell_.diag[2]) / 3.0;
    for (double& a : centred.diag) a -= mean;
    coefficients_ = reduced_characteristic_coefficients(centred);
    coefficients_.push_back(mean);  // remembered shift
  }
}

double ReducedEquation::rhs(int denominator, int j) const {
  const double sign = (cell_.k() % 2 == 0) ? 1.0 : -1.0;
  return sign * 2.0 * cell_.coupling_product() * std::cos(std::numbers::pi * j / denominator);
}

std::vector<double> ReducedEquation::roots(double rhs) const {
  return cell_.k() == 3 ? cubic_roots(rhs) : bracketed_roots(rhs);
}

std::vector<double> ReducedEquation::cubic_roots(double rhs) const {
  // P(x + mean) = -x^3 + c1 x + c0 (c2 ~ 0 after centring).
  const double mean = coefficients_[4];
  const double lead = coefficients_[3];
  const std::vector<double> shifted = trig_cubic(coefficients_[2] / lead, coefficients_[1] / lead,
                                                 (coefficients_[0] - rhs) / lead);
  const double tol = 1e-12 * std::pow(scale_, 3);
  auto f = [&](double x) {
    const auto p = reduced_characteristic_with_derivative(cell_, x);
    return std::pair{p.value - rhs, p.derivative};
  };
  std::vector<double> out(3);
  std::vector<double> fallback;
  for (int b = 0; b < 3; ++b) {
    double x = polish_newton(f, shifted[b] + mean, 3);
    const double lo = b == 0 ? -std::numeric_limits<double>::infinity()
                             : 0.5 * (edges_[2 * b - 1] + edges_[2 * b]);
    const double hi = b == 2 ? std::numeric_limits<double>::infinity()
                             : 0.5 * (edges_[2 * b + 1] + edges_[2 * b + 2]);
    if (!(x > lo && x < hi) || !(std::abs(f(x).first) <= tol)) {
      if (fallback.empty()) fallback = bracketed_roots(rhs);
      x = fallback[b];
    }
    out[b] = x;
  }
  return out;
}

std::vector<double> ReducedEquation::bracketed_roots(double rhs) const {
  const int k = cell_.k();
  const double tol = 1e-12 * std::pow(scale_, k);
  const double margin = 1e-3 * scale_ + std::numeric_limits<double>::min();
  std::vector<double> out(k);
  for (int b = 0; b < k; ++b) {
    double lo = b == 0 ? edges_[0] - margin : 0.5 * (edges_[2 * b - 1] + edges_[2 * b]);
    double hi = b == k - 1 ? edges_[2 * k - 1] + margin : 0.5 * (edges_[2 * b + 1] + edges_[2 * b + 2]);
    const double f_lo = reduced_characteristic(cell_, lo) - rhs;
    const double f_hi = reduced_characteristic(cell_, hi) - rhs;
    if (f_lo == 0.0) {
      out[b] = lo;
      continue;
    }
    if (f_hi == 0.0) {
      out[b] = hi;
      continue;
    }
    if ((f_lo > 0) == (f_hi > 0)) {
      throw RootRefinementError("band " + std::to_string(b) + " bracket does not change sign");
    }
    const bool lo_positive = f_lo > 0;
    double x = 0.5 * (edges_[2 * b] + edges_[2 * b + 1]);
    x = std::clamp(x, lo, hi);
    double step_prev = hi - lo;
    for (int it = 0; it < 200; ++it) {
      const auto p = reduced_characteristic_with_derivative(cell_, x);
      const double f = p.value - rhs;
      if (f == 0.0) break;
      if ((f > 0) == lo_positive) {
        lo = x;
      } else {
        hi = x;
      }
      double next = x - f / p.derivative;
      const bool newton_ok = std::isfinite(next) && next > lo && next < hi &&
                             std::abs(next - x) < 0.5 * step_prev;
      if (!newton_ok) next = 0.5 * (lo + hi);
      step_prev = std::abs(next - x);
      x = next;
      if (step_prev <= 2.0 * kEps * std::max(std::abs(x), scale_) || hi - lo <= 2.0 * kEps * std::max(std::abs(x), scale_)) {
        break;
      }
    }
    const double residual = std::abs(reduced_characteristic(cell_, x) - rhs);
    if (!(residual <= tol)) {
      throw RootRefinementError("root in band " + std::to_string(b) + " stalled at residual " +
                                std::to_string(residual));
    }
    out[b] = x;
  }
  return out;
}

std::vector<double> branch_roots(const PeriodCell& cell, int denominator, int j) {
  if (j < 1 || j >= denominator) {
    throw std::out_of_range("branch_roots: j = " + std::to_string(j) + " outside 1.." +
                            std::to_string(denominator - 1));
  }
  const ReducedEquation equation(cell);
  return equation.roots(equation.rhs(denominator, j));
}

std::vector<double> head_block_eigenvalues(const PeriodCell& cell) {
  const int k = cell.k();
  if (k < 3) throw ValidationError("head block requires k ≥ 3");
  if (k == 3) {
    const double mid = 0.5 * (cell.diag[0] + cell.diag[1]);
    const double half = 0.5 * (cell.diag[0] - cell.diag[1]);
    const double r = std::hypot(half, cell.couplings[0]);
    return {mid - r, mid + r};
  }
  std::span<const double> diag(cell.diag.data(), k - 1);
  std::span<const double> cpl(cell.couplings.data(), k - 2);
  const Interval box = gershgorin_bounds(diag, cpl);
  const double width = std::max(box.hi - box.lo, std::numeric_limits<double>::min());
  std::vector<double> out(k - 1);
  for (int i = 0; i < k - 1; ++i) {
    double lo = box.lo - 1e-3 * width;
    double hi = box.hi + 1e-3 * width;
    for (int it = 0; it < 200 && hi - lo > 2.0 * kEps * std::max({std::abs(lo), std::abs(hi), width}); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sturm_count(diag, cpl, mid) > i) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out[i] = 0.5 * (lo + hi);
  }
  return out;
}

std::vector<double> ReducedComponents::interleave() const {
  const std::size_t k = components.size();
  std::size_t total = 0;
  for (const auto& c : components) total += c.size();
  std::vector<double> out(total);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t m = 0; m < components[r].size(); ++m) out[m * k + r] = components[r][m];
  }
  return out;
}

std::optional<ReducedComponents> assemble_polynomial_branch_vector(const PeriodCell& cell, int n,
                                                                   double lambda, int j) {
  const int k = cell.k();
  if (k < 3) throw ValidationError("closed form requires k ≥ 3");
  if (j < 1 || j > n - 1) throw std::out_of_range("sine index outside 1..n-1");

  const SubBlockRef head = cell.block(1, k - 1);
  const double det = principal_minor_det(head, lambda);
  const std::vector<double> s = sine_vector(n - 1, j, n);
  const double dk = cell.couplings[k - 1];
  const double dk1 = cell.couplings[k - 2];

  ReducedComponents out;
  out.j = j;
  out.components.resize(k);
  double largest = 0.0;
  // (D_k^T s)[m] = D_k s[m-1], (D_{k-1}^T s)[m] = D_{k-1} s[m] (1-based, zero outside 1..n-1).
  for (int r = 1; r <= k - 1; ++r) {
    const double via_next = -adjugate_entry(head, lambda, r, 1) * dk;
    const double via_prev = -adjugate_entry(head, lambda, r, k - 1) * dk1;
    auto& comp = out.components[r - 1];
    comp.resize(n);
    for (int m = 1; m <= n; ++m) {
      const double shifted = m >= 2 ? s[m - 2] : 0.0;
      const double aligned = m <= n - 1 ? s[m - 1] : 0.0;
      comp[m - 1] = via_next * shifted + via_prev * aligned;
      largest = std::max(largest, std::abs(comp[m - 1]));
    }
  }
  auto& last = out.components[k - 1];
  last.resize(n - 1);
  for (int m = 0; m < n - 1; ++m) {
    last[m] = det * s[m];
    largest = std::max(largest, std::abs(last[m]));
  }
  const double floor = 1e-8 * std::pow(cell.scale(), k - 1);
  if (!(largest > floor)) return std::nullopt;
  return out;
}

ReducedComponents assemble_head_branch_vector(const PeriodCell& cell, int n, double lambda) {
  const int k = cell.k();
  if (k < 3) throw ValidationError("closed form requires k ≥ 3");
  const SubBlockRef head = cell.block(1, k - 1);

  // First column of adj(H_{1,k-1} - lambda): an eigenvector of the head block.
  std::vector<double> shape(k - 1);
  for (int r = 1; r <= k - 1; ++r) shape[r - 1] = adjugate_entry(head, lambda, r, 1);

  // D_k u_(1)[m+1] + D_{k-1} u_(k-1)[m] = 0 makes u_(1) geometric.
  const double num = -cell.couplings[k - 2] * shape[k - 2];
  const double den = cell.couplings[k - 1] * shape[0];
  std::vector<double> g(n, 1.0);
  if (std::abs(num) <= std::abs(den)) {
    const double ratio = num / den;
    for (int m = 1; m < n; ++m) g[m] = g[m - 1] * ratio;
  } else {
    const double inverse = den / num;
    for (int m = n - 1; m-- > 0;) g[m] = g[m + 1] * inverse;
  }

  ReducedComponents out;
  out.components.resize(k);
  for (int r = 0; r < k - 1; ++r) {
    auto& comp = out.components[r];
    comp.resize(n);
    for (int m = 0; m < n; ++m) comp[m] = shape[r] * g[m];
  }
  out.components[k - 1].assign(n - 1, 0.0);
  return out;
}

Spectrum solve_kn_minus_1(const PeriodicChainSpec& spec, const SolveOptions& options) {
  require_periodic(spec, ResidueForm::kn_minus_1, "solve_kn_minus_1");
  const int k = spec.k;
  const int n = spec.n;
  const int sites = k * n - 1;
  const PeriodCell cell = make_cell(spec);
  const ReducedEquation equation(cell);
  const ChainArrays arrays = expand_periodic(spec);

  Spectrum out;
  out.eigenvalues.resize(sites);
  out.branch_tags.resize(sites);
  if (options.vectors) out.eigenvectors.resize(sites, sites);

  // Slots (j-1)*k .. j*k-1 hold sine index j; the head block fills the tail.
  parallel_for(n - 1, options.threads, [&](int begin, int end) {
    for (int j = begin + 1; j <= end; ++j) {
      const std::vector<double> roots = equation.roots(equation.rhs(n, j));
      for (int b = 0; b < k; ++b) {
        const int slot = (j - 1) * k + b;
        out.eigenvalues[slot] = roots[b];
        out.branch_tags[slot] = {BranchKind::polynomial, j};
        if (!options.vectors) continue;
        const auto comps = assemble_polynomial_branch_vector(cell, n, roots[b], j);
        std::vector<double> v;
        if (comps) {
          v = comps->interleave();
        } else {
          v.assign(sites, 0.0);
          const auto s = sine_vector(n - 1, j, n);
          for (int m = 0; m < n - 1; ++m) v[m * k + (k - 1)] = s[m];
        }
        store_column(arrays, roots[b], std::move(v), !comps.has_value(), out.eigenvectors.col(slot));
      }
    }
  });

  const std::vector<double> head = head_block_eigenvalues(cell);
  for (int h = 0; h < k - 1; ++h) {
    const int slot = (n - 1) * k + h;
    out.eigenvalues[slot] = head[h];
    out.branch_tags[slot] = {BranchKind::head_block, 0};
    if (options.vectors) {
      store_column(arrays, head[h], assemble_head_branch_vector(cell, n, head[h]).interleave(), false,
                   out.eigenvectors.col(slot));
    }
  }

  sort_ascending(out);
  if (options.vectors) out.residual_max = max_residual(arrays, out);
  return out;
}

namespace {

// Cubic (lambda-a1)(lambda-a2)(lambda-a3) - (lambda-a2)D3^2 - (lambda-a1)D2^2
// - (lambda-a3)D1^2 - 2 D1 D2 D3 cos(theta), expanded about the mean diagonal.
struct ThreeSiteCubic {
  double mean = 0.0;
  double c1 = 0.0;  // x coefficient
  double c0 = 0.0;  // constant, without the cosine term
  double triple = 0.0;

  explicit ThreeSiteCubic(const PeriodCell& cell) {
    mean = (cell.diag[0] + cell.diag[1] + cell.diag[2]) / 3.0;
    const double a1 = cell.diag[0] - mean, a2 = cell.diag[1] - mean, a3 = cell.diag[2] - mean;
    const double d1 = cell.couplings[0], d2 = cell.couplings[1], d3 = cell.couplings[2];
    c1 = a1 * a2 + a1 * a3 + a2 * a3 - d1 * d1 - d2 * d2 - d3 * d3;
    c0 = -a1 * a2 * a3 + a2 * d3 * d3 + a1 * d2 * d2 + a3 * d1 * d1;
    triple = 2.0 * d1 * d2 * d3;
  }

  // Value and derivative at lambda, for the right-hand side cos(theta).
  [[nodiscard]] std::pair<double, double> at(double lambda, double cosine) const {
    const double x = lambda - mean;
    // x^3 + (a-sum = 0) x^2 + c1 x + c0 - triple cos
    return {((x * x) + c1) * x + c0 - triple * cosine, 3.0 * x * x + c1};
  }
};

}  // namespace

Spectrum solve_3n_plus_2(const PeriodicChainSpec& spec, const SolveOptions& options) {
  require_periodic(spec, ResidueForm::three_n_plus_2, "solve_3n_plus_2");
  const int n = spec.n;
  const int sites = 3 * n + 2;
  const PeriodCell cell = make_cell(spec);
  const ThreeSiteCubic cubic(cell);
  const ChainArrays arrays = expand_periodic(spec);
  const double a1 = cell.diag[0], a2 = cell.diag[1];
  const double d1 = cell.couplings[0], d2 = cell.couplings[1], d3 = cell.couplings[2];
  const double tol = 1e-12 * std::pow(cell.scale(), 3);
  std::optional<ReducedEquation> fallback;

  Spectrum out;
  out.eigenvalues.resize(sites);
  out.branch_tags.resize(sites);
  if (options.vectors) out.eigenvectors.resize(sites, sites);

  for (int j = 1; j <= n; ++j) {
    const double cosine = std::cos(std::numbers::pi * j / (n + 1));
    std::vector<double> roots = trig_cubic(0.0, cubic.c1, cubic.c0 - cubic.triple * cosine);
    bool ok = true;
    for (double& x : roots) {
      x = polish_newton([&](double y) { return cubic.at(y, cosine); }, x + cubic.mean, 3);
      ok = ok && std::abs(cubic.at(x, cosine).first) <= tol;
    }
    ok = ok && roots[0] < roots[1] && roots[1] < roots[2];
    if (!ok) {
      if (!fallback) fallback.emplace(cell);
      roots = fallback->roots(fallback->rhs(n + 1, j));
    }

    for (int b = 0; b < 3; ++b) {
      const int slot = (j - 1) * 3 + b;
      const double lambda = roots[b];
      out.eigenvalues[slot] = lambda;
      out.branch_tags[slot] = {BranchKind::polynomial, j};
      if (!options.vectors) continue;

      // u_(3) = sine vector; u_(1), u_(2) multiplied through by the quadratic.
      const std::vector<double> s = sine_vector(n, j, n + 1);
      const double quad = (lambda - a1) * (lambda - a2) - d1 * d1;
      ReducedComponents comps;
      comps.j = j;
      comps.components.resize(3);
      auto& u1 = comps.components[0];
      auto& u2 = comps.components[1];
      auto& u3 = comps.components[2];
      u1.resize(n + 1);
      u2.resize(n + 1);
      u3.resize(n);
      double largest = 0.0;
      for (int m = 1; m <= n + 1; ++m) {
        const double via_d2 = m <= n ? d2 * s[m - 1] : 0.0;  // (D_2^T s)[m]
        const double via_d3 = m >= 2 ? d3 * s[m - 2] : 0.0;  // (D_3^T s)[m]
        u1[m - 1] = (lambda - a2) * via_d3 + d1 * via_d2;
        u2[m - 1] = (lambda - a1) * via_d2 + d1 * via_d3;
        largest = std::max({largest, std::abs(u1[m - 1]), std::abs(u2[m - 1])});
      }
      for (int m = 0; m < n; ++m) {
        u3[m] = quad * s[m];
        largest = std::max(largest, std::abs(u3[m]));
      }
      const bool degenerate = !(largest > 1e-8 * std::pow(cell.scale(), 2));
      std::vector<double> v = comps.interleave();
      if (degenerate) {
        std::fill(v.begin(), v.end(), 0.0);
        for (int m = 0; m < n; ++m) v[m * 3 + 2] = s[m];
      }
      store_column(arrays, lambda, std::move(v), degenerate, out.eigenvectors.col(slot));
    }
  }

  // (lambda - 2 omega_1)(lambda - 2 omega_2) - D_1^2 = 0
  const double mid = 0.5 * (a1 + a2);
  const double radius = std::hypot(0.5 * (a1 - a2), d1);
  const double head[2] = {mid - radius, mid + radius};
  for (int h = 0; h < 2; ++h) {
    const int slot = 3 * n + h;
    const double lambda = head[h];
    out.eigenvalues[slot] = lambda;
    out.branch_tags[slot] = {BranchKind::head_block, 0};
    if (!options.vectors) continue;
    // u_(1) spans ker((lambda - a2) D_3 + D_1 D_2): x[m+1] (lambda - a2) D3 = -D1 D2 x[m].
    const double num = -d1 * d2;
    const double den = (lambda - a2) * d3;
    std::vector<double> g(n + 1, 1.0);
    if (std::abs(num) <= std::abs(den)) {
      for (int m = 1; m <= n; ++m) g[m] = g[m - 1] * (num / den);
    } else {
      for (int m = n; m-- > 0;) g[m] = g[m + 1] * (den / num);
    }
    ReducedComponents comps;
    comps.components = {std::vector<double>(n + 1), std::vector<double>(n + 1),
                        std::vector<double>(n, 0.0)};
    for (int m = 0; m <= n; ++m) {
      comps.components[0][m] = (lambda - a2) * g[m];  // u_(2) = D_1/(lambda - a2) u_(1)
      comps.components[1][m] = d1 * g[m];
    }
    store_column(arrays, lambda, comps.interleave(), false, out.eigenvectors.col(slot));
  }

  sort_ascending(out);
  if (options.vectors) out.residual_max = max_residual(arrays, out);
  return out;
}

Spectrum solve_periodic(const PeriodicChainSpec& spec, const SolveOptions& options) {
  switch (spec.form) {
    case ResidueForm::kn_minus_1:
      return solve_kn_minus_1(spec, options);
    case ResidueForm::three_n_plus_2:
      return solve_3n_plus_2(spec, options);
    case ResidueForm::explicit_sites:
      break;
  }
  throw ValidationError("closed form requires periodic form");
}

}  // namespace xychain
