#include "xychain/dense_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "xychain/errors.hpp"
#include "xychain/tridiag_kernels.hpp"

namespace xychain {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Pivots {
  std::vector<double> d;
  std::vector<double> e2;  // e2[i] couples rows i-1 and i; e2[0] = 0
  double pivmin = 0.0;
};

Pivots make_pivots(const ChainArrays& arrays) {
  const int n = arrays.size();
  Pivots p;
  p.d = arrays.diag;
  p.e2.assign(n, 0.0);
  double max_e2 = 1.0;
  for (int i = 1; i < n; ++i) {
    p.e2[i] = arrays.offdiag[i - 1] * arrays.offdiag[i - 1];
    max_e2 = std::max(max_e2, p.e2[i]);
  }
  p.pivmin = std::numeric_limits<double>::min() * max_e2;
  return p;
}

// The recurrences run kStreams independent vectors of kWidth shifts side by
// side, so the divisions of one row overlap instead of waiting on each other.
#if defined(__AVX512F__)
constexpr int kWidth = 8;
#elif defined(__AVX__)
constexpr int kWidth = 4;
#else
constexpr int kWidth = 2;
#endif
constexpr int kStreams = kWidth == 8 ? 4 : 6;
constexpr int kLanes = kStreams * kWidth;
using LaneVec = double __attribute__((vector_size(kWidth * sizeof(double))));
using LaneMask = long long __attribute__((vector_size(kWidth * sizeof(long long))));

LaneVec guard_pivot(LaneVec q, double pivmin) {
  const LaneVec lo = LaneVec{} - pivmin;
  const LaneVec hi = LaneVec{} + pivmin;
  return (q > lo && q < hi) ? lo : q;
}

// Eigenvalue counts below each of kLanes shifts.
void count_below(const Pivots& p, const double* x, int* counts) {
  const std::size_t n = p.d.size();
  LaneVec shift[kStreams], q[kStreams];
  LaneMask c[kStreams];
  for (int s = 0; s < kStreams; ++s) {
    for (int l = 0; l < kWidth; ++l) shift[s][l] = x[s * kWidth + l];
    q[s] = LaneVec{} + 1.0;
    c[s] = LaneMask{};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double di = p.d[i];
    const double ei = p.e2[i];
    for (int s = 0; s < kStreams; ++s) {
      q[s] = guard_pivot((di - shift[s]) - ei / q[s], p.pivmin);
      c[s] -= q[s] < 0.0;
    }
  }
  for (int s = 0; s < kStreams; ++s) {
    for (int l = 0; l < kWidth; ++l) counts[s * kWidth + l] = static_cast<int>(c[s][l]);
  }
}

// Counts plus the Newton correction -det/det' at each of kLanes shifts.
void count_and_newton(const Pivots& p, const double* x, int* counts, double* step) {
  const std::size_t n = p.d.size();
  LaneVec shift[kStreams], r[kStreams], qp[kStreams], sum[kStreams];
  LaneMask c[kStreams];
  for (int s = 0; s < kStreams; ++s) {
    for (int l = 0; l < kWidth; ++l) shift[s][l] = x[s * kWidth + l];
    r[s] = qp[s] = sum[s] = LaneVec{};
    c[s] = LaneMask{};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double di = p.d[i];
    const double ei = p.e2[i];
    for (int s = 0; s < kStreams; ++s) {
      const LaneVec q = guard_pivot((di - shift[s]) - ei * r[s], p.pivmin);
      c[s] -= q < 0.0;
      qp[s] = ei * qp[s] * r[s] * r[s] - 1.0;
      r[s] = 1.0 / q;
      sum[s] += qp[s] * r[s];
    }
  }
  for (int s = 0; s < kStreams; ++s) {
    for (int l = 0; l < kWidth; ++l) {
      counts[s * kWidth + l] = static_cast<int>(c[s][l]);
      step[s * kWidth + l] = -1.0 / sum[s][l];
    }
  }
}

struct Bracket {
  double lo, hi;
  int below_lo, below_hi;  // eigenvalues below lo and below hi
};

// Split [lo, hi] until every bracket holds exactly one eigenvalue (or is
// too narrow to split further, for numerically coincident eigenvalues).
std::vector<Bracket> isolate(const Pivots& p, double lo, double hi, int n) {
  const double floor = 4.0 * kEps * std::max({std::abs(lo), std::abs(hi), 1e-300});
  std::vector<Bracket> done;
  std::vector<Bracket> work{{lo, hi, 0, n}};
  while (!work.empty()) {
    const int batch = std::min<int>(kLanes, static_cast<int>(work.size()));
    std::array<double, kLanes> mid{};
    std::array<int, kLanes> counts{};
    std::vector<Bracket> taken(work.end() - batch, work.end());
    work.resize(work.size() - batch);
    for (int l = 0; l < kLanes; ++l) {
      const Bracket& b = taken[std::min(l, batch - 1)];
      mid[l] = 0.5 * (b.lo + b.hi);
    }
    count_below(p, mid.data(), counts.data());
    for (int l = 0; l < batch; ++l) {
      const Bracket& b = taken[l];
      const Bracket left{b.lo, mid[l], b.below_lo, counts[l]};
      const Bracket right{mid[l], b.hi, counts[l], b.below_hi};
      for (const Bracket& part : {left, right}) {
        const int inside = part.below_hi - part.below_lo;
        if (inside == 0) continue;
        if (inside == 1 || part.hi - part.lo <= floor) {
          done.push_back(part);
        } else {
          work.push_back(part);
        }
      }
    }
  }
  std::sort(done.begin(), done.end(), [](const Bracket& a, const Bracket& b) { return a.lo < b.lo; });
  return done;
}

// Converge every eigenvalue inside its bracket by Newton on the
// determinant, falling back to bisection whenever a step leaves the bracket
// or stalls. A lane that finishes picks up the next eigenvalue at once.
std::vector<double> converge(const Pivots& p, const std::vector<Bracket>& brackets, double scale) {
  struct Job {
    double lo, hi;
    int index;
  };
  std::vector<Job> jobs;
  for (const Bracket& b : brackets) {
    for (int idx = b.below_lo; idx < b.below_hi; ++idx) jobs.push_back({b.lo, b.hi, idx});
  }
  std::vector<double> values(jobs.size());
  if (jobs.empty()) return values;
  const double abs_floor = kEps * std::max(scale, 1e-300);

  struct Lane {
    int job = -1;
    double lo = 0, hi = 0, x = 0, last = 0;
    int iterations = 0;
  };
  std::array<Lane, kLanes> lanes{};
  std::size_t next_job = 0;
  auto load = [&](Lane& lane) {
    if (next_job >= jobs.size()) {
      lane.job = -1;
      return;
    }
    const Job& job = jobs[next_job];
    lane = Lane{static_cast<int>(next_job), job.lo, job.hi, 0.5 * (job.lo + job.hi), job.hi - job.lo, 0};
    ++next_job;
  };
  for (Lane& lane : lanes) load(lane);

  std::array<double, kLanes> x{}, step{};
  std::array<int, kLanes> counts{};
  for (;;) {
    int active = 0;
    for (int l = 0; l < kLanes; ++l) {
      if (lanes[l].job >= 0) {
        x[l] = lanes[l].x;
        ++active;
      } else {
        x[l] = lanes[0].job >= 0 ? lanes[0].x : jobs[0].lo;
      }
    }
    if (active == 0) break;
    count_and_newton(p, x.data(), counts.data(), step.data());
    for (int l = 0; l < kLanes; ++l) {
      Lane& lane = lanes[l];
      if (lane.job < 0) continue;
      const int idx = jobs[lane.job].index;
      if (counts[l] > idx) {
        lane.hi = lane.x;
      } else {
        lane.lo = lane.x;
      }
      const double tol = 2.0 * kEps * std::abs(lane.x) + abs_floor;
      const double candidate = lane.x + step[l];
      const bool inside = std::isfinite(candidate) && candidate >= lane.lo && candidate <= lane.hi;
      double result = std::numeric_limits<double>::quiet_NaN();
      if (inside && std::abs(step[l]) <= tol) {
        result = candidate;
      } else if (lane.hi - lane.lo <= tol || ++lane.iterations >= 300) {
        result = 0.5 * (lane.lo + lane.hi);
      }
      if (!std::isnan(result)) {
        values[lane.job] = result;
        load(lane);
        continue;
      }
      const double next = (inside && std::abs(step[l]) < 0.5 * lane.last) ? candidate : 0.5 * (lane.lo + lane.hi);
      lane.last = std::abs(next - lane.x);
      lane.x = next;
    }
  }
  return values;
}

double residual_of(const ChainArrays& arrays, const Eigen::VectorXd& u, double lambda) {
  Eigen::VectorXd hu(u.size());
  apply_tridiagonal(arrays, u.data(), hu.data());
  return (hu - lambda * u).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<double> dense_eigenvalues(const ChainArrays& arrays) {
  const int n = arrays.size();
  if (n == 0) return {};
  if (static_cast<int>(arrays.offdiag.size()) != n - 1) {
    throw ValidationError("dense_eigensolve: off-diagonal length must be N - 1");
  }
  const Pivots p = make_pivots(arrays);
  const Interval box = gershgorin_bounds(arrays.diag, arrays.offdiag);
  const double pad = 1e-3 * std::max(box.hi - box.lo, 1.0) + 4.0 * kEps * std::max(std::abs(box.lo), std::abs(box.hi));
  const std::vector<Bracket> brackets = isolate(p, box.lo - pad, box.hi + pad, n);
  std::vector<double> values = converge(p, brackets, arrays.scale());
  std::sort(values.begin(), values.end());
  return values;
}

Spectrum dense_eigensolve(const ChainArrays& arrays, const DenseOptions& options) {
  Spectrum out;
  out.eigenvalues = dense_eigenvalues(arrays);
  const int n = arrays.size();
  out.branch_tags.assign(n, BranchTag{BranchKind::dense, 0});
  if (!options.vectors || n == 0) return out;

  const double scale = std::max(arrays.scale(), std::numeric_limits<double>::min());
  const double accept = 1e-12 * scale;
  out.eigenvectors.resize(n, n);
  std::vector<double> work(n);
  int cluster_start = 0;
  for (int col = 0; col < n; ++col) {
    const double lambda = out.eigenvalues[col];
    if (col > 0 && lambda - out.eigenvalues[col - 1] > options.cluster_gap * scale) cluster_start = col;

    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + static_cast<unsigned long long>(col));
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::VectorXd best;
    double best_residual = std::numeric_limits<double>::infinity();
    double shift = lambda;
    for (int attempt = 0; attempt <= 5 && !(best_residual <= accept); ++attempt) {
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v(i) = uniform(rng);
      for (int it = 0; it < 4; ++it) {
        std::copy(v.data(), v.data() + n, work.begin());
        solve_shifted(arrays.diag, arrays.offdiag, shift, work);
        v = Eigen::Map<Eigen::VectorXd>(work.data(), n);
        // Remove components along already-computed members of the cluster.
        for (int other = cluster_start; other < col; ++other) {
          v -= out.eigenvectors.col(other).dot(v) * out.eigenvectors.col(other);
        }
        const double norm = v.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) break;
        v /= norm;
      }
      if (!v.allFinite() || v.norm() == 0.0) {
        shift = lambda * (1.0 + 1e-10) + (lambda == 0.0 ? 1e-10 * scale : 0.0);
        continue;
      }
      const double r = residual_of(arrays, v, lambda);
      if (r < best_residual) {
        best_residual = r;
        best = v;
      }
    }
    if (best.size() == 0 || !(best_residual <= 1e-10 * scale)) {
      throw OracleError("inverse iteration did not converge for eigenvalue " + std::to_string(col) +
                        " (residual " + std::to_string(best_residual) + ")");
    }
    normalise_sign(best);
    out.eigenvectors.col(col) = best;
  }
  out.residual_max = max_residual(arrays, out);
  return out;
}

}  // namespace xychain
