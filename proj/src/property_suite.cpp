#include "xychain/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numbers>
#include <thread>

#include "json.hpp"
#include "xychain/dense_oracle.hpp"
#include "xychain/many_body.hpp"
#include "xychain/mq_dynamics.hpp"
#include "xychain/periodic_solver.hpp"
#include "xychain/random_specs.hpp"
#include "xychain/tridiag_kernels.hpp"

namespace xychain {

namespace {

// Property names, in report order, with tolerances.
struct PropertyDef {
  const char* name;
  double tolerance;
  bool lower_bound;
};

constexpr PropertyDef kProperties[] = {
    {"oracle_eigenvalues", 1e-9, false},          // max |lambda - oracle| / scale
    {"oracle_eigenvectors", 1e-8, false},         // max |u - (+-)v|
    {"spectrum_invariants", 1e-10, false},        // residual/scale and orthonormality
    {"distinctness", 1e-8, true},                 // min gap / scale
    {"branch_exclusion", 1e-8, true},             // min |poly - head| / scale
    {"gauge_invariance", 1e-12, false},           // max |lambda - lambda_flipped| / scale
    {"homogeneous_reduction", 1e-12, false},      // vs a + 2c cos(pi j/(N+1)), / scale
    {"three_n_plus_2_consistency", 1e-12, false}, // 3n+2 vs kn-1 at n+1, / scale
    {"mq_oracle_equivalence", 1e-10, false},      // |G_trace - G_manybody|
    {"conservation", 1e-12, false},               // |G0 + G2 + G-2 - 1|
};
constexpr int kPropertyCount = static_cast<int>(std::size(kProperties));

struct CaseOutcome {
  double value[kPropertyCount];
  std::string error[kPropertyCount];
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double min_gap(const std::vector<double>& sorted) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) gap = std::min(gap, sorted[i] - sorted[i - 1]);
  return gap;
}

CaseOutcome run_case(const PeriodicChainSpec& spec, int index, std::uint64_t seed, InjectedFault fault) {
  CaseOutcome out;
  for (int p = 0; p < kPropertyCount; ++p) out.value[p] = kProperties[p].lower_bound ? std::numeric_limits<double>::infinity() : 0.0;
  auto record_error = [&](int p, const std::string& what) {
    out.value[p] = kProperties[p].lower_bound ? -std::numeric_limits<double>::infinity()
                                              : std::numeric_limits<double>::infinity();
    if (out.error[p].empty()) out.error[p] = "case " + std::to_string(index) + ": " + what;
  };

  const ChainArrays arrays = expand_periodic(spec);
  const double scale = arrays.scale();

  try {
    Spectrum closed = solve_kn_minus_1(spec);
    if (fault == InjectedFault::perturb_eigenvalue) closed.eigenvalues[0] += 1e-3 * scale;
    const Spectrum oracle = dense_eigensolve(arrays);

    out.value[0] = max_abs_diff(closed.eigenvalues, oracle.eigenvalues) / scale;
    double vec = 0.0;
    for (int c = 0; c < closed.size(); ++c) {
      const double plus = (closed.eigenvectors.col(c) - oracle.eigenvectors.col(c)).cwiseAbs().maxCoeff();
      const double minus = (closed.eigenvectors.col(c) + oracle.eigenvectors.col(c)).cwiseAbs().maxCoeff();
      vec = std::max(vec, std::min(plus, minus));
    }
    out.value[1] = vec;

    const VerificationReport report = verify_spectrum(arrays, closed, kProperties[2].tolerance);
    out.value[2] = std::max(report.max_residual / scale, report.orthonormality_defect);
    if (!report.sturm_ok || !report.gap_ok) record_error(2, "Sturm count or ordering check failed");

    out.value[3] = min_gap(closed.eigenvalues) / scale;

    std::vector<double> poly, head;
    for (int i = 0; i < closed.size(); ++i) {
      (closed.branch_tags[i].kind == BranchKind::head_block ? head : poly).push_back(closed.eigenvalues[i]);
    }
    double cross = std::numeric_limits<double>::infinity();
    for (double h : head) {
      for (double p : poly) cross = std::min(cross, std::abs(h - p));
    }
    out.value[4] = cross / scale;
  } catch (const std::exception& e) {
    for (int p = 0; p < 5; ++p) record_error(p, e.what());
  }

  try {
    // Flip the signs of a case-dependent subset of the cell couplings.
    PeriodicChainSpec flipped = spec;
    for (int r = 0; r < spec.k; ++r) {
      if ((static_cast<unsigned>(index + 1) >> (r % 8)) & 1u) flipped.couplings[r] = -flipped.couplings[r];
    }
    const SolveOptions values_only{false, 1};
    out.value[5] = max_abs_diff(solve_kn_minus_1(spec, values_only).eigenvalues,
                                solve_kn_minus_1(flipped, values_only).eigenvalues) /
                   scale;
  } catch (const std::exception& e) {
    record_error(5, e.what());
  }

  try {
    PeriodicChainSpec uniform = spec;
    std::fill(uniform.omega.begin(), uniform.omega.end(), spec.omega[0]);
    std::fill(uniform.couplings.begin(), uniform.couplings.end(), spec.couplings[0]);
    const Spectrum s = solve_kn_minus_1(uniform, SolveOptions{false, 1});
    const int sites = spec.site_count();
    std::vector<double> expected(sites);
    for (int j = 1; j <= sites; ++j) {
      expected[j - 1] = 2.0 * spec.omega[0] + 2.0 * spec.couplings[0] * std::cos(std::numbers::pi * j / (sites + 1));
    }
    std::sort(expected.begin(), expected.end());
    out.value[6] = max_abs_diff(s.eigenvalues, expected) / expand_periodic(uniform).scale();
  } catch (const std::exception& e) {
    record_error(6, e.what());
  }

  try {
    PeriodicChainSpec three = spec;
    three.k = 3;
    three.omega.resize(3);
    three.couplings.resize(3);
    three.form = ResidueForm::three_n_plus_2;
    three.n = std::max(1, spec.n - 1);
    PeriodicChainSpec same = three;
    same.form = ResidueForm::kn_minus_1;
    same.n = three.n + 1;
    out.value[7] = max_abs_diff(solve_3n_plus_2(three, SolveOptions{false, 1}).eigenvalues,
                                solve_kn_minus_1(same, SolveOptions{false, 1}).eigenvalues) /
                   expand_periodic(three).scale();
  } catch (const std::exception& e) {
    record_error(7, e.what());
  }

  try {
    std::mt19937_64 rng(seed ^ (0x5851f42d4c957f2dULL * static_cast<std::uint64_t>(index + 1)));
    const int sites = 2 + index % 7;
    const ChainArrays chain = random_mq_chain(rng, sites);
    double max_d = 0.0;
    for (double d : chain.offdiag) max_d = std::max(max_d, std::abs(d));
    const std::vector<double> times = uniform_time_grid(5.0 / max_d, 20);
    const IntensitySeries trace = trace_intensities(dense_eigenvalues(chain), times);
    const ManyBodyIntensities exact = manybody_mq_intensities(chain, times);
    double diff = 0.0, conservation = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      diff = std::max({diff, std::abs(trace.G0[i] - exact.series.G0[i]), std::abs(trace.G2[i] - exact.series.G2[i]),
                       std::abs(trace.G2[i] - exact.g_minus2[i])});
      conservation = std::max({conservation, std::abs(trace.G0[i] + 2.0 * trace.G2[i] - 1.0),
                               std::abs(exact.series.G0[i] + exact.series.G2[i] + exact.g_minus2[i] - 1.0)});
    }
    out.value[8] = diff;
    out.value[9] = conservation;
  } catch (const std::exception& e) {
    record_error(8, e.what());
    record_error(9, e.what());
  }
  return out;
}

}  // namespace

bool PropertyReport::ok() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

std::string PropertyReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["seed"] = seed;
  doc["cases"] = cases;
  doc["passed"] = ok();
  doc["properties"] = nlohmann::ordered_json::array();
  for (const PropertyResult& p : properties) {
    nlohmann::ordered_json item;
    item["name"] = p.name;
    item["worst"] = std::isfinite(p.worst) ? nlohmann::ordered_json(p.worst) : nlohmann::ordered_json(nullptr);
    item["tolerance"] = p.tolerance;
    item["comparison"] = p.lower_bound ? "worst > tolerance" : "worst <= tolerance";
    item["cases"] = p.cases;
    item["passed"] = p.passed;
    if (!p.detail.empty()) item["detail"] = p.detail;
    doc["properties"].push_back(item);
  }
  return doc.dump(2) + "\n";
}

PropertyReport run_property_suite(const SuiteOptions& options) {
  PropertyReport report;
  report.seed = options.seed;
  report.cases = std::max(options.cases, 0);
  if (report.cases == 0) return report;

  const std::vector<PeriodicChainSpec> specs = random_periodic_specs(options.seed, report.cases);
  std::vector<CaseOutcome> outcomes(report.cases);
  int threads = options.threads == 0 ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))
                                     : std::max(options.threads, 1);
  threads = std::min(threads, report.cases);
  auto work = [&](int t) {
    for (int i = t; i < report.cases; i += threads) {
      outcomes[i] = run_case(specs[i], i, options.seed, options.fault);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  for (int p = 0; p < kPropertyCount; ++p) {
    PropertyResult r;
    r.name = kProperties[p].name;
    r.tolerance = kProperties[p].tolerance;
    r.lower_bound = kProperties[p].lower_bound;
    r.cases = report.cases;
    r.worst = r.lower_bound ? std::numeric_limits<double>::infinity() : 0.0;
    for (int i = 0; i < report.cases; ++i) {
      const double v = outcomes[i].value[p];
      r.worst = r.lower_bound ? std::min(r.worst, v) : std::max(r.worst, v);
      if (r.detail.empty() && !outcomes[i].error[p].empty()) r.detail = outcomes[i].error[p];
    }
    r.passed = r.detail.empty() && (r.lower_bound ? r.worst > r.tolerance : r.worst <= r.tolerance);
    report.properties.push_back(r);
  }
  return report;
}

}  // namespace xychain
