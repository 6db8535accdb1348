#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "xychain/dense_oracle.hpp"
#include "xychain/errors.hpp"
#include "xychain/many_body.hpp"
#include "xychain/mq_dynamics.hpp"
#include "xychain/periodic_solver.hpp"
#include "xychain/property_suite.hpp"
#include "xychain/random_specs.hpp"
#include "xychain/spec_io.hpp"

namespace xychain::cli {

namespace {

// Spectra with at most this many sites are computed with eigenvectors so the
// residual and orthonormality checks can run.
constexpr int kVectorLimit = 4096;

struct RunConfig {
  std::string spec_path;
  std::string out_path;
  double tol = 1e-10;
  double t_max = 0.0;
  int steps = 0;
  bool use_oracle = false;
  bool manybody = false;
  std::uint64_t seed = 42;
  int cases = 200;
  int threads = 1;
  std::vector<int> sizes{1001, 10001, 100001};
  int k = 3;
  std::string inject_fault;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Write `text` to the --out file, or to `out` when no file was given.
void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.out_path.empty() || config.out_path == "-") {
    out << text;
    return;
  }
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) throw ValidationError("cannot open output file " + config.out_path);
  file << text;
  if (!file) throw std::runtime_error("failed writing " + config.out_path);
}

// Fill config fields from a JSON file for every option not given on the
// command line.
void apply_config_file(const std::string& path, CLI::App& command, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config file must hold a JSON object");
  auto given = [&](const std::string& flag) {
    try {
      return command.count(flag) > 0;
    } catch (const CLI::OptionNotFound&) {
      return true;  // option not offered by this command: ignore the key
    }
  };
  try {
    if (doc.contains("spec") && !given("--spec")) config.spec_path = doc["spec"].get<std::string>();
    if (doc.contains("out") && !given("--out")) config.out_path = doc["out"].get<std::string>();
    if (doc.contains("tol") && !given("--tol")) config.tol = doc["tol"].get<double>();
    if (doc.contains("tmax") && !given("--tmax")) config.t_max = doc["tmax"].get<double>();
    if (doc.contains("steps") && !given("--steps")) config.steps = doc["steps"].get<int>();
    if (doc.contains("use_oracle") && !given("--use-oracle")) config.use_oracle = doc["use_oracle"].get<bool>();
    if (doc.contains("manybody") && !given("--manybody")) config.manybody = doc["manybody"].get<bool>();
    if (doc.contains("seed") && !given("--seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("cases") && !given("--cases")) config.cases = doc["cases"].get<int>();
    if (doc.contains("threads") && !given("--threads")) config.threads = doc["threads"].get<int>();
    if (doc.contains("sizes") && !given("--sizes")) config.sizes = doc["sizes"].get<std::vector<int>>();
    if (doc.contains("k") && !given("--k")) config.k = doc["k"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file " + path + ": " + e.what());
  }
}

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

struct SolvedChain {
  PeriodicChainSpec spec;
  ChainArrays arrays;
  Spectrum spectrum;
  bool used_oracle = false;
};

// Closed form for periodic specs, dense oracle when forced or when no closed
// form exists (k = 2). The explicit form needs --use-oracle.
SolvedChain solve_for_cli(const RunConfig& config, bool vectors, std::ostream& err) {
  require(!config.spec_path.empty(), "--spec is required");
  SolvedChain solved;
  solved.spec = load_spec(config.spec_path);
  const ValidationReport report = validate_spec(solved.spec);
  if (!report.ok()) throw ValidationError(report.failures());
  solved.arrays = expand_periodic(solved.spec);

  bool oracle = config.use_oracle;
  if (solved.spec.form == ResidueForm::explicit_sites && !oracle) {
    throw ValidationError("closed form requires periodic form; pass --use-oracle for explicit specs");
  }
  if (!oracle && solved.spec.k == 2) {
    err << "note: no closed form for k = 2, using the dense oracle\n";
    oracle = true;
  }
  const bool want_vectors = vectors && solved.arrays.size() <= kVectorLimit;
  if (oracle) {
    solved.spectrum = dense_eigensolve(solved.arrays, DenseOptions{want_vectors});
  } else {
    solved.spectrum = solve_periodic(solved.spec, SolveOptions{want_vectors, config.threads});
  }
  solved.used_oracle = oracle;
  return solved;
}

int run_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require(config.tol > 0.0, "--tol must be positive");
  const SolvedChain solved = solve_for_cli(config, true, err);
  const Spectrum& s = solved.spectrum;

  std::string csv = "index,eigenvalue,branch_tag\n";
  for (int i = 0; i < s.size(); ++i) {
    csv += std::to_string(i + 1) + "," + format_double(s.eigenvalues[i]) + "," + s.branch_tags[i].to_string() + "\n";
  }
  emit(config, csv, out);

  const VerificationReport report = verify_spectrum(solved.arrays, s, config.tol);
  if (!report.ok()) {
    err << "verification failed: residual " << report.max_residual << ", orthonormality "
        << report.orthonormality_defect << ", min gap " << report.min_gap << ", Sturm mismatches "
        << report.sturm_mismatches << "\n";
    return kNumericalError;
  }
  return kSuccess;
}

int run_mq(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require(config.steps >= 1, "--steps must be at least 1");
  require(std::isfinite(config.t_max) && config.t_max >= 0.0, "--tmax must be finite and non-negative");
  const std::vector<double> times = uniform_time_grid(config.t_max, config.steps);

  IntensitySeries series;
  std::vector<double> g_minus2;
  if (config.manybody) {
    require(!config.spec_path.empty(), "--spec is required");
    const PeriodicChainSpec spec = load_spec(config.spec_path);
    const ChainArrays arrays = expand_periodic(spec);
    if (arrays.size() > kMaxManyBodySites) {
      throw ValidationError("--manybody supports at most " + std::to_string(kMaxManyBodySites) + " sites");
    }
    ManyBodyIntensities exact = manybody_mq_intensities(arrays, times);
    series = std::move(exact.series);
    g_minus2 = std::move(exact.g_minus2);
  } else {
    const SolvedChain solved = solve_for_cli(config, false, err);
    if (std::any_of(solved.arrays.diag.begin(), solved.arrays.diag.end(), [](double d) { return d != 0.0; })) {
      err << "warning: nonzero Larmor frequencies; MQ intensities use the eigenvalues as given\n";
    }
    series = trace_intensities(solved.spectrum.eigenvalues, times);
    g_minus2 = series.G2;
  }

  std::string csv = "t,G0,G2\n";
  double worst_conservation = 0.0;
  bool in_range = true;
  for (std::size_t i = 0; i < times.size(); ++i) {
    csv += format_double(series.times[i]) + "," + format_double(series.G0[i]) + "," + format_double(series.G2[i]) + "\n";
    worst_conservation = std::max(worst_conservation, std::abs(series.G0[i] + series.G2[i] + g_minus2[i] - 1.0));
    for (double g : {series.G0[i], series.G2[i], g_minus2[i]}) {
      in_range = in_range && g >= -1e-12 && g <= 1.0 + 1e-12;
    }
  }
  emit(config, csv, out);
  if (worst_conservation > 1e-12 || !in_range) {
    err << "intensity invariants violated: conservation error " << worst_conservation << "\n";
    return kNumericalError;
  }
  return kSuccess;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require(config.cases >= 0, "--cases must be non-negative");
  SuiteOptions options;
  options.seed = config.seed;
  options.cases = config.cases;
  options.threads = config.threads;
  if (config.inject_fault == "eigenvalue") {
    options.fault = InjectedFault::perturb_eigenvalue;
  } else {
    require(config.inject_fault.empty(), "unknown fault '" + config.inject_fault + "'");
  }
  if (config.cases == 0) err << "warning: no cases requested, nothing verified\n";
  const PropertyReport report = run_property_suite(options);
  emit(config, report.to_json(), out);
  for (const PropertyResult& p : report.properties) {
    if (!p.passed) err << "property " << p.name << " failed: worst " << p.worst << " vs " << p.tolerance << "\n";
  }
  return report.ok() ? kSuccess : kPropertyFailure;
}

double seconds_per_call(const std::function<void()>& body) {
  using clock = std::chrono::steady_clock;
  int repetitions = 0;
  const auto start = clock::now();
  double elapsed = 0.0;
  do {
    body();
    ++repetitions;
    elapsed = std::chrono::duration<double>(clock::now() - start).count();
  } while (elapsed < 0.05 && repetitions < 1000);
  return elapsed / repetitions;
}

// Least-squares slope of log(time) against log(N).
std::optional<double> growth_exponent(const std::vector<double>& sizes, const std::vector<double>& times) {
  if (sizes.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    mx += std::log(sizes[i]);
    my += std::log(times[i]);
  }
  mx /= sizes.size();
  my /= sizes.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double dx = std::log(sizes[i]) - mx;
    sxy += dx * (std::log(times[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

int run_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require(config.k >= 3, "--k must be at least 3");
  require(!config.sizes.empty(), "--sizes must list at least one size");
  PeriodicChainSpec cell;
  if (config.k == 3) {
    cell = as_kn_minus_1(dipolar_chain_1001());
  } else {
    std::mt19937_64 rng(config.seed);
    RandomSpecRanges ranges;
    ranges.k_min = ranges.k_max = config.k;
    cell = random_periodic_spec(rng, ranges);
  }

  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["k"] = config.k;
  doc["eigenvectors"] = false;
  doc["runs"] = nlohmann::ordered_json::array();
  std::vector<double> sizes, closed_times, dense_times;
  for (int requested : config.sizes) {
    require(requested >= 2 * config.k - 1, "size " + std::to_string(requested) + " too small for k = " + std::to_string(config.k));
    PeriodicChainSpec spec = cell;
    spec.n = static_cast<int>(std::lround(static_cast<double>(requested + 1) / config.k));
    const ChainArrays arrays = expand_periodic(spec);
    const int sites = arrays.size();
    if (sites != requested) err << "note: size " << requested << " is not of the form kn-1, using " << sites << "\n";

    Spectrum closed;
    std::vector<double> dense;
    const double t_closed = seconds_per_call([&] { closed = solve_kn_minus_1(spec, SolveOptions{false, config.threads}); });
    const double t_dense = seconds_per_call([&] { dense = dense_eigenvalues(arrays); });
    double diff = 0.0;
    for (int i = 0; i < sites; ++i) diff = std::max(diff, std::abs(closed.eigenvalues[i] - dense[i]));

    nlohmann::ordered_json run;
    run["N"] = sites;
    run["n"] = spec.n;
    run["closed_form_seconds"] = t_closed;
    run["dense_oracle_seconds"] = t_dense;
    run["max_eigenvalue_difference_over_scale"] = diff / arrays.scale();
    doc["runs"].push_back(run);
    sizes.push_back(sites);
    closed_times.push_back(t_closed);
    dense_times.push_back(t_dense);
  }
  const auto e_closed = growth_exponent(sizes, closed_times);
  const auto e_dense = growth_exponent(sizes, dense_times);
  if (e_closed && e_dense) {
    doc["exponents"] = {{"closed_form", *e_closed}, {"dense_oracle", *e_dense}, {"difference", *e_dense - *e_closed}};
  }
  emit(config, doc.dump(2) + "\n", out);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra and multiple-quantum dynamics of periodic XY spin chains", "xychain"};
  app.require_subcommand(1);
  RunConfig config;
  std::string config_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON file with option defaults; flags take precedence");
    cmd->add_option("--out", config.out_path, "output file (default: standard output)");
    cmd->add_option("--threads", config.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  };
  auto add_solve = [&](CLI::App* cmd) {
    cmd->add_option("--spec", config.spec_path, "chain-spec JSON file");
    cmd->add_flag("--use-oracle", config.use_oracle, "use the dense oracle instead of the closed form");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues as CSV: index,eigenvalue,branch_tag");
  add_common(spectrum);
  add_solve(spectrum);
  spectrum->add_option("--tol", config.tol, "verification tolerance (relative to scale)");

  CLI::App* mq = app.add_subcommand("mq", "MQ coherence intensities as CSV: t,G0,G2");
  add_common(mq);
  add_solve(mq);
  mq->add_option("--tmax", config.t_max, "last sample time (s)");
  mq->add_option("--steps", config.steps, "number of sample times, including t = 0");
  mq->add_flag("--manybody", config.manybody, "exact 2^N evolution (N <= 12)");

  CLI::App* verify = app.add_subcommand("verify", "randomised property suite, JSON report");
  add_common(verify);
  verify->add_option("--seed", config.seed, "random seed");
  verify->add_option("--cases", config.cases, "number of random chains");
  verify->add_option("--inject-fault", config.inject_fault)->group("");

  CLI::App* bench = app.add_subcommand("bench", "closed form vs dense oracle timings, JSON");
  add_common(bench);
  bench->add_option("--sizes", config.sizes, "chain lengths")->delimiter(',');
  bench->add_option("--k", config.k, "period");
  bench->add_option("--seed", config.seed, "seed for the cell when k != 3");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    if (!config_path.empty()) apply_config_file(config_path, *chosen, config);
    require(config.threads >= 0, "--threads must be non-negative");
    if (chosen == spectrum) return run_spectrum(config, out, err);
    if (chosen == mq) return run_mq(config, out, err);
    if (chosen == verify) return run_verify(config, out, err);
    return run_bench(config, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace xychain::cli
