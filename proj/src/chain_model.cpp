#include "xychain/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xychain/errors.hpp"

namespace xychain {

std::string to_string(ResidueForm form) {
  switch (form) {
    case ResidueForm::kn_minus_1:
      return "kn_minus_1";
    case ResidueForm::three_n_plus_2:
      return "three_n_plus_2";
    case ResidueForm::explicit_sites:
      return "explicit";
  }
  return "unknown";
}

std::optional<ResidueForm> parse_residue_form(const std::string& text) {
  if (text == "kn_minus_1") return ResidueForm::kn_minus_1;
  if (text == "three_n_plus_2") return ResidueForm::three_n_plus_2;
  if (text == "explicit") return ResidueForm::explicit_sites;
  return std::nullopt;
}

int PeriodicChainSpec::site_count() const {
  switch (form) {
    case ResidueForm::kn_minus_1:
      return k * n - 1;
    case ResidueForm::three_n_plus_2:
      return 3 * n + 2;
    case ResidueForm::explicit_sites:
      return static_cast<int>(omega.size());
  }
  return 0;
}

double ChainArrays::scale() const {
  double d = 0.0;
  double e = 0.0;
  for (double v : diag) d = std::max(d, std::abs(v));
  for (double v : offdiag) e = std::max(e, std::abs(v));
  return d + 2.0 * e;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::failures() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!out.empty()) out += "; ";
    out += c.message;
  }
  return out;
}

ValidationReport validate_spec(const PeriodicChainSpec& spec) {
  ValidationReport report;
  auto add = [&](std::string name, bool passed, std::string message) {
    report.checks.push_back({std::move(name), passed, passed ? std::string() : std::move(message)});
  };

  const bool periodic = spec.form != ResidueForm::explicit_sites;
  if (periodic) {
    add("period", spec.k >= 2, "k ≥ 2 required");
    if (spec.form == ResidueForm::kn_minus_1) {
      add("repetitions", spec.n >= 2, "n ≥ 2 required");
    } else {
      add("repetitions", spec.n >= 1, "n ≥ 1 required");
      add("form_period", spec.k == 3, "form requires k = 3");
    }
    const auto k = static_cast<std::size_t>(std::max(spec.k, 0));
    add("omega_length", spec.omega.size() == k,
        "omega must list k = " + std::to_string(spec.k) + " frequencies");
    add("couplings_length", spec.couplings.size() == k,
        "couplings must list k = " + std::to_string(spec.k) + " constants");
  } else {
    add("omega_length", !spec.omega.empty(), "explicit form needs at least one site");
    add("couplings_length", spec.couplings.size() + 1 == spec.omega.size(),
        "explicit form needs N-1 couplings for N frequencies");
  }

  bool finite = true;
  for (double v : spec.omega) finite = finite && std::isfinite(v);
  for (double v : spec.couplings) finite = finite && std::isfinite(v);
  add("finite", finite, "frequencies and couplings must be finite");

  std::string zero;
  for (std::size_t i = 0; i < spec.couplings.size(); ++i) {
    if (spec.couplings[i] != 0.0) continue;
    if (!zero.empty()) zero += "; ";
    zero += "coupling D_" + std::to_string(i + 1) + " is zero";
  }
  add("nonzero_couplings", zero.empty(), zero);
  return report;
}

ChainArrays expand_periodic(const PeriodicChainSpec& spec) {
  const ValidationReport report = validate_spec(spec);
  if (!report.ok()) throw ValidationError(report.failures());

  ChainArrays arrays;
  const int sites = spec.site_count();
  arrays.diag.resize(static_cast<std::size_t>(sites));
  arrays.offdiag.resize(static_cast<std::size_t>(sites - 1));
  if (spec.form == ResidueForm::explicit_sites) {
    for (int m = 0; m < sites; ++m) arrays.diag[m] = 2.0 * spec.omega[m];
    arrays.offdiag = spec.couplings;
    return arrays;
  }
  const int k = spec.k;
  for (int m = 0; m < sites; ++m) arrays.diag[m] = 2.0 * spec.omega[m % k];
  for (int m = 0; m + 1 < sites; ++m) arrays.offdiag[m] = spec.couplings[m % k];
  return arrays;
}

PeriodicChainSpec dipolar_chain_1001() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  PeriodicChainSpec spec;
  spec.k = 3;
  spec.n = 333;
  spec.form = ResidueForm::three_n_plus_2;
  spec.omega = {0.0, 0.0, 0.0};
  spec.couplings = {two_pi * 6096.0, two_pi * 4444.0, two_pi * 3339.0};
  spec.label = "dipolar-1001";
  return spec;
}

PeriodicChainSpec as_kn_minus_1(const PeriodicChainSpec& spec) {
  if (spec.form != ResidueForm::three_n_plus_2) {
    throw ValidationError("expected a spec in three_n_plus_2 form");
  }
  PeriodicChainSpec out = spec;
  out.form = ResidueForm::kn_minus_1;
  out.n = spec.n + 1;
  return out;
}

}  // namespace xychain
