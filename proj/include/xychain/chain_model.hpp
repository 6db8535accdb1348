#pragma once

#include <optional>
#include <string>
#include <vector>

namespace xychain {

// How the site count N relates to the period k and repetition count n.
enum class ResidueForm {
  kn_minus_1,      // N = k*n - 1
  three_n_plus_2,  // N = 3*n + 2, k must be 3
  explicit_sites,  // omega/couplings list every site; oracle-only
};

std::string to_string(ResidueForm form);
std::optional<ResidueForm> parse_residue_form(const std::string& text);

// Open nearest-neighbour chain whose Larmor frequencies and couplings repeat
// with period k. All frequencies are angular (rad/s). For the explicit form
// `omega` has N entries and `couplings` N-1 entries; k and n are ignored.
struct PeriodicChainSpec {
  int k = 0;
  int n = 0;
  ResidueForm form = ResidueForm::kn_minus_1;
  std::vector<double> omega;
  std::vector<double> couplings;
  std::optional<std::string> label;

  // Site count implied by the form, or 0 if it cannot be derived.
  [[nodiscard]] int site_count() const;

  bool operator==(const PeriodicChainSpec&) const = default;
};

// Diagonal and off-diagonal of the single-particle matrix H = D + 2*Omega.
// diag holds 2*omega_m, offdiag holds D_m.
struct ChainArrays {
  std::vector<double> diag;
  std::vector<double> offdiag;

  [[nodiscard]] int size() const { return static_cast<int>(diag.size()); }
  // max|diag| + 2 max|offdiag|; the reference magnitude for all tolerances.
  [[nodiscard]] double scale() const;

  bool operator==(const ChainArrays&) const = default;
};

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  [[nodiscard]] bool ok() const;
  // Messages of all failed checks joined with "; ", empty when ok().
  [[nodiscard]] std::string failures() const;
};

ValidationReport validate_spec(const PeriodicChainSpec& spec);

// Expand the period cell over the whole chain. Throws ValidationError naming
// the violated invariant when validate_spec fails.
ChainArrays expand_periodic(const PeriodicChainSpec& spec);

// The 1001-spin dipolar chain built from repeated four-spin fragments
// (D = 2*pi*{6096, 4444, 3339} rad/s, zero Larmor offsets), in 3n+2 form.
PeriodicChainSpec dipolar_chain_1001();

// Same chain as a spec in kn-1 form (3*334 - 1 = 1001 = 3*333 + 2).
PeriodicChainSpec as_kn_minus_1(const PeriodicChainSpec& three_n_plus_2);

}  // namespace xychain
