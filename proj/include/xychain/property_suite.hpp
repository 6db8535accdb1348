#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xychain {

// Outcome of one property over all cases. For most properties `worst` is the
// largest error and passing means worst <= tolerance; for gap properties
// (lower_bound = true) it is the smallest gap and passing means worst > tolerance.
struct PropertyResult {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;
  int cases = 0;
  bool passed = true;
  std::string detail;  // first failure message, if any
};

struct PropertyReport {
  std::uint64_t seed = 0;
  int cases = 0;
  std::vector<PropertyResult> properties;

  [[nodiscard]] bool ok() const;
  // JSON document with schema_version 1.
  [[nodiscard]] std::string to_json() const;
};

enum class InjectedFault {
  none,
  perturb_eigenvalue,  // shift one closed-form eigenvalue by 1e-3 * scale
};

struct SuiteOptions {
  std::uint64_t seed = 42;
  int cases = 200;
  int threads = 1;  // 0 = hardware concurrency
  InjectedFault fault = InjectedFault::none;
};

// Random kn-1 specs checked against the dense oracle, the homogeneous closed
// form, coupling sign flips, the 3n+2 solver and the branch structure, plus
// random MQ chains against the many-body oracle. Results are merged in case
// order so the report does not depend on the thread count.
PropertyReport run_property_suite(const SuiteOptions& options);

}  // namespace xychain
