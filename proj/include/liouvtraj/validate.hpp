#pragma once

// Internal validation suite behind the `validate` CLI command: spectral
// identities on the three default models, trajectory jump statistics against
// the analytic law for single-qubit decay, PRNG distribution checks, and
// mutation canaries that prove the identity checks can actually fail.

#include <iosfwd>
#include <string>
#include <vector>

#include "liouvtraj/io.hpp"

namespace liouvtraj {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // residuals / statistics backing the verdict
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed = false;
};

// Runs every check; if progress is non-null, one line per check is streamed.
ValidationReport run_validation(std::ostream* progress = nullptr);

Json validation_to_json(const ValidationReport& report);

}  // namespace liouvtraj
