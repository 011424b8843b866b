#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfol/clifford.hpp"
#include "cfol/report.hpp"

namespace cfol {

inline constexpr const char* kCodeVersion = "cfol 0.1.0";

/// Raised when a suite's hypotheses exclude the given system.
class IncompatibleSuite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SuiteConfig {
  std::string suite;
  std::shared_ptr<const CliffordSystem> system;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;                 // 0 selects the suite default
  std::map<std::string, double> tolerances;  // per-check overrides
  int budget = 200;                          // leaf samples per transnormality pair
  std::string foliation = "points";          // F_0 for transnormality
};

const std::vector<std::string>& suite_ids();
std::int64_t default_samples(const std::string& suite);

/// Empty when the suite applies to the system, otherwise the reason it does not.
std::optional<std::string> incompatibility(const std::string& suite, const CliffordSystem& c);

/// Throws std::invalid_argument for unknown suites and IncompatibleSuite.
VerificationReport run_suite(const SuiteConfig& config);

struct MatrixEntry {
  SuiteConfig config;
  std::optional<VerificationReport> report;
  std::string error;  // set when the suite threw
};

struct MatrixSummary {
  int passed = 0;
  int failed = 0;
  int errors = 0;
  std::vector<std::string> lines;  // one per failed check or error
};

struct MatrixResult {
  std::vector<MatrixEntry> entries;
  MatrixSummary summary;
};

MatrixResult run_matrix(const std::vector<SuiteConfig>& plan);

/// Every compatible suite on every built system with 2l <= max_dim, at reduced sample counts.
std::vector<SuiteConfig> default_plan(int max_dim = 64, std::uint64_t seed = 1);

}  // namespace cfol
