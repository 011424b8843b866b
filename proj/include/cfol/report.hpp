#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cfol {

struct EquivalenceProfile {
  int m = 0;
  int k = 0;
  std::optional<int> kappa;  // present iff m = 0 mod 4

  friend bool operator==(const EquivalenceProfile&, const EquivalenceProfile&) = default;
};

std::string to_string(const EquivalenceProfile& p);

struct CheckResult {
  std::string name;
  std::string claim;  // what the check certifies; serialized as "paper_ref"
  double violation = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Outcome of one property suite. pass <=> every violation <= its tolerance.
struct VerificationReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  std::vector<CheckResult> checks;
  bool pass = true;
  double wall_seconds = 0.0;
  std::optional<EquivalenceProfile> system;
  std::string code_version;

  /// Appends a check; violations that are NaN always fail.
  void add(std::string name, std::string claim, double violation, double tol);
  double max_violation() const;
};

}  // namespace cfol
