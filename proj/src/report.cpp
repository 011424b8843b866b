#include "cfol/report.hpp"

#include <algorithm>
#include <cmath>

namespace cfol {

std::string to_string(const EquivalenceProfile& p) {
  std::string s = "(" + std::to_string(p.m) + "," + std::to_string(p.k) + ",";
  s += p.kappa ? std::to_string(*p.kappa) : std::string("-");
  return s + ")";
}

void VerificationReport::add(std::string name, std::string claim, double violation, double tol) {
  const bool ok = !std::isnan(violation) && violation <= tol;
  checks.push_back({std::move(name), std::move(claim), violation, tol, ok});
  pass = pass && ok;
}

double VerificationReport::max_violation() const {
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, c.violation);
  return worst;
}

}  // namespace cfol
