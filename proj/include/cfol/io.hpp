#pragma once

#include <string>

#include <json.hpp>

#include "cfol/clifford.hpp"
#include "cfol/report.hpp"

namespace cfol {

/// {"m", "l", "provenance": {"k", "flips"} | null, "encoding", "generators"}.
/// signed_perm generators are lists of [row, sign] per column; dense ones are
/// row-major arrays of length (2l)^2.
nlohmann::json system_to_json(const CliffordSystem& c);
CliffordSystem system_from_json(const nlohmann::json& j, int max_dim = kDefaultMaxDim);

/// {suite, seed, samples, checks: [{name, paper_ref, violation, tol, pass}], pass, system}
nlohmann::json report_to_json(const VerificationReport& r);

std::string read_text_file(const std::string& path);
/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace cfol
