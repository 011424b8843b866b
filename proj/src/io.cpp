#include "cfol/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cfol {

using nlohmann::json;

json system_to_json(const CliffordSystem& c) {
  json j;
  j["m"] = c.m();
  j["l"] = c.l();
  if (c.provenance()) j["provenance"] = {{"k", c.provenance()->k}, {"flips", c.provenance()->flips}};
  else j["provenance"] = nullptr;
  json gens = json::array();
  if (c.exact()) {
    j["encoding"] = "signed_perm";
    for (const auto& p : c.perm_generators()) {
      json cols = json::array();
      for (int col = 0; col < p.size(); ++col) cols.push_back({p.row(col), p.sign(col)});
      gens.push_back(std::move(cols));
    }
  } else {
    j["encoding"] = "dense";
    for (int i = 0; i < c.count(); ++i) {
      const Mat d = c.dense(i);
      json flat = json::array();
      for (Eigen::Index r = 0; r < d.rows(); ++r)
        for (Eigen::Index s = 0; s < d.cols(); ++s) flat.push_back(d(r, s));
      gens.push_back(std::move(flat));
    }
  }
  j["generators"] = std::move(gens);
  return j;
}

CliffordSystem system_from_json(const json& j, int max_dim) {
  try {
    const int m = j.at("m").get<int>();
    const int l = j.at("l").get<int>();
    if (m < 1 || l < 1) throw std::invalid_argument("system file: m and l must be positive");
    if (2 * static_cast<std::int64_t>(l) > max_dim)
      throw std::length_error("system file: 2l = " + std::to_string(2 * l) + " exceeds the cap " + std::to_string(max_dim));
    std::optional<Provenance> prov;
    if (j.contains("provenance") && !j.at("provenance").is_null())
      prov = Provenance{j.at("provenance").at("k").get<int>(), j.at("provenance").at("flips").get<int>()};
    const auto& gens = j.at("generators");
    if (!gens.is_array() || static_cast<int>(gens.size()) != m + 1)
      throw std::invalid_argument("system file: expected m+1 generators");
    const int n = 2 * l;
    const std::string enc = j.at("encoding").get<std::string>();
    if (enc == "signed_perm") {
      std::vector<SignedPermMatrix> out;
      for (const auto& g : gens) {
        if (!g.is_array() || static_cast<int>(g.size()) != n) throw std::invalid_argument("system file: generator has wrong size");
        std::vector<int> rows, signs;
        for (const auto& col : g) {
          rows.push_back(col.at(0).get<int>());
          signs.push_back(col.at(1).get<int>());
        }
        out.emplace_back(std::move(rows), std::move(signs));
      }
      return CliffordSystem(m, l, std::move(out), prov);
    }
    if (enc == "dense") {
      std::vector<Mat> out;
      for (const auto& g : gens) {
        if (!g.is_array() || static_cast<std::int64_t>(g.size()) != static_cast<std::int64_t>(n) * n)
          throw std::invalid_argument("system file: generator has wrong size");
        Mat d(n, n);
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) d(r, s) = g[static_cast<std::size_t>(r) * n + s].get<double>();
        out.push_back(std::move(d));
      }
      return CliffordSystem(m, l, std::move(out), prov);
    }
    throw std::invalid_argument("system file: unknown encoding '" + enc + "'");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("system file: ") + e.what());
  }
}

json report_to_json(const VerificationReport& r) {
  json j;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  json checks = json::array();
  for (const auto& c : r.checks) {
    json v = std::isfinite(c.violation) ? json(c.violation) : json(nullptr);
    checks.push_back({{"name", c.name}, {"paper_ref", c.claim}, {"violation", v}, {"tol", c.tol}, {"pass", c.pass}});
  }
  j["checks"] = std::move(checks);
  j["pass"] = r.pass;
  if (r.system) {
    json s = {{"m", r.system->m}, {"k", r.system->k}};
    s["kappa"] = r.system->kappa ? json(*r.system->kappa) : json(nullptr);
    j["system"] = std::move(s);
  } else {
    j["system"] = nullptr;
  }
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace cfol
