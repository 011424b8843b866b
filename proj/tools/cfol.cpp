// cfol: construct Clifford systems, sample their foliations and run property suites.
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfol/clifford.hpp"
#include "cfol/composed.hpp"
#include "cfol/foliation.hpp"
#include "cfol/homogeneity.hpp"
#include "cfol/io.hpp"
#include "cfol/verify.hpp"

using namespace cfol;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int max_dim_from_env() {
  const char* env = std::getenv("CFL_MAX_DIM");
  if (!env || !*env) return kDefaultMaxDim;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 2) throw UsageError("CFL_MAX_DIM must be an integer >= 2");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
  }
  return out;
}

// "m,k,flips" or a system file path.
CliffordSystem load_system(const std::string& ref) {
  const int cap = max_dim_from_env();
  if (!ref.empty() && std::isdigit(static_cast<unsigned char>(ref[0])) && ref.find(',') != std::string::npos) {
    const auto v = parse_list(ref);
    if (v.size() != 2 && v.size() != 3) throw UsageError("system triple must be m,k or m,k,flips");
    return build_system(static_cast<int>(v[0]), static_cast<int>(v[1]), v.size() == 3 ? static_cast<int>(v[2]) : 0, {cap});
  }
  if (!std::filesystem::is_regular_file(ref)) throw UsageError("system file '" + ref + "' not found");
  json doc;
  try {
    doc = json::parse(read_text_file(ref));
  } catch (const json::exception& e) {
    throw UsageError("system file '" + ref + "' is not valid JSON: " + e.what());
  }
  return system_from_json(doc, cap);
}

// Disk point from "0" (origin) or a comma list of m+1 coordinates.
Vec parse_disk_point(const std::string& s, int count) {
  const auto v = parse_list(s);
  if (v.size() == 1 && v[0] == 0.0) return Vec::Zero(count);
  if (static_cast<int>(v.size()) != count)
    throw UsageError("disk point needs " + std::to_string(count) + " coordinates, got " + std::to_string(v.size()));
  return Eigen::Map<const Vec>(v.data(), count);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_file_atomic(path, text);
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford foliations: construction, sampling and verification"};
  app.require_subcommand(1);

  // construct
  int c_m = 0, c_k = 1, c_flips = 0;
  std::string c_out, c_encoding = "signed_perm";
  auto* construct = app.add_subcommand("construct", "build a Clifford system and write it as JSON");
  construct->add_option("--m", c_m, "rank minus one")->required();
  construct->add_option("--k", c_k, "multiplicity");
  construct->add_option("--flips", c_flips, "number of blocks with P0 negated");
  construct->add_option("--out", c_out, "output path ('-' for stdout)")->required();
  construct->add_option("--encoding", c_encoding, "signed_perm or dense")->check(CLI::IsMember({"signed_perm", "dense"}));

  // verify
  std::string v_system, v_suite = "all", v_report, v_foliation = "points";
  std::uint64_t v_seed = 0;
  std::int64_t v_samples = 0;
  int v_budget = 200;
  auto* verify = app.add_subcommand("verify", "run property suites on a system");
  verify->add_option("--system", v_system, "system file or m,k,flips")->required();
  verify->add_option("--suite", v_suite, "suite id or 'all'");
  verify->add_option("--seed", v_seed);
  verify->add_option("--samples", v_samples, "0 = suite default");
  verify->add_option("--budget", v_budget, "leaf samples per transnormality pair");
  verify->add_option("--foliation", v_foliation, "F_0 for transnormality");
  verify->add_option("--report", v_report, "report JSON path");

  // invariant
  std::string i_system;
  auto* invariant = app.add_subcommand("invariant", "print the trace invariant and equivalence profile");
  invariant->add_option("system", i_system, "system file or m,k,flips")->required();

  // classify
  std::string k_a, k_b;
  auto* classify = app.add_subcommand("classify", "compare the geometric classes of two systems");
  classify->add_option("a", k_a, "system file or m,k,flips")->required();
  classify->add_option("b", k_b, "system file or m,k,flips")->required();

  // fiber
  std::string f_system, f_at, f_out;
  int f_n = 10;
  std::uint64_t f_seed = 0;
  auto* fiber = app.add_subcommand("fiber", "sample a fiber of pi_C as CSV");
  fiber->add_option("--system", f_system, "system file or m,k,flips")->required();
  fiber->add_option("--at", f_at, "disk point: 0 or comma list of m+1 coordinates")->required();
  fiber->add_option("--n", f_n, "number of samples")->check(CLI::PositiveNumber);
  fiber->add_option("--seed", f_seed);
  fiber->add_option("--out", f_out, "CSV path (default stdout)");

  // compose
  std::string o_system, o_foliation = "points", o_x, o_y, o_out;
  std::uint64_t o_seed = 0;
  int o_budget = 0;
  auto* compose = app.add_subcommand("compose", "composed leaf classes and distances for points over given disk points");
  compose->add_option("--system", o_system, "system file or m,k,flips")->required();
  compose->add_option("--foliation", o_foliation, "points, one_leaf, height or tensor_svd");
  compose->add_option("--x-at", o_x, "disk point for x")->required();
  compose->add_option("--y-at", o_y, "disk point for y");
  compose->add_option("--seed", o_seed);
  compose->add_option("--budget", o_budget, "if > 0, also estimate the ambient leaf distance");
  compose->add_option("--out", o_out, "JSON path (default stdout)");

  // homogeneity
  std::string h_system;
  int h_m = 0, h_k = 0, h_kappa = -1;
  auto* homog = app.add_subcommand("homogeneity", "homogeneity verdict for a profile");
  homog->add_option("--system", h_system, "system file or m,k,flips");
  homog->add_option("--m", h_m);
  homog->add_option("--k", h_k);
  homog->add_option("--kappa", h_kappa);

  // report
  int r_max_dim = 64;
  std::uint64_t r_seed = 1;
  std::string r_out;
  auto* report = app.add_subcommand("report", "run the default plan and summarize");
  report->add_option("--max-dim", r_max_dim, "largest 2l in the plan");
  report->add_option("--seed", r_seed);
  report->add_option("--out", r_out, "summary JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*construct) {
      const auto sys = build_system(c_m, c_k, c_flips, {max_dim_from_env()});
      json j;
      if (c_encoding == "dense") {
        std::vector<Mat> dense;
        for (int i = 0; i < sys.count(); ++i) dense.push_back(sys.dense(i));
        j = system_to_json(CliffordSystem(sys.m(), sys.l(), std::move(dense), sys.provenance()));
      } else {
        j = system_to_json(sys);
      }
      emit(c_out, j.dump() + "\n");
      std::cerr << "profile " << to_string(equivalence_profile(sys)) << "  dim " << sys.dim() << "\n";
      return 0;
    }

    if (*verify) {
      auto sys = std::make_shared<const CliffordSystem>(load_system(v_system));
      SuiteConfig base;
      base.system = sys;
      base.seed = v_seed;
      base.samples = v_samples;
      base.budget = v_budget;
      base.foliation = v_foliation;
      if (v_suite != "all") {
        base.suite = v_suite;
        if (auto why = incompatibility(v_suite, *sys)) {
          std::cerr << "incompatible: " << *why << "\n";
          return 2;
        }
        const auto rep = run_suite(base);
        const json j = report_to_json(rep);
        if (!v_report.empty()) write_file_atomic(v_report, j.dump(2) + "\n");
        for (const auto& ch : rep.checks)
          std::cout << (ch.pass ? "PASS " : "FAIL ") << rep.suite << "." << ch.name << " violation "
                    << format_double(ch.violation) << " tol " << format_double(ch.tol) << "\n";
        return rep.pass ? 0 : 1;
      }
      std::vector<SuiteConfig> plan;
      for (const auto& id : suite_ids()) {
        if (incompatibility(id, *sys)) continue;
        SuiteConfig cfg = base;
        cfg.suite = id;
        plan.push_back(cfg);
      }
      const auto result = run_matrix(plan);
      json reports = json::array();
      bool pass = result.summary.errors == 0;
      for (const auto& e : result.entries) {
        if (e.report) {
          reports.push_back(report_to_json(*e.report));
          pass = pass && e.report->pass;
          std::cout << (e.report->pass ? "PASS " : "FAIL ") << e.config.suite << "\n";
        } else {
          reports.push_back({{"suite", e.config.suite}, {"error", e.error}});
          std::cout << "ERROR " << e.config.suite << ": " << e.error << "\n";
        }
      }
      for (const auto& line : result.summary.lines) std::cerr << line << "\n";
      if (!v_report.empty()) write_file_atomic(v_report, json{{"reports", reports}, {"pass", pass}}.dump(2) + "\n");
      return pass ? 0 : 1;
    }

    if (*invariant) {
      const auto sys = load_system(i_system);
      std::cout << "trace_invariant " << format_double(trace_invariant(sys)) << "\n";
      std::cout << "profile " << to_string(equivalence_profile(sys)) << "\n";
      return 0;
    }

    if (*classify) {
      const auto a = equivalence_profile(load_system(k_a));
      const auto b = equivalence_profile(load_system(k_b));
      std::cout << (a == b ? "equivalent " : "inequivalent ") << to_string(a) << " " << to_string(b) << "\n";
      return 0;
    }

    if (*fiber) {
      const auto sys = load_system(f_system);
      const Vec v = parse_disk_point(f_at, sys.count());
      const auto pts = fiber_sample(sys, v, f_n, f_seed);
      std::ostringstream os;
      os << std::setprecision(17);
      for (int i = 0; i < sys.dim(); ++i) os << "x" << i << ",";
      for (int i = 0; i < sys.count(); ++i) os << "pi" << i << (i + 1 < sys.count() ? "," : "\n");
      for (const auto& x : pts) {
        for (int i = 0; i < sys.dim(); ++i) os << x[i] << ",";
        const Vec p = pi_coords(sys, x);
        for (int i = 0; i < sys.count(); ++i) os << p[i] << (i + 1 < sys.count() ? "," : "\n");
      }
      emit(f_out, os.str());
      return 0;
    }

    if (*compose) {
      const auto sys = load_system(o_system);
      const auto spec = builtin_spec(o_foliation, sys.m());
      const Vec x = fiber_sample(sys, parse_disk_point(o_x, sys.count()), 1, o_seed).front();
      auto class_json = [](const ComposedClass& cc) {
        json j{{"r", cc.r}};
        if (cc.tail) j["tail"] = std::vector<double>(cc.tail->data(), cc.tail->data() + cc.tail->size());
        else j["tail"] = nullptr;
        return j;
      };
      json out{{"foliation", o_foliation}, {"x", class_json(composed_class(sys, spec, x))}};
      if (!o_y.empty()) {
        const Vec y = fiber_sample(sys, parse_disk_point(o_y, sys.count()), 1, splitmix64(o_seed + 1)).front();
        out["y"] = class_json(composed_class(sys, spec, y));
        out["same_leaf"] = same_leaf(sys, spec, x, y, 1e-9);
        out["quotient_distance"] = composed_quotient_distance(sys, spec, x, y);
        if (o_budget > 0) {
          LeafDistanceOptions opts;
          opts.budget = o_budget;
          opts.seed = o_seed;
          out["ambient_distance"] = leaf_to_leaf_ambient_distance(sys, spec, x, y, opts);
        }
      }
      emit(o_out, out.dump(2) + "\n");
      return 0;
    }

    if (*homog) {
      EquivalenceProfile p;
      if (!h_system.empty()) {
        p = equivalence_profile(load_system(h_system));
      } else {
        if (h_m < 1 || h_k < 1) throw UsageError("homogeneity needs --system or --m and --k");
        p.m = h_m;
        p.k = h_k;
        if (h_kappa >= 0) p.kappa = h_kappa;
      }
      const auto verdict = classify_homogeneity(p);
      std::cout << verdict.label() << " (" << verdict.source << ")\n";
      return 0;
    }

    if (*report) {
      const auto result = run_matrix(default_plan(r_max_dim, r_seed));
      json rows = json::array();
      for (const auto& e : result.entries) {
        json row{{"suite", e.config.suite}};
        if (e.config.system->provenance())
          row["system"] = {{"m", e.config.system->m()}, {"k", e.config.system->provenance()->k},
                           {"flips", e.config.system->provenance()->flips}};
        if (e.report) row["pass"] = e.report->pass, row["max_violation"] = e.report->max_violation();
        else row["error"] = e.error;
        rows.push_back(std::move(row));
      }
      const json summary{{"passed", result.summary.passed},
                         {"failed", result.summary.failed},
                         {"errors", result.summary.errors},
                         {"failures", result.summary.lines},
                         {"runs", rows}};
      if (!r_out.empty()) write_file_atomic(r_out, summary.dump(2) + "\n");
      for (const auto& line : result.summary.lines) std::cout << line << "\n";
      std::cout << result.summary.passed << " passed, " << result.summary.failed << " failed, " << result.summary.errors
                << " errors\n";
      return result.summary.failed == 0 && result.summary.errors == 0 ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const IncompatibleSuite& e) {
    std::cerr << "incompatible: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
