// Acceptance criteria at full sample counts. One PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cfol/clifford.hpp"
#include "cfol/homogeneity.hpp"
#include "cfol/io.hpp"
#include "cfol/verify.hpp"

using namespace cfol;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Criterion {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

std::shared_ptr<const CliffordSystem> sys(int m, int k, int flips = 0, int max_dim = kDefaultMaxDim) {
  return std::make_shared<const CliffordSystem>(build_system(m, k, flips, {max_dim}));
}

std::string label(const CliffordSystem& c) { return to_string(equivalence_profile(c)); }

// Systems with m in 1..12, k in 1..4, 2l <= 512, (1,1) excluded; both extreme flip counts when m = 0 mod 4.
std::vector<std::shared_ptr<const CliffordSystem>> matrix() {
  std::vector<std::shared_ptr<const CliffordSystem>> out;
  for (int m = 1; m <= 12; ++m)
    for (int k = 1; k <= 4; ++k) {
      if (m == 1 && k == 1) continue;
      if (2 * k * delta(m) > 512) continue;
      out.push_back(sys(m, k, 0));
      if (m % 4 == 0) out.push_back(sys(m, k, k));
    }
  return out;
}

VerificationReport run(const std::string& suite, const std::shared_ptr<const CliffordSystem>& c, std::int64_t samples,
                       std::uint64_t seed = 1, int budget = 200, const std::string& foliation = "points") {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.system = c;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.budget = budget;
  cfg.foliation = foliation;
  return run_suite(cfg);
}

// Suite must pass, and each named check must sit within the criterion's own bound.
void expect(Criterion& cr, const VerificationReport& r, const std::map<std::string, double>& bounds,
            const std::string& where) {
  if (!r.pass)
    for (const auto& c : r.checks)
      if (!c.pass) cr.fail(where + " " + r.suite + "." + c.name + " violation " + std::to_string(c.violation));
  for (const auto& [name, bound] : bounds) {
    bool found = false;
    for (const auto& c : r.checks)
      if (c.name == name) {
        found = true;
        if (!(c.violation <= bound))
          cr.fail(where + " " + name + " = " + std::to_string(c.violation) + " > " + std::to_string(bound));
      }
    if (!found) cr.fail(where + " missing check " + name);
  }
}

int report(int id, const std::string& title, const Criterion& cr, double secs) {
  std::printf("C%-2d %s  %-44s %7.2fs%s%s\n", id, cr.ok ? "PASS" : "FAIL", title.c_str(), secs,
              cr.detail.empty() ? "" : "  ", cr.detail.c_str());
  std::fflush(stdout);
  return cr.ok ? 0 : 1;
}

}  // namespace

int main() {
  int failures = 0;
  const auto all = matrix();
  auto timed = [&](int id, const std::string& title, const std::function<void(Criterion&)>& body) {
    Criterion cr;
    const auto t0 = Clock::now();
    try {
      body(cr);
    } catch (const std::exception& e) {
      cr.fail(std::string("exception: ") + e.what());
    }
    failures += report(id, title, cr, seconds_since(t0));
  };

  timed(1, "relations exact on the (m,k) matrix", [&](Criterion& cr) {
    const auto t0 = Clock::now();
    int count = 0;
    for (int m = 1; m <= 12; ++m)
      for (int k = 1; k <= 4; ++k) {
        if (m == 1 && k == 1) continue;
        if (2 * k * delta(m) > 512) continue;
        for (int j = 0; j <= k; ++j) {
          const auto c = build_system(m, k, j);
          const auto r = verify_relations(c);
          cr.require(r.pass && r.max_violation() == 0.0, "relations violated on " + label(c));
          ++count;
        }
      }
    cr.require(count > 0, "empty matrix");
    cr.require(seconds_since(t0) <= 30.0, "runtime above 30 s");
  });

  timed(2, "delta table and recursion", [&](Criterion& cr) {
    const std::int64_t table[] = {1, 2, 4, 4, 8, 8, 8, 8};
    for (int m = 1; m <= 8; ++m) cr.require(delta(m) == table[m - 1], "delta(" + std::to_string(m) + ")");
    for (int m = 9; m <= 16; ++m) cr.require(delta(m) == 16 * delta(m - 8), "recursion at " + std::to_string(m));
    cr.require(delta(9) == 16 && delta(12) == 64, "delta(9), delta(12)");
  });

  timed(3, "disk image, 1e4 samples per system", [&](Criterion& cr) {
    for (const auto& c : all) expect(cr, run("disk_image", c, 10000), {{"disk_containment", 1e-12}}, label(*c));
  });

  timed(4, "boundary fibers, 1e3 samples per P", [&](Criterion& cr) {
    for (const auto& c : all)
      expect(cr, run("boundary_fibers", c, 1000), {{"fiber_membership", 1e-10}, {"eigenspace_dimension", 0.0}}, label(*c));
  });

  timed(5, "sphere quotient for (2,1), (4,1), (8,1)", [&](Criterion& cr) {
    for (auto [m, k] : {std::pair{2, 1}, {4, 1}, {8, 1}})
      expect(cr, run("sphere_quotient", sys(m, k), 10000),
             {{"image_is_boundary_sphere", 1e-10}, {"preimage_construction", 1e-10}}, label(*sys(m, k)));
  });

  timed(6, "surjectivity and submersion", [&](Criterion& cr) {
    for (const auto& c : all) {
      if (c->dim() > 128) continue;
      if (!incompatibility("focal_and_fibers", *c))
        expect(cr, run("focal_and_fibers", c, 1000), {{"surjectivity_grid", 1e-9}}, label(*c));
      if (!incompatibility("submersion_rank", *c))
        expect(cr, run("submersion_rank", c, 100), {{"jacobian_rank", 0.0}, {"finite_difference_gradient", 1e-6}},
               label(*c));
    }
  });

  timed(7, "factorization on (1,2)", [&](Criterion& cr) {
    expect(cr, run("factorization_m_plus_1", sys(1, 2), 1000),
           {{"projection_factorization", 0.0}, {"witness_same_fiber", 1e-10}, {"witness_opposite_coordinate", 1e-10}},
           "(1,2)");
  });

  timed(8, "geodesics and quotient metric", [&](Criterion& cr) {
    for (const auto& c : {sys(1, 2), sys(2, 2), sys(3, 2), sys(4, 2, 1), sys(5, 1), sys(8, 1), sys(9, 1)}) {
      expect(cr, run("geodesics", c, 100),
             {{"projection_formula", 1e-10}, {"lifted_great_circle", 1e-9}, {"unit_speed", 1e-8}}, label(*c));
      expect(cr, run("quotient_metric", c, 1000), {}, label(*c));
    }
  });

  timed(9, "reflection and spin symmetries, 1e3 trials", [&](Criterion& cr) {
    for (const auto& c : {sys(1, 2), sys(2, 2), sys(3, 1), sys(4, 3, 1), sys(7, 1), sys(8, 2)})
      expect(cr, run("symmetry", c, 1000), {{"reflection_identity", 1e-10}, {"spin_identity", 1e-9}}, label(*c));
  });

  timed(10, "FKM consistency, 1e4 samples", [&](Criterion& cr) {
    for (const auto& c : {sys(1, 2), sys(2, 3), sys(3, 2), sys(4, 2), sys(5, 1), sys(6, 2), sys(8, 1), sys(9, 1)}) {
      std::map<std::string, double> bounds{{"direct_vs_factored", 1e-12}, {"boundary_level", 1e-10}};
      // M_+ is empty on the sphere-quotient systems
      if (c->l() > c->m()) bounds["focal_level"] = 1e-10;
      expect(cr, run("fkm_consistency", c, 10000), bounds, label(*c));
    }
  });

  timed(11, "invariant classification", [&](Criterion& cr) {
    const auto a = equivalence_profile(build_system(4, 3, 0)), b = equivalence_profile(build_system(4, 3, 1));
    cr.require(a.kappa == 3 && b.kappa == 1, "kappa values for (4,3)");
    cr.require(equivalence_profile(build_system(4, 3, 2)) == b && equivalence_profile(build_system(4, 3, 3)) == a,
               "flip symmetry j <-> k-j");
    cr.require(equivalence_profile(build_system(3, 2, 0)) == equivalence_profile(build_system(3, 2, 1)),
               "m = 3 flip sensitivity");
    for (const auto& c : {sys(4, 3, 0), sys(4, 3, 1)})
      expect(cr, run("invariants_classification", c, 10), {{"conjugation_invariance", 1e-9}, {"class_count", 0.0}},
             label(*c));
    for (const auto& c : {sys(3, 2, 0), sys(3, 2, 1)})
      expect(cr, run("invariants_classification", c, 10),
             {{"conjugation_invariance", 1e-9}, {"flip_insensitivity", 0.0}}, label(*c));
  });

  timed(12, "homogeneity for m in {1,2,4}, k in {2,3}", [&](Criterion& cr) {
    for (int m : {1, 2, 4})
      for (int k : {2, 3}) {
        const auto c = sys(m, k);
        expect(cr, run("homogeneous_orbits", c, 1000), {{"orbit_invariance", 1e-10}}, label(*c));
        expect(cr, run("normal_forms", c, 1000), {{"fiber_constant", 1e-9}, {"fiber_equivalence", 0.0}}, label(*c));
      }
    using S = HomogeneityVerdict::Status;
    for (int m = 1; m <= 12; ++m)
      for (int k = 1; k <= 4; ++k) {
        if (m == 1 && k == 1) continue;
        const std::int64_t l = k * delta(m);
        if (l == m + 1) continue;
        for (int j = 0; j <= (m % 4 == 0 ? k : 0); ++j) {
          const auto p = equivalence_profile(build_system(m, k, j, {1 << 12}));
          const auto v = classify_homogeneity(p);
          S want = S::NonHomogeneous;
          std::string group;
          if (l == m) {
            if (m == 2) { want = S::Homogeneous; group = "U(1)"; }
            if (m == 4) { want = S::Homogeneous; group = "Sp(1)"; }
          } else if (m == 1) {
            want = S::Homogeneous; group = "SO(" + std::to_string(k) + ")";
          } else if (m == 2) {
            want = S::Homogeneous; group = "SU(" + std::to_string(k) + ")";
          } else if (m == 4 && p.kappa == k) {
            want = S::Homogeneous; group = "Sp(" + std::to_string(k) + ")";
          }
          cr.require(v.status == want, "verdict for " + to_string(p));
          if (want == S::Homogeneous) cr.require(v.group == group, "group for " + to_string(p));
        }
      }
  });

  timed(13, "composed foliations", [&](Criterion& cr) {
    for (const auto& c : {sys(2, 2), sys(1, 3), sys(4, 2), sys(8, 1), sys(8, 2)})
      expect(cr, run("composed_identities", c, 1000),
             {{"points_reproduces_fc", 0.0}, {"one_leaf_reproduces_fkm", 0.0}}, label(*c));
    for (const auto& c : {sys(8, 1), sys(8, 2)})
      expect(cr, run("composed_identities", c, 1000), {{"tensor_svd_invariance", 1e-10}}, label(*c));
    expect(cr, run("transnormality", sys(2, 2), 100, 1, 10000, "points"), {{"ambient_vs_quotient", 1e-2}}, "(2,2) points");
    expect(cr, run("transnormality", sys(8, 2), 100, 1, 10000, "tensor_svd"), {{"ambient_vs_quotient", 1e-2}},
           "(8,2) tensor_svd");
    expect(cr, run("diameter", sys(8, 1), 10000), {{"diameter_upper", 1e-6}}, "(8,1)");
    for (const auto& c : {sys(8, 2), sys(8, 3, 1)})
      expect(cr, run("diameter", c, 10000), {{"diameter_upper", 1e-6}, {"diameter_lower", 0.05}}, label(*c));
  });

  timed(14, "determinism under re-runs", [&](Criterion& cr) {
    for (const auto& c : {sys(2, 2), sys(4, 2, 1), sys(8, 2)})
      for (const auto& id : suite_ids()) {
        if (incompatibility(id, *c)) continue;
        const std::int64_t n = id == "transnormality" ? 5 : std::min<std::int64_t>(default_samples(id), 500);
        const auto a = report_to_json(run(id, c, n, 77, 100)).dump();
        const auto b = report_to_json(run(id, c, n, 77, 100)).dump();
        cr.require(a == b, id + " on " + label(*c) + " differs between runs");
      }
  });

  {
    Criterion cr;
    const auto t0 = Clock::now();
    const auto res = run_matrix(default_plan());
    cr.require(res.summary.failed == 0 && res.summary.errors == 0, "default plan has failures");
    const double secs = seconds_since(t0);
    cr.require(secs < 300.0, "default plan above 5 minutes");
    std::printf("    default plan: %zu runs, %d passed, %d failed, %d errors in %.1fs (%s)\n", res.entries.size(),
                res.summary.passed, res.summary.failed, res.summary.errors, secs, cr.ok ? "PASS" : "FAIL");
    failures += cr.ok ? 0 : 1;
  }
  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED");
  return failures == 0 ? 0 : 1;
}
