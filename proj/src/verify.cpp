#include "cfol/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <cstdio>
#include <set>

#include "cfol/composed.hpp"
#include "cfol/foliation.hpp"
#include "cfol/homogeneity.hpp"

namespace cfol {

namespace {

constexpr double kPi = std::numbers::pi;

struct Ctx {
  const SuiteConfig& cfg;
  const CliffordSystem& c;
  VerificationReport& rep;
  std::int64_t n;
  Sampler base;

  Sampler rng(std::uint64_t stream, std::int64_t i) const { return base.child(stream).child(static_cast<std::uint64_t>(i)); }

  double tol(const std::string& name, double fallback) const {
    const auto it = cfg.tolerances.find(name);
    return it == cfg.tolerances.end() ? fallback : it->second;
  }
  void add(const std::string& name, const std::string& claim, double violation, double fallback) {
    rep.add(name, claim, violation, tol(name, fallback));
  }
};

// Running maximum that keeps NaN sticky.
struct Worst {
  double value = 0.0;
  void operator()(double v) {
    if (std::isnan(v) || std::isnan(value)) value = std::numeric_limits<double>::quiet_NaN();
    else value = std::max(value, v);
  }
};

std::pair<Vec, Vec> orthonormal_pair(int n, Sampler& s) {
  const Vec p = s.unit_sphere(n);
  for (;;) {
    Vec q = s.gaussian(n);
    for (int pass = 0; pass < 2; ++pass) q -= q.dot(p) * p;
    if (q.norm() > 1e-8) return {p, q.normalized()};
  }
}

bool is_rebuilt(const CliffordSystem& c) {
  if (!c.exact() || !c.provenance()) return false;
  try {
    const auto rebuilt = build_system(c.m(), c.provenance()->k, c.provenance()->flips, {1 << 30});
    return rebuilt.l() == c.l() && rebuilt.perm_generators() == c.perm_generators();
  } catch (const std::exception&) {
    return false;
  }
}

std::int64_t per_stream(const Ctx& ctx) { return std::max<std::int64_t>(1, ctx.n); }

// ---------------------------------------------------------------------------

void suite_relations(Ctx& ctx) {
  const double tol = ctx.c.exact() ? 0.0 : 1e-12;
  const auto r = verify_relations(ctx.c, tol);
  for (const auto& check : r.checks) ctx.add(check.name, check.claim, check.violation, check.tol);
  ctx.rep.samples = ctx.c.count();
}

void suite_disk_image(Ctx& ctx) {
  const auto& c = ctx.c;
  Worst disk, even, ident;
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    const Vec x = s.unit_sphere(c.dim());
    const Vec v = pi_c(c, x).coords;
    disk(std::max(0.0, v.norm() - 1.0));
    even((pi_coords(c, -x) - v).cwiseAbs().maxCoeff());
    const Vec p = s.gaussian(c.count()), q = s.gaussian(c.count());
    ident(inner_product_identity_residual(c, p, q, x) / std::max(1.0, p.norm() * q.norm()));
  }
  ctx.add("disk_containment", "pi_C maps the unit sphere into the closed unit disk D_C", disk.value, 1e-12);
  ctx.add("evenness", "pi_C(-x) = pi_C(x)", even.value, 0.0);
  ctx.add("inner_product_identity", "<Px, Qx> = <P, Q> |x|^2 for P, Q in the span", ident.value, 1e-12);
}

void suite_boundary_fibers(Ctx& ctx) {
  const auto& c = ctx.c;
  Worst member, unit, dim;
  const int n_p = 4;
  for (int j = 0; j < n_p; ++j) {
    Sampler s = ctx.rng(0, j);
    const Vec p = j == 0 ? Vec(Vec::Unit(c.count(), 0)) : s.unit_sphere(c.count());
    const auto pts = boundary_fiber_sample(c, p, static_cast<int>(ctx.n), ctx.rng(1, j).seed());
    for (const auto& x : pts) {
      member((pi_coords(c, x) - p).norm());
      member((pi_coords(c, -x) - p).norm());
      unit(std::abs(x.norm() - 1.0));
    }
    const EigenSplit split = eig_split(c.span_matrix(p));
    dim(std::abs(static_cast<double>(split.plus.cols()) - c.l()) + std::abs(static_cast<double>(split.minus.cols()) - c.l()));
  }
  ctx.rep.samples = ctx.n * n_p;
  ctx.add("fiber_membership", "the fiber over a boundary point P is the unit sphere of E_+(P)", member.value, 1e-10);
  ctx.add("sample_unit_norm", "boundary fiber samples are unit vectors", unit.value, 1e-12);
  ctx.add("eigenspace_dimension", "dim E_+(P) = dim E_-(P) = l", dim.value, 0.0);
}

void suite_sphere_quotient(Ctx& ctx) {
  const auto& c = ctx.c;
  Worst image, pre;
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    const Vec x = s.unit_sphere(c.dim());
    image(std::abs(pi_coords(c, x).norm() - 1.0));
  }
  const std::int64_t targets = std::min<std::int64_t>(100, per_stream(ctx));
  for (std::int64_t i = 0; i < targets; ++i) {
    Sampler s = ctx.rng(1, i);
    const Vec p = s.unit_sphere(c.count());
    const Vec x = boundary_fiber_sample(c, p, 1, ctx.rng(2, i).seed()).front();
    pre((pi_coords(c, x) - p).norm());
  }
  ctx.add("image_is_boundary_sphere", "for l = m the image of pi_C is the sphere S_C", image.value, 1e-10);
  ctx.add("preimage_construction", "every point of S_C has a nonempty preimage", pre.value, 1e-10);
}

std::vector<Vec> disk_grid(int count) {
  std::vector<Vec> grid;
  for (int i = 0; i < 10; ++i) {
    const double r = i / 9.0;
    const double phi = i * kPi / 5.0;
    Vec v = Vec::Zero(count);
    v[i % count] += std::cos(phi);
    v[(i + 1) % count] += std::sin(phi);
    if (v.norm() < 1e-12) v[0] = 1.0;
    grid.push_back(r * v.normalized());
  }
  return grid;
}

void suite_focal_and_fibers(Ctx& ctx) {
  const auto& c = ctx.c;
  const auto focal = mplus_sample(c, static_cast<int>(ctx.n), ctx.rng(0, 0).seed());
  Worst member, vdim, unit, grid_res;
  for (std::size_t i = 0; i < focal.points.size(); ++i) {
    const Vec& x = focal.points[i];
    member(pi_coords(c, x).norm());
    unit(std::abs(x.norm() - 1.0));
  }
  // dim V_{x+} = l - m, measured from the images P_i x+ inside E_-(P_0)
  const std::int64_t checks = std::min<std::int64_t>(10, per_stream(ctx));
  const Vec e0 = Vec::Unit(c.count(), 0);
  for (std::int64_t i = 0; i < checks; ++i) {
    const Vec xp = boundary_fiber_sample(c, e0, 1, ctx.rng(1, i).seed()).front();
    Mat images(c.dim(), c.m());
    for (int j = 1; j < c.count(); ++j) images.col(j - 1) = c.apply(j, xp);
    const RankDecision rank = band_rank(images);
    vdim(std::abs(static_cast<double>(c.l() - rank.rank) - focal.v_dim) + (rank.marginal ? 1.0 : 0.0));
  }
  const auto grid = disk_grid(c.count());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto pts = fiber_sample(c, grid[g], 5, ctx.rng(2, static_cast<std::int64_t>(g)).seed());
    for (const auto& x : pts) {
      grid_res((pi_coords(c, x) - grid[g]).norm());
      unit(std::abs(x.norm() - 1.0));
    }
  }
  ctx.add("focal_membership", "M_+ = pi_C^{-1}(0)", member.value, 1e-10);
  ctx.add("sample_unit_norm", "focal and fiber samples are unit vectors", unit.value, 1e-12);
  ctx.add("v_dimension", "V_{x+} = E_-(P_0) minus span(P_i x+) has dimension l - m", vdim.value, 0.0);
  ctx.add("surjectivity_grid", "pi_C is surjective onto D_C for l > m+1", grid_res.value, 1e-9);
  ctx.add("fibers_connected", "fiber spheres of V^1 have positive dimension for l > m+1", focal.connected ? 0.0 : 1.0, 0.0);
}

void suite_submersion_rank(Ctx& ctx) {
  const auto& c = ctx.c;
  const bool disk = c.l() > c.m() + 1;
  Worst rank, tangent, fd, frame;
  const double h = 1e-5;
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    Vec x;
    if (disk) {
      const double r = 0.05 + 0.9 * s.uniform();
      x = fiber_sample(c, r * s.unit_sphere(c.count()), 1, ctx.rng(1, i).seed()).front();
    } else {
      x = s.unit_sphere(c.dim());
    }
    const Mat jac = pi_jacobian(c, x);
    const RankDecision d = band_rank(jac);
    rank(std::abs(d.rank - c.count()) + (d.marginal ? 1.0 : 0.0));
    const HorizontalFrame hf = horizontal_basis(c, x);
    for (const auto& xv : hf.vectors) tangent(std::abs(xv.dot(x)));
    for (int a = 0; a < c.count(); ++a) {
      const Vec& dir = hf.vectors[a];
      const Vec xp = (x + h * dir).normalized(), xm = (x - h * dir).normalized();
      const Vec numeric = (pi_coords(c, xp) - pi_coords(c, xm)) / (2.0 * h);
      for (int b = 0; b < c.count(); ++b) fd(std::abs(numeric[b] - hf.vectors[b].dot(dir)));
    }
  }
  if (c.l() >= c.m() + 1) {
    const auto focal = mplus_sample(c, static_cast<int>(std::min<std::int64_t>(ctx.n, 100)), ctx.rng(2, 0).seed());
    for (const auto& x : focal.points) {
      const HorizontalFrame hf = horizontal_basis(c, x);
      for (int a = 0; a < c.count(); ++a)
        for (int b = 0; b < c.count(); ++b) frame(std::abs(hf.vectors[a].dot(hf.vectors[b]) - (a == b ? 4.0 : 0.0)));
    }
  }
  ctx.add("jacobian_rank", "pi_C is a submersion at interior points (rank m+1, no marginal singular values)", rank.value, 0.0);
  ctx.add("horizontal_tangency", "X_P(x) is tangent to the sphere", tangent.value, 1e-12);
  ctx.add("finite_difference_gradient", "d pi_j (X_{P_i}) = <X_{P_j}, X_{P_i}>", fd.value, 1e-6);
  ctx.add("focal_frame", "on M_+ the vectors X_{P_i} = 2 P_i x are orthogonal of norm 2", frame.value, 1e-10);
}

void suite_factorization(Ctx& ctx) {
  const auto& c = ctx.c;
  const int m = c.m();
  const auto full = build_system(m + 1, 1, 0, {1 << 30});
  std::vector<int> idx(m + 1);
  for (int i = 0; i <= m; ++i) idx[i] = i;
  const auto sub = sub_system(full, idx);
  const bool same_profile = equivalence_profile(sub) == equivalence_profile(c);
  Worst fact, sphere;
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    const Vec x = s.unit_sphere(c.dim());
    const Vec pf = pi_coords(full, x);
    fact((pi_coords(sub, x) - pf.head(m + 1)).cwiseAbs().maxCoeff());
    sphere(std::abs(pf.norm() - 1.0));
  }
  // Witness: one fiber of pi_sub meets both signs of the extended coordinate.
  Sampler s = ctx.rng(1, 0);
  const double extra = 0.6;
  const Vec w = std::sqrt(1.0 - extra * extra) * s.unit_sphere(m + 1);
  Vec a(m + 2), b(m + 2);
  a << w, extra;
  b << w, -extra;
  const Vec x = boundary_fiber_sample(full, a, 1, ctx.rng(2, 0).seed()).front();
  const Vec y = boundary_fiber_sample(full, b, 1, ctx.rng(3, 0).seed()).front();
  const double same_fiber = (pi_coords(sub, x) - pi_coords(sub, y)).norm();
  const double opposite = std::abs(pi_coords(full, x)[m + 1] - extra) + std::abs(pi_coords(full, y)[m + 1] + extra);
  ctx.add("profile_matches_extension", "the system is equivalent to the restriction of C_{m+1,1}", same_profile ? 0.0 : 1.0, 0.0);
  ctx.add("projection_factorization", "pi_C = Pr o pi_C' for the extension C'", fact.value, 0.0);
  ctx.add("extension_image_sphere", "pi_C' maps onto the sphere S_C'", sphere.value, 1e-10);
  ctx.add("witness_same_fiber", "the witness pair lies in one fiber of pi_C", same_fiber, 1e-10);
  ctx.add("witness_opposite_coordinate", "the witness pair has opposite extended coordinate", opposite, 1e-10);
}

void suite_geodesics(Ctx& ctx) {
  const auto& c = ctx.c;
  Worst proj, qb, unit, ortho, lift, speed;
  const int grid = 100;
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    const Vec p = s.unit_sphere(c.count());
    const auto g = random_horizontal_geodesic(c, p, s);
    const auto [pp, q] = project_geodesic_params(c, g);
    qb(std::max(0.0, q.norm() - 1.0) + std::abs(pp.dot(q)));
    ortho(std::abs(g.x_plus.dot(g.x_minus)));
    for (int t = 0; t < grid; ++t) {
      const double tt = kPi * t / (grid - 1);
      const Vec x = geodesic_eval(g, tt);
      unit(std::abs(x.norm() - 1.0));
      proj((pi_coords(c, x) - (-std::cos(2 * tt) * pp + std::sin(2 * tt) * q)).norm());
    }
    Vec a = Vec::Zero(c.count() + 1), b(c.count() + 1);
    a.head(c.count()) = -0.5 * pp;
    b << 0.5 * q, 0.5 * disk_height(q);
    std::vector<Vec> proj_pts;
    for (int t = 0; t < grid; ++t) {
      const double tt = 0.5 * kPi * t / (grid - 1);
      const Vec v = pi_coords(c, geodesic_eval(g, tt));
      lift((quotient_lift(v) - (std::cos(2 * tt) * a + std::sin(2 * tt) * b)).norm());
      proj_pts.push_back(v);
    }
    lift(std::abs(a.norm() - 0.5) + std::abs(b.norm() - 0.5) + std::abs(a.dot(b)));
    for (int s1 = 0; s1 < grid; s1 += 7)
      for (int s2 = 0; s2 < grid; s2 += 5) {
        const double d = 0.5 * kPi * std::abs(s1 - s2) / (grid - 1);
        speed(std::abs(quotient_distance(proj_pts[s1], proj_pts[s2]) - d));
      }
  }
  ctx.add("projection_formula", "pi_C(gamma(t)) = -cos(2t) P + sin(2t) Q", proj.value, 1e-10);
  ctx.add("q_bounds", "|Q| <= 1 and <P, Q> = 0", qb.value, 1e-12);
  ctx.add("geodesic_unit", "horizontal geodesics stay on the unit sphere", unit.value, 1e-12);
  ctx.add("eigenvector_orthogonality", "<x_+, x_-> = 0", ortho.value, 1e-12);
  ctx.add("lifted_great_circle", "the lifted projection is a great circle cos(2t) A + sin(2t) B", lift.value, 1e-9);
  ctx.add("unit_speed", "projected horizontal geodesics have unit speed in the curvature-4 metric", speed.value, 1e-8);
}

void suite_quotient_metric(Ctx& ctx) {
  const auto& c = ctx.c;
  const int n = c.count();
  Worst axioms, antipode, lift_norm, angle;
  auto disk_point = [n](Sampler& s) {
    const double r = std::pow(s.uniform(), 1.0 / n);
    return Vec(r * s.unit_sphere(n));
  };
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    const Vec v = disk_point(s), w = disk_point(s), z = disk_point(s);
    const double dvw = quotient_distance(v, w), dwz = quotient_distance(w, z), dvz = quotient_distance(v, z);
    axioms(quotient_distance(v, v));
    axioms(std::abs(dvw - quotient_distance(w, v)));
    axioms(std::max(0.0, dvz - dvw - dwz));
    lift_norm(std::abs(quotient_lift(v).norm() - 0.5));
    const Vec p = s.unit_sphere(n);
    antipode(std::abs(quotient_distance(p, -p) - 0.5 * kPi));
  }
  // Fibers over boundary points realize the quotient distance.
  const std::int64_t pairs = std::min<std::int64_t>(c.dim() > 128 ? 3 : 10, per_stream(ctx));
  for (std::int64_t i = 0; i < pairs; ++i) {
    Sampler s = ctx.rng(1, i);
    const Vec p = s.unit_sphere(n), q = s.unit_sphere(n);
    const Mat bp = eig_split(c.span_matrix(p)).plus, bq = eig_split(c.span_matrix(q)).plus;
    const double top = std::min(1.0, singular_values(bp.transpose() * bq)[0]);
    const double ambient = std::acos(top);
    angle(std::abs(ambient - quotient_distance(p, q)));
  }
  ctx.add("metric_axioms", "the curvature-4 disk distance is a metric", axioms.value, 1e-12);
  ctx.add("antipodal_boundary", "d(P, -P) = pi/2 on S_C", antipode.value, 1e-12);
  ctx.add("lift_norm", "the hemisphere lift has norm 1/2", lift_norm.value, 1e-12);
  ctx.add("principal_angle", "the distance between E_+(P) and E_+(P') equals d(P, P')", angle.value, 1e-7);
}

void suite_symmetry(Ctx& ctx) {
  const auto& c = ctx.c;
  Worst refl, spin, unit, calib;
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    const Vec x = s.unit_sphere(c.dim());
    const Vec v = pi_coords(c, x);
    const Vec p = s.unit_sphere(c.count());
    const Vec px = reflect_symmetry(c, p, x);
    refl((pi_coords(c, px) - reflect_disk(v, p)).norm());
    unit(std::abs(px.norm() - 1.0));
    const auto [a, b] = orthonormal_pair(c.count(), s);
    const double theta = kPi * (2.0 * s.uniform() - 1.0);
    const Vec gx = spin_rotate(c, a, b, theta, x);
    spin((pi_coords(c, gx) - spin_disk_action(v, a, b, theta)).norm());
    unit(std::abs(gx.norm() - 1.0));
  }
  // Orientation convention on the (m, k) = (1, 2) system.
  const auto c12 = build_system(1, 2, 0);
  const Vec x = Vec::Unit(4, 0);
  for (int i = 0; i < 16; ++i) {
    const double theta = -kPi + 2.0 * kPi * i / 16.0;
    const Vec gx = spin_rotate(c12, Vec::Unit(2, 0), Vec::Unit(2, 1), theta, x);
    Vec expected(2);
    expected << std::cos(2 * theta), -std::sin(2 * theta);
    calib((pi_coords(c12, gx) - expected).norm());
  }
  ctx.add("reflection_identity", "pi_C(Px) = -pi_C(x) + 2 <pi_C(x), P> P", refl.value, 1e-10);
  ctx.add("spin_identity", "cos(t) + sin(t) PQ rotates pi_C by 2t in the (P, Q) plane", spin.value, 1e-9);
  ctx.add("symmetry_unit", "reflections and spin rotations are isometries", unit.value, 1e-12);
  ctx.add("spin_orientation", "spin rotation carries P towards -Q for positive angles", calib.value, 1e-12);
}

void suite_fkm_consistency(Ctx& ctx) {
  const auto& c = ctx.c;
  Worst factor, boundary, focal, interior;
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    const FkmValue f = fkm_f0(c, s.unit_sphere(c.dim()));
    factor(std::abs(f.direct - f.factored));
  }
  const int batch = static_cast<int>(std::min<std::int64_t>(ctx.n, 200));
  {
    Sampler s = ctx.rng(1, 0);
    for (const auto& x : boundary_fiber_sample(c, s.unit_sphere(c.count()), batch, ctx.rng(1, 1).seed()))
      boundary(std::abs(fkm_f0(c, x).direct + 1.0));
  }
  ctx.add("direct_vs_factored", "F restricted to the sphere equals 1 - 2 |pi_C|^2", factor.value, 1e-12);
  ctx.add("boundary_level", "F = -1 on boundary fibers (M_-)", boundary.value, 1e-10);
  if (c.l() >= c.m() + 1) {
    for (const auto& x : mplus_sample(c, batch, ctx.rng(2, 0).seed()).points) focal(std::abs(fkm_f0(c, x).direct - 1.0));
    ctx.add("focal_level", "F = +1 on M_+", focal.value, 1e-10);
  }
  if (c.l() > c.m() + 1) {
    Sampler s = ctx.rng(3, 0);
    const Vec v = 0.5 * s.unit_sphere(c.count());
    for (const auto& x : fiber_sample(c, v, batch, ctx.rng(3, 1).seed())) interior(std::abs(fkm_f0(c, x).direct - 0.5));
    ctx.add("interior_level", "F = 1/2 on the fibers over |v| = 1/2", interior.value, 1e-10);
  }
}

void suite_invariants(Ctx& ctx) {
  const auto& c = ctx.c;
  const EquivalenceProfile profile = equivalence_profile(c);
  const double base = trace_invariant(c);
  if (c.provenance()) {
    const int k = c.provenance()->k, j = c.provenance()->flips;
    const double expected = c.m() % 4 == 0 ? std::abs(k - 2 * j) : 0.0;
    ctx.add("trace_invariant_value", "|tr(P_0 ... P_m)| / (2 delta(m)) = |k - 2j|, and 0 for m != 0 mod 4",
            std::abs(base - expected), 1e-9);
  }
  Worst conj;
  const std::int64_t trials = std::min<std::int64_t>(ctx.n, c.dim() > 128 ? 2 : ctx.n);
  for (std::int64_t i = 0; i < trials; ++i) {
    Sampler s = ctx.rng(0, i);
    const auto cc = conjugate_system(c, haar_orthogonal(c.dim(), s));
    conj(std::abs(trace_invariant(cc) - base) + (equivalence_profile(cc) == profile ? 0.0 : 1.0));
  }
  ctx.rep.samples = trials;
  ctx.add("conjugation_invariance", "the profile is invariant under orthogonal conjugation", conj.value, 1e-9);
  const int k = profile.k;
  std::set<int> classes;
  std::set<std::string> profiles;
  for (int j = 0; j <= k; ++j) {
    const auto sys = build_system(c.m(), k, j, {1 << 30});
    const auto pr = equivalence_profile(sys);
    profiles.insert(to_string(pr));
    if (pr.kappa) classes.insert(*pr.kappa);
  }
  if (c.m() % 4 == 0) {
    ctx.add("class_count", "for m = 0 mod 4 the invariant takes floor(k/2) + 1 values k - 2j",
            std::abs(static_cast<double>(classes.size()) - (k / 2 + 1)), 0.0);
    double range = 0.0;
    for (int v : classes)
      if (v < 0 || v > k || (k - v) % 2 != 0) range = 1.0;
    ctx.add("kappa_range", "kappa lies in {k - 2j : 0 <= 2j <= k}", range, 0.0);
  } else {
    ctx.add("flip_insensitivity", "for m != 0 mod 4 the geometric class depends only on (m, k)",
            static_cast<double>(profiles.size()) - 1.0, 0.0);
  }
}

void suite_homogeneous_orbits(Ctx& ctx) {
  const auto& c = ctx.c;
  const EquivalenceProfile profile = equivalence_profile(c);
  const Field f = field_for_m(c.m());
  const int k = profile.k;
  Worst orbit, unitary, det;
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    const GroupElement g = sample_group_element(f, k, ctx.rng(0, i).seed());
    Sampler s = ctx.rng(1, i);
    const Vec x = s.unit_sphere(c.dim());
    orbit((pi_coords(c, diagonal_act(g, x)) - pi_coords(c, x)).norm());
    unitary(max_abs(g.real.transpose() * g.real - Mat::Identity(g.real.rows(), g.real.cols())));
    if (f == Field::C) {
      Eigen::MatrixXcd a(k, k);
      for (int r = 0; r < k; ++r)
        for (int t = 0; t < k; ++t) a(r, t) = {g.at(r, t).w, g.at(r, t).x};
      det(std::abs(a.determinant() - 1.0));
    } else if (f == Field::R) {
      det(std::abs(g.real.determinant() - 1.0));
    }
  }
  const auto verdict = classify_homogeneity(profile);
  ctx.add("orbit_invariance", "pi_C is invariant under the diagonal U(F, k) action", orbit.value, 1e-10);
  ctx.add("group_unitarity", "sampled group elements are orthogonal in the real representation", unitary.value, 1e-12);
  ctx.add("group_determinant", "SO and SU samples have determinant 1", det.value, 1e-12);
  ctx.add("verdict_homogeneous", "the decision table marks this system homogeneous",
          verdict.status == HomogeneityVerdict::Status::Homogeneous ? 0.0 : 1.0, 0.0);
}

void suite_normal_forms(Ctx& ctx) {
  const auto& c = ctx.c;
  const EquivalenceProfile profile = equivalence_profile(c);
  const Field f = field_for_m(c.m());
  const int k = profile.k;
  const int d = field_dim(f);
  Worst same, mismatch, unit, realize;
  auto check_pair = [&](const Vec& x, const Vec& y) {
    const double dn = normal_form_distance(normal_form(f, k, x), normal_form(f, k, y));
    const double dp = (pi_coords(c, x) - pi_coords(c, y)).norm();
    if ((dn <= 1e-9) != (dp <= 1e-8)) mismatch(1.0);
    else mismatch(0.0);
  };
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    const Vec x = s.unit_sphere(c.dim());
    const NormalForm nf = normal_form(f, k, x);
    unit(std::abs(nf.u1 * nf.u1 + nf.v1.squaredNorm() + nf.v2 * nf.v2 - 1.0));
    // orbit pair
    const GroupElement g = sample_group_element(f, k, ctx.rng(1, i).seed());
    const Vec gx = diagonal_act(g, x);
    same(normal_form_distance(nf, normal_form(f, k, gx)));
    check_pair(x, gx);
    check_pair(x, s.unit_sphere(c.dim()));
    // the representative lies in the same fiber
    std::vector<Quat> u(k), v(k);
    u[0] = Quat{nf.u1, 0.0, 0.0, 0.0};
    v[0] = nf.v1;
    if (k >= 2) v[1] = Quat{nf.v2, 0.0, 0.0, 0.0};
    Vec rep(c.dim());
    rep << from_quaternions(f, u), from_quaternions(f, v);
    realize((pi_coords(c, rep) - pi_coords(c, x)).norm());
  }
  if (c.l() > c.m() + 1) {
    const std::int64_t batches = std::max<std::int64_t>(1, ctx.n / 10);
    for (std::int64_t i = 0; i < batches; ++i) {
      Sampler s = ctx.rng(2, i);
      const Vec v = std::pow(s.uniform(), 1.0 / c.count()) * s.unit_sphere(c.count());
      const auto pts = fiber_sample(c, v, 10, ctx.rng(3, i).seed());
      for (std::size_t j = 1; j < pts.size(); ++j) {
        same(normal_form_distance(normal_form(f, k, pts[0]), normal_form(f, k, pts[j])));
        check_pair(pts[0], pts[j]);
      }
      // a neighbouring fiber at distance 1e-6 in the disk
      Vec w = v + 1e-6 * s.unit_sphere(c.count());
      if (w.norm() < 1.0) check_pair(pts[0], fiber_sample(c, w, 1, ctx.rng(4, i).seed()).front());
    }
  }
  (void)d;
  ctx.add("fiber_constant", "the normal form is constant on pi_C fibers", same.value, 1e-9);
  ctx.add("fiber_equivalence", "equal normal forms iff equal pi_C values", mismatch.value, 0.0);
  ctx.add("normal_form_unit", "u1^2 + |v1|^2 + v2^2 = 1", unit.value, 1e-12);
  ctx.add("representative_in_fiber", "(u1 e1, v1 e1 + v2 e2) lies in the fiber of (u, v)", realize.value, 1e-9);
}

void suite_composed_identities(Ctx& ctx) {
  const auto& c = ctx.c;
  const int n = c.count();
  const double tol = 1e-9;
  const auto points = builtin_spec("points", c.m());
  const auto one = builtin_spec("one_leaf", c.m());
  const auto height = builtin_spec("height", c.m());
  const bool disk = c.l() > c.m() + 1;
  Worst fc, fkm, radius_law, height_sep, reduction, apex;
  auto leaf_pair = [&](const Vec& x, const Vec& y) {
    const Vec vx = pi_coords(c, x), vy = pi_coords(c, y);
    fc((same_leaf(c, points, x, y, tol) == ((vx - vy).norm() <= tol)) ? 0.0 : 1.0);
    const bool one_same = same_leaf(c, one, x, y, tol);
    fkm((one_same == (std::abs(vx.norm() - vy.norm()) <= tol)) ? 0.0 : 1.0);
    for (const auto* spec : {&points, &one, &height})
      if (same_leaf(c, *spec, x, y, tol)) radius_law(std::max(0.0, std::abs(fkm_f0(c, x).direct - fkm_f0(c, y).direct) - 4.0 * tol));
    reduction(std::abs(composed_quotient_distance(c, points, x, y) - quotient_distance(vx, vy)));
  };
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    const Vec x = s.unit_sphere(c.dim());
    leaf_pair(x, -x);
    leaf_pair(x, s.unit_sphere(c.dim()));
    if (disk) {
      const double r = 0.1 + 0.8 * s.uniform();
      const Vec v = r * s.unit_sphere(n);
      const auto same_fiber = fiber_sample(c, v, 2, ctx.rng(1, i).seed());
      leaf_pair(same_fiber[0], same_fiber[1]);
      // equal radius, different height
      Vec w = v;
      w[0] = -w[0];
      if (std::abs(v[0]) > 0.05) {
        const Vec y = fiber_sample(c, w, 1, ctx.rng(2, i).seed()).front();
        leaf_pair(same_fiber[0], y);
        if (!same_leaf(c, one, same_fiber[0], y, tol)) fkm(1.0);
        height_sep(same_leaf(c, height, same_fiber[0], y, tol) ? 1.0 : 0.0);
      }
    } else {
      const Vec p = s.unit_sphere(n);
      const auto fiber = boundary_fiber_sample(c, p, 2, ctx.rng(1, i).seed());
      leaf_pair(fiber[0], fiber[1]);
    }
  }
  if (c.l() >= c.m() + 1) {
    const auto focal = mplus_sample(c, 10, ctx.rng(3, 0).seed());
    Sampler s = ctx.rng(3, 1);
    const auto bnd = boundary_fiber_sample(c, s.unit_sphere(n), 10, ctx.rng(3, 2).seed());
    for (int i = 0; i < 10; ++i)
      for (const auto* spec : {&points, &one, &height})
        apex(std::abs(composed_quotient_distance(c, *spec, focal.points[i], bnd[i]) - 0.25 * kPi));
    ctx.add("apex_to_boundary", "the distance from M_+ to M_- in the composed quotient is pi/4", apex.value, 1e-12);
  }
  ctx.add("points_reproduces_fc", "F_0 by points gives F_C", fc.value, 0.0);
  ctx.add("one_leaf_reproduces_fkm", "F_0 with one leaf gives the FKM level sets", fkm.value, 0.0);
  ctx.add("equal_radius_law", "composed leaves lie in FKM level sets", radius_law.value, 0.0);
  if (disk) ctx.add("height_separation", "height leaves separate points of equal radius", height_sep.value, 0.0);
  ctx.add("points_distance_reduction", "the cone distance for F_0 by points is the curvature-4 disk distance",
          reduction.value, 1e-9);
  if (c.m() == 8) {
    const auto tensor = builtin_spec("tensor_svd", 8);
    Worst inv, sym;
    for (std::int64_t i = 0; i < ctx.n; ++i) {
      Sampler s = ctx.rng(4, i);
      const Vec p = s.unit_sphere(9), q = s.unit_sphere(9);
      const Vec rotated = tensor.leaf_sampler(p, s);
      inv((tensor.invariant(rotated) - tensor.invariant(p)).norm());
      sym(std::abs(tensor_orbit_distance(p, q) - tensor_orbit_distance(q, p)));
    }
    ctx.add("tensor_svd_invariance", "signed singular values are SO(3) x SO(3) invariant", inv.value, 1e-10);
    ctx.add("tensor_distance_symmetry", "the orbit distance is symmetric", sym.value, 1e-12);
  }
}

void suite_transnormality(Ctx& ctx) {
  const auto& c = ctx.c;
  const auto spec = builtin_spec(ctx.cfg.foliation, c.m());
  const bool sphere = c.l() == c.m();
  Worst gap;
  LeafDistanceOptions opts;
  opts.budget = ctx.cfg.budget;
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    const Vec x = s.unit_sphere(c.dim());
    Vec y;
    if (sphere) {
      y = s.unit_sphere(c.dim());
    } else {
      const double sy = 0.5 * kPi * s.uniform();
      y = fiber_sample(c, std::sin(sy) * s.unit_sphere(c.count()), 1, ctx.rng(1, i).seed()).front();
    }
    opts.seed = ctx.rng(2, i).seed();
    const double ambient = leaf_to_leaf_ambient_distance(c, spec, x, y, opts);
    gap(std::abs(ambient - composed_quotient_distance(c, spec, x, y)));
  }
  const double tol = ctx.cfg.foliation == "points" ? 1e-3 : 1e-2;
  ctx.add("ambient_vs_quotient", "distance from x to the leaf of y equals the quotient distance (transnormality)",
          gap.value, tol);
}

void suite_diameter(Ctx& ctx) {
  const auto& c = ctx.c;
  const auto spec = builtin_spec("tensor_svd", 8);
  const bool disk = c.l() > c.m() + 1;
  double sup = 0.0;
  Worst nan;
  for (std::int64_t i = 0; i < ctx.n; ++i) {
    Sampler s = ctx.rng(0, i);
    Vec pts[2];
    for (int t = 0; t < 2; ++t) {
      // arcsine law on [0, pi/2]: apex and boundary are sampled densely
      const double u = std::sin(0.5 * kPi * s.uniform());
      const double angle = disk ? 0.5 * kPi * u * u : 0.5 * kPi;
      const Vec v = std::sin(angle) * s.unit_sphere(c.count());
      pts[t] = fiber_sample(c, v, 1, ctx.rng(1 + t, i).seed()).front();
    }
    const double d = composed_quotient_distance(c, spec, pts[0], pts[1]);
    if (std::isnan(d)) nan(std::numeric_limits<double>::quiet_NaN());
    else sup = std::max(sup, d);
  }
  ctx.add("diameter_upper", "the composed quotient has diameter at most pi/4", std::max(0.0, sup - 0.25 * kPi) + nan.value, 1e-6);
  if (disk)
    ctx.add("diameter_lower", "sampled pairs approach the diameter pi/4", std::max(0.0, 0.25 * kPi - sup), 0.05);
}

struct SuiteInfo {
  std::string id;
  std::int64_t samples;
  std::function<void(Ctx&)> run;
};

const std::vector<SuiteInfo>& registry() {
  static const std::vector<SuiteInfo> r = {
      {"relations", 1, suite_relations},
      {"disk_image", 10000, suite_disk_image},
      {"boundary_fibers", 1000, suite_boundary_fibers},
      {"sphere_quotient", 10000, suite_sphere_quotient},
      {"focal_and_fibers", 1000, suite_focal_and_fibers},
      {"submersion_rank", 100, suite_submersion_rank},
      {"factorization_m_plus_1", 1000, suite_factorization},
      {"geodesics", 100, suite_geodesics},
      {"quotient_metric", 1000, suite_quotient_metric},
      {"symmetry", 1000, suite_symmetry},
      {"fkm_consistency", 10000, suite_fkm_consistency},
      {"invariants_classification", 10, suite_invariants},
      {"homogeneous_orbits", 1000, suite_homogeneous_orbits},
      {"normal_forms", 1000, suite_normal_forms},
      {"composed_identities", 1000, suite_composed_identities},
      {"transnormality", 100, suite_transnormality},
      {"diameter", 10000, suite_diameter},
  };
  return r;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const SuiteInfo& find_suite(const std::string& id) {
  for (const auto& s : registry())
    if (s.id == id) return s;
  throw std::invalid_argument("unknown suite '" + id + "'");
}

}  // namespace

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.push_back(s.id);
    return out;
  }();
  return ids;
}

std::int64_t default_samples(const std::string& suite) { return find_suite(suite).samples; }

std::optional<std::string> incompatibility(const std::string& suite, const CliffordSystem& c) {
  find_suite(suite);
  const int m = c.m(), l = c.l();
  if (suite == "sphere_quotient" && l != m) return "sphere_quotient requires l = m";
  if (suite == "focal_and_fibers" && l <= m + 1) return "focal_and_fibers requires l > m+1";
  if (suite == "submersion_rank" && l < m + 1) return "submersion_rank requires l >= m+1 (interior points)";
  if (suite == "factorization_m_plus_1" && l != m + 1) return "factorization_m_plus_1 requires l = m+1";
  if (suite == "transnormality" && l == m + 1) return "transnormality requires l != m+1 (connected leaves)";
  if (suite == "diameter" && m != 8) return "diameter requires m = 8 (tensor_svd on S^8)";
  if (suite == "invariants_classification" || suite == "homogeneous_orbits" || suite == "normal_forms") {
    if (l % delta(m) != 0) return "l is not a multiple of delta(m)";
  }
  if (suite == "homogeneous_orbits" || suite == "normal_forms") {
    if (m != 1 && m != 2 && m != 4) return suite + " requires m in {1, 2, 4}";
    if (!is_rebuilt(c)) return suite + " requires a system in the built normal layout";
    const auto p = equivalence_profile(c);
    if (p.kappa && *p.kappa != p.k) return suite + " requires P0 P1 P2 P3 P4 = +-Id (kappa = k)";
  }
  return std::nullopt;
}

VerificationReport run_suite(const SuiteConfig& config) {
  const SuiteInfo& info = find_suite(config.suite);
  if (!config.system) throw std::invalid_argument("run_suite: no system given");
  if (config.samples < 0) throw std::invalid_argument("run_suite: samples must be positive");
  if (config.budget < 1) throw std::invalid_argument("run_suite: budget must be positive");
  for (const auto& [name, t] : config.tolerances)
    if (!(t > 0)) throw std::invalid_argument("run_suite: tolerance for '" + name + "' must be positive");
  const CliffordSystem& c = *config.system;
  if (auto why = incompatibility(config.suite, c)) throw IncompatibleSuite(*why);

  VerificationReport rep;
  rep.suite = config.suite;
  rep.seed = config.seed;
  rep.samples = config.samples > 0 ? config.samples : info.samples;
  rep.code_version = kCodeVersion;
  try {
    rep.system = equivalence_profile(c);
  } catch (const std::exception&) {
  }
  const auto start = std::chrono::steady_clock::now();
  Ctx ctx{config, c, rep, rep.samples, Sampler(config.seed)};
  info.run(ctx);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

MatrixResult run_matrix(const std::vector<SuiteConfig>& plan) {
  MatrixResult out;
  for (const auto& cfg : plan) {
    MatrixEntry e;
    e.config = cfg;
    std::string where = cfg.suite;
    if (cfg.system && cfg.system->provenance())
      where += " (m=" + std::to_string(cfg.system->m()) + ", k=" + std::to_string(cfg.system->provenance()->k) +
               ", flips=" + std::to_string(cfg.system->provenance()->flips) + ")";
    try {
      e.report = run_suite(cfg);
      if (e.report->pass) {
        ++out.summary.passed;
      } else {
        ++out.summary.failed;
        for (const auto& ch : e.report->checks)
          if (!ch.pass)
            out.summary.lines.push_back("FAIL " + where + " " + ch.name + ": " + ch.claim + " (violation " +
                                        sci(ch.violation) + " > " + sci(ch.tol) + ")");
      }
    } catch (const std::exception& ex) {
      e.error = ex.what();
      ++out.summary.errors;
      out.summary.lines.push_back("ERROR " + where + ": " + e.error);
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

std::vector<SuiteConfig> default_plan(int max_dim, std::uint64_t seed) {
  std::vector<SuiteConfig> plan;
  std::uint64_t stream = 0;
  for (int m = 1; m <= 12; ++m) {
    for (int k = 1;; ++k) {
      if (2 * k * delta(m) > max_dim) break;
      if (m == 1 && k == 1) continue;
      const int max_flips = m % 4 == 0 ? k : 0;
      for (int j = 0; j <= max_flips; ++j) {
        auto sys = std::make_shared<const CliffordSystem>(build_system(m, k, j, {max_dim}));
        for (const auto& id : suite_ids()) {
          if (incompatibility(id, *sys)) continue;
          SuiteConfig cfg;
          cfg.suite = id;
          cfg.system = sys;
          cfg.seed = splitmix64(seed + stream++);
          const std::int64_t full = default_samples(id);
          cfg.samples = id == "relations" ? 1 : std::max<std::int64_t>(1, std::min<std::int64_t>(full, 200));
          if (id == "invariants_classification") cfg.samples = 3;
          if (id == "diameter") cfg.samples = 10000;
          if (id == "transnormality") {
            if (j != 0 || k > 2) continue;
            cfg.samples = 5;
            cfg.budget = 100;
          }
          plan.push_back(cfg);
          if (id == "transnormality" && m == 8) {
            cfg.foliation = "tensor_svd";
            cfg.seed = splitmix64(seed + stream++);
            plan.push_back(cfg);
          }
        }
      }
    }
  }
  return plan;
}

}  // namespace cfol
