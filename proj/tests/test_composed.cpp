#include <doctest.h>

#include <cmath>

#include "cfol/composed.hpp"
#include "cfol/foliation.hpp"

using namespace cfol;

namespace {

Mat as3(const Vec& p) {
  Mat a(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = p[3 * i + j];
  return a;
}

Vec flat(const Mat& a) {
  Vec p(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[3 * i + j] = a(i, j);
  return p;
}

Mat rotation(const Vec& w) {
  const double t = w.norm();
  Mat k = Mat::Zero(3, 3);
  k(0, 1) = -w[2]; k(0, 2) = w[1];
  k(1, 0) = w[2];  k(1, 2) = -w[0];
  k(2, 0) = -w[1]; k(2, 1) = w[0];
  if (t < 1e-300) return Mat::Identity(3, 3);
  k /= t;
  return Mat::Identity(3, 3) + std::sin(t) * k + (1 - std::cos(t)) * k * k;
}

// Hill climb over SO(3) x SO(3) for max <a, U b V^T>; angle of the best alignment.
double brute_orbit_distance(const Vec& a, const Vec& b, Sampler& s) {
  const Mat am = as3(a), bm = as3(b);
  double best = -2;
  for (int start = 0; start < 8; ++start) {
    Mat u = haar_orthogonal(3, s, true), v = haar_orthogonal(3, s, true);
    double cur = (am.array() * (u * bm * v.transpose()).array()).sum();
    double step = 0.5;
    while (step > 1e-7) {
      bool moved = false;
      for (int trial = 0; trial < 40; ++trial) {
        const Mat u2 = rotation(step * s.gaussian(3)) * u;
        const Mat v2 = rotation(step * s.gaussian(3)) * v;
        const double val = (am.array() * (u2 * bm * v2.transpose()).array()).sum();
        if (val > cur) {
          cur = val;
          u = u2;
          v = v2;
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::max(best, cur);
  }
  return std::acos(std::min(1.0, best));
}

}  // namespace

TEST_CASE("builtin foliations") {
  const auto pts = builtin_spec("points", 2);
  CHECK(pts.ambient_dim == 3);
  CHECK(pts.has_zero_dim_leaves);
  CHECK_FALSE(static_cast<bool>(pts.leaf_sampler));
  const Vec e = Vec::Unit(3, 1);
  CHECK((pts.invariant(e) - e).norm() == 0.0);

  const auto one = builtin_spec("one_leaf", 2);
  CHECK(one.invariant(e).size() == 0);
  CHECK(one.quotient_distance(e, Vec::Unit(3, 0)) == 0.0);
  Sampler s(1);
  CHECK(std::abs(one.leaf_sampler(e, s).norm() - 1.0) < 1e-12);

  const auto h = builtin_spec("height", 2);
  CHECK(h.invariant(Vec::Unit(3, 0))[0] == 1.0);
  CHECK(h.quotient_distance(Vec::Unit(3, 0), -Vec::Unit(3, 0)) == doctest::Approx(M_PI));
  CHECK(h.quotient_distance(Vec::Unit(3, 1), Vec::Unit(3, 2)) == 0.0);
  const auto h2 = builtin_spec("height", 2, Vec::Unit(3, 2));
  CHECK(h2.invariant(Vec::Unit(3, 2))[0] == 1.0);
  CHECK_THROWS_AS(builtin_spec("height", 2, Vec::Ones(3)), std::invalid_argument);
  CHECK_THROWS_AS(builtin_spec("height", 2, Vec::Unit(4, 0)), std::invalid_argument);

  CHECK_NOTHROW(builtin_spec("tensor_svd", 8));
  CHECK_THROWS_AS(builtin_spec("tensor_svd", 4), std::invalid_argument);
  CHECK_THROWS_AS(builtin_spec("nope", 2), std::invalid_argument);
}

TEST_CASE("tensor signed singular values") {
  const Vec id = flat(Mat::Identity(3, 3)) / std::sqrt(3.0);
  const Vec tau = tensor_signed_singular_values(id);
  CHECK((tau - Vec::Constant(3, 1.0 / std::sqrt(3.0))).norm() < 1e-15);
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 0.2, -0.9, 0.1;
  const Vec td = tensor_signed_singular_values(flat(d));
  CHECK(td[0] == doctest::Approx(0.9));
  CHECK(td[1] == doctest::Approx(0.2));
  CHECK(td[2] == doctest::Approx(-0.1));

  Sampler s(2);
  const auto spec = builtin_spec("tensor_svd", 8);
  for (int t = 0; t < 1000; ++t) {
    const Vec p = s.unit_sphere(9);
    const Mat u = haar_orthogonal(3, s, true), v = haar_orthogonal(3, s, true);
    const Vec q = flat(u * as3(p) * v.transpose());
    CHECK((tensor_signed_singular_values(p) - tensor_signed_singular_values(q)).norm() < 1e-10);
    CHECK(tensor_orbit_distance(p, q) < 1e-9);
    CHECK((spec.invariant(p) - spec.invariant(q)).norm() < 1e-10);
    CHECK((spec.smooth_invariant(p) - spec.smooth_invariant(q)).norm() < 1e-10);
  }
  const Vec e00 = Vec::Unit(9, 0);
  CHECK(tensor_orbit_distance(id, e00) == doctest::Approx(std::acos(1.0 / std::sqrt(3.0))).epsilon(1e-14));
  CHECK(spec.quotient_distance(id, e00) == doctest::Approx(std::acos(1.0 / std::sqrt(3.0))));
  // reflection changes the orbit
  CHECK(tensor_orbit_distance(id, -id) > 0.5);
}

TEST_CASE("tensor orbit distance against a rotation search") {
  Sampler s(3);
  const Vec id = flat(Mat::Identity(3, 3)) / std::sqrt(3.0);
  CHECK(std::abs(brute_orbit_distance(id, Vec::Unit(9, 0), s) - std::acos(1.0 / std::sqrt(3.0))) < 1e-3);
  for (int t = 0; t < 6; ++t) {
    const Vec a = s.unit_sphere(9), b = s.unit_sphere(9);
    CHECK(std::abs(brute_orbit_distance(a, b, s) - tensor_orbit_distance(a, b)) < 1e-3);
  }
}

TEST_CASE("composed classes and same_leaf") {
  const auto c = build_system(2, 2, 0);
  const auto pts = builtin_spec("points", 2), one = builtin_spec("one_leaf", 2);
  Sampler s(4);
  const Vec v = 0.6 * s.unit_sphere(3);
  const auto f = fiber_sample(c, v, 2, 5);
  CHECK(same_leaf(c, pts, f[0], f[1], 1e-9));
  const auto cl = composed_class(c, pts, f[0]);
  CHECK(cl.r == doctest::Approx(0.6));
  REQUIRE(cl.tail.has_value());
  CHECK((*cl.tail - v / 0.6).norm() < 1e-9);

  const Vec w = 0.6 * s.unit_sphere(3);
  const Vec y = fiber_sample(c, w, 1, 6).front();
  CHECK_FALSE(same_leaf(c, pts, f[0], y, 1e-9));
  CHECK(same_leaf(c, one, f[0], y, 1e-9));
  const Vec z = fiber_sample(c, 0.3 * w.normalized(), 1, 7).front();
  CHECK_FALSE(same_leaf(c, one, f[0], z, 1e-9));

  const Vec apex = mplus_sample(c, 1, 8).points.front();
  const auto ca = composed_class(c, pts, apex);
  CHECK(ca.r < 1e-10);
  CHECK_FALSE(ca.tail.has_value());
  CHECK(same_leaf(c, pts, apex, mplus_sample(c, 1, 9).points.front(), 1e-9));
  CHECK_THROWS_AS(composed_class(c, builtin_spec("points", 3), apex), std::invalid_argument);
}

TEST_CASE("composed quotient distance") {
  const auto c = build_system(2, 2, 0);
  const auto pts = builtin_spec("points", 2), one = builtin_spec("one_leaf", 2), h = builtin_spec("height", 2);
  Sampler s(10);
  for (int t = 0; t < 200; ++t) {
    const Vec x = s.unit_sphere(c.dim()), y = s.unit_sphere(c.dim());
    const double dp = composed_quotient_distance(c, pts, x, y);
    CHECK(std::abs(dp - quotient_distance(pi_coords(c, x), pi_coords(c, y))) < 1e-9);
    CHECK(composed_quotient_distance(c, one, x, y) <= composed_quotient_distance(c, h, x, y) + 1e-12);
    CHECK(composed_quotient_distance(c, h, x, y) <= dp + 1e-12);
    CHECK(composed_quotient_distance(c, pts, x, x) == 0.0);
    // equal radius: the one-leaf distance vanishes
    const Vec v = pi_coords(c, x);
    const Vec y2 = fiber_sample(c, v.norm() * s.unit_sphere(3), 1, t).front();
    CHECK(composed_quotient_distance(c, one, x, y2) < 1e-7);
  }
  const Vec apex = mplus_sample(c, 1, 1).points.front();
  const Vec bd = boundary_fiber_sample(c, Vec::Unit(3, 0), 1, 2).front();
  CHECK(composed_quotient_distance(c, pts, apex, bd) == doctest::Approx(M_PI / 4).epsilon(1e-12));
  CHECK(composed_quotient_distance(c, h, apex, bd) == doctest::Approx(M_PI / 4).epsilon(1e-12));
  const Vec bd2 = boundary_fiber_sample(c, -Vec::Unit(3, 0), 1, 3).front();
  CHECK(composed_quotient_distance(c, pts, bd, bd2) == doctest::Approx(M_PI / 2));
}

TEST_CASE("leaf-to-leaf ambient distance") {
  const auto c = build_system(2, 2, 0);
  const auto pts = builtin_spec("points", 2);
  Sampler s(11);
  LeafDistanceOptions big;
  big.budget = 1000;
  big.seed = 4;
  for (int t = 0; t < 3; ++t) {
    const Vec v = 0.7 * s.unit_sphere(3);
    const auto f = fiber_sample(c, v, 2, 20 + t);
    CHECK(leaf_to_leaf_ambient_distance(c, pts, f[0], f[1], big) < 1e-6);
  }
  const Vec p = s.unit_sphere(3);
  const Vec xb = boundary_fiber_sample(c, p, 1, 30).front();
  const Vec yb = boundary_fiber_sample(c, -p, 1, 31).front();
  LeafDistanceOptions small;
  small.budget = 50;
  CHECK(std::abs(leaf_to_leaf_ambient_distance(c, pts, xb, yb, small) - M_PI / 2) < 1e-3);

  const Vec x = s.unit_sphere(c.dim()), y = s.unit_sphere(c.dim());
  double prev = 10;
  for (int b : {1, 5, 20, 80}) {
    LeafDistanceOptions o;
    o.budget = b;
    o.seed = 7;
    const double d = leaf_to_leaf_ambient_distance(c, pts, x, y, o);
    CHECK(d <= prev + 1e-15);
    prev = d;
  }
  // transnormal: ambient distance equals the quotient distance
  CHECK(std::abs(prev - composed_quotient_distance(c, pts, x, y)) < 1e-3);

  const auto h = builtin_spec("height", 2);
  LeafDistanceOptions o;
  o.budget = 200;
  const double dh = leaf_to_leaf_ambient_distance(c, h, x, y, o);
  CHECK(std::abs(dh - composed_quotient_distance(c, h, x, y)) < 1e-2);
  CHECK_THROWS_AS(leaf_to_leaf_ambient_distance(c, builtin_spec("points", 3), x, y), std::invalid_argument);
  o.budget = 0;
  CHECK_THROWS_AS(leaf_to_leaf_ambient_distance(c, pts, x, y, o), std::invalid_argument);
}
