#include "cfol/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfol {

namespace {

void require_unit(const Vec& x, const char* what) {
  if (std::abs(x.norm() - 1.0) > kUnitTol) throw std::invalid_argument(std::string(what) + ": point is not a unit vector");
}

void require_unit_span(const CliffordSystem& c, const Vec& p, const char* what, double tol = 1e-10) {
  if (p.size() != c.count()) throw std::invalid_argument(std::string(what) + ": span coordinate count mismatch");
  if (std::abs(p.norm() - 1.0) > tol) throw std::invalid_argument(std::string(what) + ": span element is not a unit");
}

// Uniform unit vector in E_+(P) (sign = +1) or E_-(P) (sign = -1).
Vec eigenspace_sample(const CliffordSystem& c, const Vec& p, int sign, Sampler& s) {
  for (;;) {
    const Vec g = s.gaussian(c.dim());
    const Vec h = g + sign * c.apply_span(p, g);
    const double n = h.norm();
    if (n >= 1e-8) return h / n;
  }
}

}  // namespace

double disk_height(const Vec& v) {
  const double gap = 1.0 - v.squaredNorm();
  return gap < 1e-14 ? 0.0 : std::sqrt(gap);
}

Vec quotient_lift(const Vec& v) {
  if (v.norm() > 1.0 + 1e-12) throw std::invalid_argument("quotient_lift: point outside the unit disk");
  Vec lift(v.size() + 1);
  lift.head(v.size()) = 0.5 * v;
  lift[v.size()] = 0.5 * disk_height(v);
  return lift;
}

QuotientPoint make_quotient_point(const Vec& v) { return {v, quotient_lift(v)}; }

double quotient_distance(const Vec& v, const Vec& w) {
  if (v.size() != w.size()) throw std::invalid_argument("quotient_distance: dimension mismatch");
  return 0.5 * sphere_angle(2.0 * quotient_lift(v), 2.0 * quotient_lift(w));
}

Vec pi_coords(const CliffordSystem& c, const Vec& x) {
  if (x.size() != c.dim()) throw std::invalid_argument("pi_c: dimension mismatch");
  Vec v(c.count());
  for (int i = 0; i < c.count(); ++i) v[i] = c.apply(i, x).dot(x);
  return v;
}

QuotientPoint pi_c(const CliffordSystem& c, const Vec& x) {
  require_unit(x, "pi_c");
  return make_quotient_point(pi_coords(c, x));
}

EigenSplit eig_split(const Mat& p) {
  if (p.rows() != p.cols()) throw std::invalid_argument("eig_split: matrix not square");
  const Mat id = Mat::Identity(p.rows(), p.cols());
  if (max_abs(p * p - id) > 1e-10) throw std::invalid_argument("eig_split: matrix is not an involution");
  return {projector_range_basis(0.5 * (id + p)), projector_range_basis(0.5 * (id - p))};
}

std::vector<Vec> boundary_fiber_sample(const CliffordSystem& c, const Vec& p, int n, std::uint64_t seed) {
  require_unit_span(c, p, "boundary_fiber_sample");
  const Sampler base(seed);
  std::vector<Vec> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Sampler s = base.child(i);
    out.push_back(eigenspace_sample(c, p, +1, s));
  }
  return out;
}

FocalSample mplus_sample(const CliffordSystem& c, int n, std::uint64_t seed) {
  if (c.l() < c.m() + 1)
    throw std::domain_error("mplus_sample: l < m+1, the focal manifold M_+ is empty");
  FocalSample result;
  result.v_dim = c.l() - c.m();
  result.connected = result.v_dim > 1;
  result.points.reserve(n);
  const Vec e0 = Vec::Unit(c.count(), 0);
  const Sampler base(seed);
  for (int i = 0; i < n; ++i) {
    Sampler s = base.child(i);
    const Vec x_plus = eigenspace_sample(c, e0, +1, s);
    std::vector<Vec> images;
    images.reserve(c.m());
    for (int j = 1; j < c.count(); ++j) images.push_back(c.apply(j, x_plus));
    Vec x_minus;
    for (;;) {
      Vec h = eigenspace_sample(c, e0, -1, s);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& w : images) h -= h.dot(w) * w;
      const double norm = h.norm();
      if (norm >= 1e-8) {
        x_minus = h / norm;
        break;
      }
    }
    result.points.push_back((x_plus + x_minus) / std::sqrt(2.0));
  }
  return result;
}

std::vector<Vec> fiber_sample(const CliffordSystem& c, const Vec& v, int n, std::uint64_t seed) {
  if (v.size() != c.count()) throw std::invalid_argument("fiber_sample: dimension mismatch");
  const double r = v.norm();
  if (r > 1.0 + 1e-12) throw std::invalid_argument("fiber_sample: point outside the unit disk");
  if (r <= 1e-14) return mplus_sample(c, n, seed).points;
  if (r >= 1.0 - 1e-12) return boundary_fiber_sample(c, v / r, n, seed);
  if (c.l() <= c.m() + 1)
    throw std::domain_error("fiber_sample: interior fibers require l > m+1");
  const Vec q = v / r;
  const double t = 0.5 * std::asin(std::min(1.0, r));
  const double ct = std::cos(t), st = std::sin(t);
  auto base = mplus_sample(c, n, seed).points;
  for (auto& x : base) x = ct * x + st * c.apply_span(q, x);
  return base;
}

HorizontalFrame horizontal_basis(const CliffordSystem& c, const Vec& x) {
  require_unit(x, "horizontal_basis");
  const Vec pi = pi_coords(c, x);
  HorizontalFrame frame;
  const double r = pi.norm();
  if (r >= 1.0 - 1e-10) {
    frame.boundary = true;
    const Mat minus = eig_split(c.span_matrix(pi / r)).minus;
    for (Eigen::Index j = 0; j < minus.cols(); ++j) frame.vectors.push_back(minus.col(j));
    return frame;
  }
  for (int i = 0; i < c.count(); ++i) frame.vectors.push_back(2.0 * c.apply(i, x) - 2.0 * pi[i] * x);
  return frame;
}

Mat pi_jacobian(const CliffordSystem& c, const Vec& x) {
  Mat jac(c.count(), c.dim());
  for (int i = 0; i < c.count(); ++i) {
    const Vec px = c.apply(i, x);
    jac.row(i) = (2.0 * px - 2.0 * px.dot(x) * x).transpose();
  }
  return jac;
}

RankDecision band_rank(const Mat& a, double keep, double kill) {
  RankDecision d;
  d.singular_values = singular_values(a);
  if (d.singular_values.size() == 0) return d;
  const double top = d.singular_values[0];
  for (Eigen::Index i = 0; i < d.singular_values.size(); ++i) {
    const double s = d.singular_values[i];
    if (s > keep * top) ++d.rank;
    else if (s > kill * top) d.marginal = true;
  }
  return d;
}

FkmValue fkm_f0(const CliffordSystem& c, const Vec& x) {
  require_unit(x, "fkm_f0");
  const Vec pi = pi_coords(c, x);
  const double n2 = x.squaredNorm();
  return {n2 * n2 - 2.0 * pi.squaredNorm(), 1.0 - 2.0 * pi.squaredNorm()};
}

HorizontalGeodesic random_horizontal_geodesic(const CliffordSystem& c, const Vec& p, Sampler& sampler) {
  require_unit_span(c, p, "random_horizontal_geodesic");
  HorizontalGeodesic g;
  g.p = p;
  g.x_plus = eigenspace_sample(c, p, +1, sampler);
  g.x_minus = eigenspace_sample(c, p, -1, sampler);
  return g;
}

void validate_geodesic(const CliffordSystem& c, const HorizontalGeodesic& g, double tol) {
  require_unit_span(c, g.p, "geodesic");
  if ((c.apply_span(g.p, g.x_plus) - g.x_plus).norm() > tol)
    throw std::invalid_argument("geodesic: x_plus is not in E_+(P)");
  if ((c.apply_span(g.p, g.x_minus) + g.x_minus).norm() > tol)
    throw std::invalid_argument("geodesic: x_minus is not in E_-(P)");
  if (std::abs(g.x_plus.norm() - 1.0) > tol || std::abs(g.x_minus.norm() - 1.0) > tol)
    throw std::invalid_argument("geodesic: endpoints must be unit vectors");
}

Vec geodesic_eval(const HorizontalGeodesic& g, double t) { return std::cos(t) * g.x_minus + std::sin(t) * g.x_plus; }

std::pair<Vec, Vec> project_geodesic_params(const CliffordSystem& c, const HorizontalGeodesic& g) {
  Vec q(c.count());
  for (int i = 0; i < c.count(); ++i) q[i] = c.apply(i, g.x_plus).dot(g.x_minus);
  return {g.p, q};
}

Vec reflect_symmetry(const CliffordSystem& c, const Vec& p, const Vec& x) {
  require_unit_span(c, p, "reflect_symmetry");
  return c.apply_span(p, x);
}

Vec reflect_disk(const Vec& v, const Vec& p) { return -v + 2.0 * v.dot(p) * p; }

Vec spin_rotate(const CliffordSystem& c, const Vec& p, const Vec& q, double theta, const Vec& x) {
  require_unit_span(c, p, "spin_rotate");
  require_unit_span(c, q, "spin_rotate");
  if (std::abs(p.dot(q)) > 1e-10) throw std::invalid_argument("spin_rotate: span elements are not orthogonal");
  return std::cos(theta) * x + std::sin(theta) * c.apply_span(p, c.apply_span(q, x));
}

Vec spin_disk_action(const Vec& v, const Vec& p, const Vec& q, double theta) {
  const double a = v.dot(p), b = v.dot(q);
  const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
  return v + (a * c2 + b * s2 - a) * p + (-a * s2 + b * c2 - b) * q;
}

}  // namespace cfol
