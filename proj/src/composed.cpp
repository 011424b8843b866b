#include "cfol/composed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cfol/foliation.hpp"

namespace cfol {

namespace {

Mat reshape3(const Vec& p) {
  if (p.size() != 9) throw std::invalid_argument("tensor_svd: expected a vector of length 9");
  Mat m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = p[3 * i + j];
  return m;
}

Vec flatten3(const Mat& m) {
  Vec p(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[3 * i + j] = m(i, j);
  return p;
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

Vec tensor_signed_singular_values(const Vec& p) {
  const Mat m = reshape3(p);
  Vec tau = singular_values(m);
  if (m.determinant() < 0) tau[2] = -tau[2];
  return tau;
}

double tensor_orbit_distance(const Vec& a, const Vec& b) {
  const Vec ta = tensor_signed_singular_values(a), tb = tensor_signed_singular_values(b);
  // arccos(<ta, tb>) for unit ta, tb
  return 2.0 * std::asin(std::min(1.0, 0.5 * (ta - tb).norm()));
}

FoliationSpec builtin_spec(const std::string& name, int m, const std::optional<Vec>& p0) {
  if (m < 1) throw std::invalid_argument("builtin_spec: m must be >= 1");
  const int n = m + 1;
  FoliationSpec spec;
  spec.name = name;
  spec.ambient_dim = n;

  if (name == "points") {
    spec.invariant = [](const Vec& p) { return p; };
    spec.smooth_invariant = [](const Vec& p) { return p; };
    spec.quotient_distance = [](const Vec& a, const Vec& b) { return sphere_angle(a, b); };
    spec.has_zero_dim_leaves = true;
  } else if (name == "one_leaf") {
    spec.invariant = [](const Vec&) { return Vec(0); };
    spec.smooth_invariant = [](const Vec&) { return Vec(0); };
    spec.leaf_sampler = [n](const Vec&, Sampler& s) { return s.unit_sphere(n); };
    spec.quotient_distance = [](const Vec&, const Vec&) { return 0.0; };
  } else if (name == "height") {
    Vec pole = p0 ? *p0 : Vec(Vec::Unit(n, 0));
    if (pole.size() != n) throw std::invalid_argument("builtin_spec: height pole has wrong dimension");
    if (std::abs(pole.norm() - 1.0) > 1e-12) throw std::invalid_argument("builtin_spec: height pole must be a unit vector");
    spec.invariant = [pole](const Vec& p) { return Vec::Constant(1, p.dot(pole)); };
    spec.smooth_invariant = spec.invariant;
    spec.leaf_sampler = [pole, n](const Vec& p, Sampler& s) {
      const double h = clamp_unit(p.dot(pole));
      Vec w;
      for (;;) {
        w = s.gaussian(n);
        w -= w.dot(pole) * pole;
        if (w.norm() >= 1e-8) break;
      }
      return Vec(h * pole + std::sqrt(std::max(0.0, 1.0 - h * h)) * w.normalized());
    };
    spec.quotient_distance = [pole](const Vec& a, const Vec& b) {
      return std::abs(std::acos(clamp_unit(a.dot(pole))) - std::acos(clamp_unit(b.dot(pole))));
    };
    spec.has_zero_dim_leaves = true;
  } else if (name == "tensor_svd") {
    if (m != 8) throw std::invalid_argument("builtin_spec: tensor_svd requires m = 8");
    spec.invariant = [](const Vec& p) { return tensor_signed_singular_values(p); };
    spec.smooth_invariant = [](const Vec& p) {
      const Mat w = reshape3(p);
      const Mat g = w * w.transpose();
      Vec out(2);
      out << (g * g).trace(), w.determinant();
      return out;
    };
    spec.leaf_sampler = [](const Vec& p, Sampler& s) {
      const Mat u = haar_orthogonal(3, s, true);
      const Mat v = haar_orthogonal(3, s, true);
      return flatten3(u * reshape3(p) * v.transpose());
    };
    spec.quotient_distance = [](const Vec& a, const Vec& b) { return tensor_orbit_distance(a, b); };
  } else {
    throw std::invalid_argument("builtin_spec: unknown foliation '" + name + "'");
  }
  return spec;
}

ComposedClass composed_class(const CliffordSystem& c, const FoliationSpec& spec, const Vec& x) {
  if (spec.ambient_dim != c.count()) throw std::invalid_argument("composed_class: foliation dimension mismatch");
  const Vec v = pi_c(c, x).coords;
  ComposedClass cls;
  cls.r = v.norm();
  if (cls.r > 1e-10) cls.tail = spec.invariant(v / cls.r);
  return cls;
}

bool same_leaf(const CliffordSystem& c, const FoliationSpec& spec, const Vec& x, const Vec& y, double tol) {
  const auto a = composed_class(c, spec, x);
  const auto b = composed_class(c, spec, y);
  if (std::abs(a.r - b.r) > tol) return false;
  if (a.r <= tol && b.r <= tol) return true;
  if (!a.tail || !b.tail) return false;
  return (*a.tail - *b.tail).norm() <= tol;
}

double composed_quotient_distance(const CliffordSystem& c, const FoliationSpec& spec, const Vec& x, const Vec& y) {
  if (!spec.quotient_distance)
    throw std::invalid_argument("composed_quotient_distance: foliation '" + spec.name + "' has no quotient distance");
  if (spec.ambient_dim != c.count()) throw std::invalid_argument("composed_quotient_distance: dimension mismatch");
  const Vec vx = pi_c(c, x).coords, vy = pi_c(c, y).coords;
  const double rx = std::min(1.0, vx.norm()), ry = std::min(1.0, vy.norm());
  const double s = std::atan2(rx, disk_height(vx)), t = std::atan2(ry, disk_height(vy));
  double delta = 0.0;
  if (rx > 1e-10 && ry > 1e-10) delta = std::min(spec.quotient_distance(vx / rx, vy / ry), std::numbers::pi);
  // 1/2 arccos(cos s cos t + sin s sin t cos delta), in half-angle form
  const double a = std::sin(0.5 * (s - t));
  const double b = std::sin(0.5 * delta);
  const double h = a * a + std::sin(s) * std::sin(t) * b * b;
  return std::asin(std::min(1.0, std::sqrt(std::max(0.0, h))));
}

// ---------------------------------------------------------------------------
// Leaf-to-leaf ambient distance
// ---------------------------------------------------------------------------

namespace {

enum class LeafKind { Apex, Interior, Boundary };

constexpr double kLeafResidual = 1e-10;
constexpr double kTinyProjection = 1e-12;

class LeafProblem {
 public:
  LeafProblem(const CliffordSystem& c, const FoliationSpec& spec, const Vec& target, const Vec& y)
      : c_(c), spec_(spec), target_(target) {
    const Vec v = pi_coords(c, y);
    const double r = v.norm();
    if (r <= 1e-10) {
      kind_ = LeafKind::Apex;
    } else if (r >= 1.0 - 1e-10) {
      kind_ = LeafKind::Boundary;
      anchor_ = v / r;
    } else {
      kind_ = LeafKind::Interior;
      anchor_ = v / r;
      t_ = 0.5 * std::asin(r);
    }
    if (kind_ != LeafKind::Boundary && c.l() < c.m() + 1)
      throw std::domain_error("leaf_to_leaf_ambient_distance: interior leaves need l >= m+1");
    if (kind_ != LeafKind::Apex) {
      q_free_ = static_cast<bool>(spec.leaf_sampler);
      if (q_free_) anchor_invariant_ = spec.smooth_invariant(anchor_);
    }
    for (int i = 0; i < c.count(); ++i) target_images_.push_back(c.apply(i, target));
  }

  LeafKind kind() const { return kind_; }
  bool q_free() const { return q_free_; }
  const Vec& anchor() const { return anchor_; }

  Vec sample_q(Sampler& s) const {
    if (!q_free_) return anchor_;
    return spec_.leaf_sampler(anchor_, s);
  }

  // Q x for span coordinates q.
  Vec q_target(const Vec& q) const {
    Vec out = Vec::Zero(c_.dim());
    for (int i = 0; i < c_.count(); ++i) out += q[i] * target_images_[i];
    return out;
  }

  Vec point(const Vec& xf, const Vec& q) const {
    switch (kind_) {
      case LeafKind::Apex: return xf;
      case LeafKind::Interior: return (std::cos(t_) * xf + std::sin(t_) * c_.apply_span(q, xf)).normalized();
      case LeafKind::Boundary: {
        const Vec u = boundary_projection(q);
        if (u.norm() < kTinyProjection) return xf;
        return u.normalized();
      }
    }
    return xf;
  }

  // (Id + Q) target / 2, projected twice so rounding does not leave E_+(Q)
  Vec boundary_projection(const Vec& q) const {
    const Vec u = 0.5 * (target_ + q_target(q));
    return 0.5 * (u + c_.apply_span(q, u));
  }

  double objective(const Vec& xf, const Vec& q) const { return target_.dot(point(xf, q)); }

  Vec retract_focal(Vec x) const {
    x.normalize();
    for (int it = 0; it < 60; ++it) {
      const Vec r = pi_coords(c_, x);
      if (r.norm() < 1e-15) break;
      x -= 0.5 * c_.apply_span(r, x);
      x.normalize();
    }
    return x;
  }

  Mat invariant_jacobian(const Vec& q) const {
    const double h = 1e-6;
    const int n = static_cast<int>(q.size());
    const int d = static_cast<int>(anchor_invariant_.size());
    Mat jac(d, n);
    for (int j = 0; j < n; ++j) {
      Vec qp = q, qm = q;
      qp[j] += h;
      qm[j] -= h;
      jac.col(j) = (spec_.smooth_invariant(qp) - spec_.smooth_invariant(qm)) / (2.0 * h);
    }
    return jac;
  }

  double leaf_residual(const Vec& q) const {
    if (!q_free_ || anchor_invariant_.size() == 0) return 0.0;
    return (spec_.smooth_invariant(q) - anchor_invariant_).norm();
  }

  Vec retract_leaf(Vec q) const {
    q.normalize();
    if (!q_free_ || anchor_invariant_.size() == 0) return q;
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
      const Vec res = spec_.smooth_invariant(q) - anchor_invariant_;
      const double rn = res.norm();
      if (rn < 1e-15 || !(rn < last)) break;
      last = rn;
      const Mat tangent = Mat::Identity(q.size(), q.size()) - q * q.transpose();
      const Mat jac = invariant_jacobian(q) * tangent;
      const Vec step = jac.completeOrthogonalDecomposition().solve(res);
      q = (q - step).normalized();
    }
    return q;
  }

  Vec project_leaf_tangent(const Vec& q, const Vec& g) const {
    if (!q_free_) return Vec::Zero(q.size());
    Mat a(1 + anchor_invariant_.size(), q.size());
    a.row(0) = q.transpose();
    if (anchor_invariant_.size() > 0) a.bottomRows(anchor_invariant_.size()) = invariant_jacobian(q);
    // Normalize rows so the rank threshold does not depend on invariant scaling.
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      const double n = a.row(r).norm();
      if (n > 0) a.row(r) /= n;
    }
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s[i] > 1e-8 * s[0]) ++rank;
    const Mat null = svd.matrixV().rightCols(q.size() - rank);
    return null * (null.transpose() * g);
  }

  struct Gradient {
    Vec gx;
    Vec gq;
    double norm2 = 0.0;
  };

  Gradient gradient(const Vec& xf, const Vec& q) const {
    Gradient g;
    g.gq = Vec::Zero(q.size());
    if (kind_ == LeafKind::Boundary) {
      g.gx = Vec::Zero(xf.size());
      const Vec u = boundary_projection(q);
      const double un = u.norm();
      if (un >= kTinyProjection) {
        Vec raw(q.size());
        for (int i = 0; i < c_.count(); ++i) raw[i] = u.dot(target_images_[i]) / (2.0 * un);
        g.gq = project_leaf_tangent(q, raw);
      }
    } else {
      const double ct = std::cos(t_), st = std::sin(t_);
      Vec a = ct * target_;
      if (kind_ == LeafKind::Interior) a += st * q_target(q);
      g.gx = a - a.dot(xf) * xf;
      for (int i = 0; i < c_.count(); ++i) {
        const Vec pxf = c_.apply(i, xf);
        g.gx -= g.gx.dot(pxf) * pxf;
      }
      if (kind_ == LeafKind::Interior && q_free_) {
        Vec raw(q.size());
        for (int i = 0; i < c_.count(); ++i) raw[i] = st * target_images_[i].dot(xf);
        g.gq = project_leaf_tangent(q, raw);
      }
    }
    g.norm2 = g.gx.squaredNorm() + g.gq.squaredNorm();
    return g;
  }

  // Projected gradient ascent of <target, z> with Armijo backtracking.
  double ascend(Vec xf, Vec q, int max_iterations) const {
    double f = objective(xf, q);
    double alpha = 1.0;
    for (int it = 0; it < max_iterations; ++it) {
      const Gradient g = gradient(xf, q);
      if (g.norm2 < 1e-26) break;
      bool accepted = false;
      while (alpha > 1e-14) {
        Vec xf2 = xf, q2 = q;
        if (kind_ != LeafKind::Boundary) xf2 = retract_focal(xf + alpha * g.gx);
        if (g.gq.size() > 0 && q_free_) q2 = retract_leaf(q + alpha * g.gq);
        const double f2 = objective(xf2, q2);
        if (f2 >= f + 1e-4 * alpha * g.norm2 && leaf_residual(q2) <= kLeafResidual) {
          xf = std::move(xf2);
          q = std::move(q2);
          const double gain = f2 - f;
          f = f2;
          alpha = std::min(alpha * 2.0, 1e3);
          accepted = true;
          if (gain < 1e-16) it = max_iterations;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
    return sphere_angle(target_, point(xf, q));
  }

 private:
  const CliffordSystem& c_;
  const FoliationSpec& spec_;
  Vec target_;
  LeafKind kind_ = LeafKind::Apex;
  Vec anchor_;
  Vec anchor_invariant_;
  bool q_free_ = false;
  double t_ = 0.0;
  std::vector<Vec> target_images_;
};

}  // namespace

double leaf_to_leaf_ambient_distance(const CliffordSystem& c, const FoliationSpec& spec, const Vec& x, const Vec& y,
                                     const LeafDistanceOptions& options) {
  if (spec.ambient_dim != c.count()) throw std::invalid_argument("leaf_to_leaf_ambient_distance: dimension mismatch");
  if (options.budget < 1) throw std::invalid_argument("leaf_to_leaf_ambient_distance: budget must be >= 1");
  const LeafProblem problem(c, spec, x, y);
  const Sampler base(options.seed);

  struct Start {
    Vec xf;
    Vec q;
  };
  std::vector<Start> records;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < options.budget; ++i) {
    Sampler s = base.child(static_cast<std::uint64_t>(i));
    Vec q = problem.sample_q(s);
    Vec xf;
    Vec z;
    if (problem.kind() == LeafKind::Boundary) {
      z = boundary_fiber_sample(c, q, 1, s.child(1).seed()).front();
      xf = z;
    } else {
      xf = mplus_sample(c, 1, s.child(1).seed()).points.front();
      z = problem.point(xf, q);
    }
    const double d = sphere_angle(x, z);
    if (d < best) {
      best = d;
      records.push_back({std::move(xf), std::move(q)});
    }
  }
  for (const auto& r : records) best = std::min(best, problem.ascend(r.xf, r.q, options.max_iterations));
  return best;
}

}  // namespace cfol
