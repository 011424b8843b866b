#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cfol/algebra.hpp"
#include "cfol/clifford.hpp"

namespace cfol {

inline constexpr double kUnitTol = 1e-12;

/// A point of the disk D_C together with its lift to the radius-1/2 hemisphere.
struct QuotientPoint {
  Vec coords;  // length m+1, norm <= 1
  Vec lift;    // length m+2, norm 1/2
};

/// sqrt(1 - |v|^2), set to 0 when 1 - |v|^2 is below rounding resolution (1e-14),
/// so numerically normalized boundary points sit exactly on S_C.
double disk_height(const Vec& v);

/// lambda(v) = 1/2 (v, disk_height(v)); throws when |v| > 1 + 1e-12.
Vec quotient_lift(const Vec& v);
QuotientPoint make_quotient_point(const Vec& v);

/// Distance on the disk with the curvature-4 hemisphere metric.
double quotient_distance(const Vec& v, const Vec& w);

/// (<P_0 x, x>, ..., <P_m x, x>); x must be a unit vector.
QuotientPoint pi_c(const CliffordSystem& c, const Vec& x);
/// Same as pi_c(...).coords without the unit check.
Vec pi_coords(const CliffordSystem& c, const Vec& x);

struct EigenSplit {
  Mat plus;   // orthonormal basis of E_+(P)
  Mat minus;  // orthonormal basis of E_-(P)
};

/// Eigenspace bases of a symmetric involution, from the projectors (Id +- P)/2.
EigenSplit eig_split(const Mat& p);

/// Uniform samples of the unit sphere of E_+(P), P = sum p_i P_i with |p| = 1.
std::vector<Vec> boundary_fiber_sample(const CliffordSystem& c, const Vec& p, int n, std::uint64_t seed);

struct FocalSample {
  std::vector<Vec> points;
  int v_dim = 0;          // dim V_{x+} = l - m
  bool connected = true;  // false when l = m+1 (fiber sphere S^0)
};

/// Samples of M_+ = pi_C^{-1}(0), x = (x+ + x-)/sqrt(2). Requires l >= m+1.
FocalSample mplus_sample(const CliffordSystem& c, int n, std::uint64_t seed);

/// Samples of pi_C^{-1}(v) via cos(t) x + sin(t) Q x with x in M_+.
/// The origin and boundary are delegated to the focal and boundary samplers.
std::vector<Vec> fiber_sample(const CliffordSystem& c, const Vec& v, int n, std::uint64_t seed);

struct HorizontalFrame {
  std::vector<Vec> vectors;
  bool boundary = false;  // vectors span E_-(P) instead of X_{P_i}(x)
};

/// X_{P_i}(x) = 2 P_i x - 2 <P_i x, x> x, or the normal space E_-(P) at boundary points.
HorizontalFrame horizontal_basis(const CliffordSystem& c, const Vec& x);

/// Jacobian of pi_C restricted to the tangent space of the sphere, (m+1) x 2l.
Mat pi_jacobian(const CliffordSystem& c, const Vec& x);

struct RankDecision {
  int rank = 0;
  bool marginal = false;  // some singular value fell in the forbidden band
  Vec singular_values;
};

/// Rank of a matrix counting singular values above keep * s_max; any value
/// in (kill, keep) * s_max marks the decision as marginal.
RankDecision band_rank(const Mat& a, double keep = 1e-6, double kill = 1e-8);

struct FkmValue {
  double direct;    // <x,x>^2 - 2 sum <P_i x, x>^2
  double factored;  // 1 - 2 |pi_C(x)|^2
};

FkmValue fkm_f0(const CliffordSystem& c, const Vec& x);

/// gamma(t) = cos(t) x_minus + sin(t) x_plus with x_+- in E_+-(P).
struct HorizontalGeodesic {
  Vec p;  // span coordinates of P, unit
  Vec x_plus;
  Vec x_minus;
};

/// Random member of the geodesic family through E_+-(P).
HorizontalGeodesic random_horizontal_geodesic(const CliffordSystem& c, const Vec& p, Sampler& sampler);
/// Throws unless the geodesic data satisfy the eigenvector and orthogonality invariants.
void validate_geodesic(const CliffordSystem& c, const HorizontalGeodesic& g, double tol = 1e-10);

Vec geodesic_eval(const HorizontalGeodesic& g, double t);

/// Returns (P, Q) with Q_i = <P_i x_+, x_->, so that pi_C(gamma(t)) = -cos(2t) P + sin(2t) Q.
std::pair<Vec, Vec> project_geodesic_params(const CliffordSystem& c, const HorizontalGeodesic& g);

/// P x for a unit span element P.
Vec reflect_symmetry(const CliffordSystem& c, const Vec& p, const Vec& x);
/// Image of pi_C(x) under the reflection rho_P: -v + 2 <v, p> p.
Vec reflect_disk(const Vec& v, const Vec& p);

/// (cos(theta) Id + sin(theta) P Q) x for orthonormal span elements P, Q.
Vec spin_rotate(const CliffordSystem& c, const Vec& p, const Vec& q, double theta, const Vec& x);
/// Image of pi_C(x) under spin_rotate: rotation by -2 theta in the (P, Q) plane,
/// i.e. P is carried towards -Q for theta > 0.
Vec spin_disk_action(const Vec& v, const Vec& p, const Vec& q, double theta);

}  // namespace cfol
