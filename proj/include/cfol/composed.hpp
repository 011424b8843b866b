#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "cfol/algebra.hpp"
#include "cfol/clifford.hpp"

namespace cfol {

/// A foliation F_0 of the boundary sphere S_C, presented by an invariant map
/// whose fibers (on unit vectors of R^{m+1}) are the leaves.
struct FoliationSpec {
  std::string name;
  int ambient_dim = 0;  // m + 1

  /// Leaf label of a unit vector. Constant on leaves, separates them.
  std::function<Vec(const Vec&)> invariant;

  /// Smooth (polynomial) leaf equations on R^{m+1}: at any fixed radius the
  /// level sets are the homothetic leaves t L_P. Used by the leaf-distance
  /// descent; empty output means a single leaf per radius.
  std::function<Vec(const Vec&)> smooth_invariant;

  /// Random point of the leaf through a unit vector; unset means leaves are points.
  std::function<Vec(const Vec&, Sampler&)> leaf_sampler;

  /// Distance between the leaves through two unit vectors, when known in closed form.
  std::function<double(const Vec&, const Vec&)> quotient_distance;

  bool has_zero_dim_leaves = false;
};

/// Built-in foliations: "points", "one_leaf", "height" (distance spheres around
/// +-p0, default p0 = e_0) and "tensor_svd" (SO(3) x SO(3) orbits on R^3 (x) R^3, m = 8).
FoliationSpec builtin_spec(const std::string& name, int m, const std::optional<Vec>& p0 = std::nullopt);

/// Singular values of a 3x3 matrix (row-major 9-vector) in decreasing order,
/// with the sign of the determinant carried by the smallest one.
Vec tensor_signed_singular_values(const Vec& p);

/// min over U, V in SO(3) of the spherical distance between a and U b V^T.
double tensor_orbit_distance(const Vec& a, const Vec& b);

struct ComposedClass {
  double r = 0.0;          // |pi_C(x)|
  std::optional<Vec> tail;  // invariant of pi_C(x) / r, absent at the apex
};

ComposedClass composed_class(const CliffordSystem& c, const FoliationSpec& spec, const Vec& x);

bool same_leaf(const CliffordSystem& c, const FoliationSpec& spec, const Vec& x, const Vec& y, double tol);

/// Cone/join distance on 1/2 (Delta * {pt}) between the leaves through x and y.
double composed_quotient_distance(const CliffordSystem& c, const FoliationSpec& spec, const Vec& x, const Vec& y);

struct LeafDistanceOptions {
  int budget = 1000;
  std::uint64_t seed = 0;
  int max_iterations = 400;
};

/// Ambient spherical distance from x to the composed leaf through y: the
/// minimum over `budget` leaf samples, refined by projected-gradient descent
/// inside the leaf from every sample that improved on its predecessors.
/// Nonincreasing in the budget for a fixed seed.
double leaf_to_leaf_ambient_distance(const CliffordSystem& c, const FoliationSpec& spec, const Vec& x, const Vec& y,
                                     const LeafDistanceOptions& options = {});

}  // namespace cfol
