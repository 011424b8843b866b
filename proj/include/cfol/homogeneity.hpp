#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfol/algebra.hpp"
#include "cfol/report.hpp"

namespace cfol {

enum class Field { R, C, H };

/// Real dimension of F: 1, 2 or 4. Equals m for the diagonal actions.
int field_dim(Field f);
Field field_for_m(int m);
std::string to_string(Field f);

using Quat = Quaternion<double>;

/// Element of SO(k), SU(k) or Sp(k). R and C are embedded in H as w and w + x i.
///
/// The group acts on F^k from the right, u -> u g, so it commutes with the left
/// multiplications used as complex structures; `real` is the matrix of that
/// action on the real coordinates of one factor F^k.
struct GroupElement {
  Field field = Field::R;
  int k = 0;
  std::vector<Quat> entries;  // k x k, row-major
  Mat real;

  const Quat& at(int i, int j) const { return entries[static_cast<std::size_t>(i) * k + j]; }
};

GroupElement sample_group_element(Field f, int k, std::uint64_t seed);

/// Builds the real representation from F-entries (no unitarity check).
GroupElement make_group_element(Field f, int k, std::vector<Quat> entries);

/// (u g, v g) for x = (u, v) in F^k x F^k.
Vec diagonal_act(const GroupElement& g, const Vec& x);

/// F-vectors <-> real coordinates of one factor.
std::vector<Quat> to_quaternions(Field f, const Vec& coords);
Vec from_quaternions(Field f, const std::vector<Quat>& q);

struct NormalForm {
  double u1 = 0.0;
  Quat v1;
  double v2 = 0.0;
};

/// Representative (u1 e1, v1 e1 + v2 e2) of the orbit through (u, v).
NormalForm normal_form(const std::vector<Quat>& u, const std::vector<Quat>& v);
/// Same for a point of R^{2 k dim F} laid out as (u, v).
NormalForm normal_form(Field f, int k, const Vec& x);

double normal_form_distance(const NormalForm& a, const NormalForm& b);

struct HomogeneityVerdict {
  enum class Status { Homogeneous, NonHomogeneous, Conditional };
  Status status = Status::NonHomogeneous;
  std::string group;      // for Homogeneous
  std::string condition;  // for Conditional
  std::string source;

  /// "homogeneous(SU(3))", "non_homogeneous" or "conditionally(...)".
  std::string label() const;
};

/// Decision table for the Clifford foliation of a profile. Throws
/// std::invalid_argument for profiles without a supported system.
HomogeneityVerdict classify_homogeneity(const EquivalenceProfile& profile);

}  // namespace cfol
