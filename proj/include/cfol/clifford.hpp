#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "cfol/algebra.hpp"
#include "cfol/report.hpp"

namespace cfol {

inline constexpr int kDefaultMaxDim = 512;

/// Irreducible half-dimension: a rank-(m+1) Clifford system acts on R^{2 k delta(m)}.
std::int64_t delta(int m);

struct Provenance {
  int k = 0;
  int flips = 0;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Symmetric, pairwise anticommuting involutions P_0..P_m on R^{2l}.
///
/// Generators are held either exactly (signed permutations, as produced by
/// build_system) or densely (after conjugation or when loaded from a dense
/// file). The system is immutable once built.
class CliffordSystem {
 public:
  CliffordSystem(int m, int l, std::vector<SignedPermMatrix> generators,
                 std::optional<Provenance> provenance = std::nullopt);
  CliffordSystem(int m, int l, std::vector<Mat> generators,
                 std::optional<Provenance> provenance = std::nullopt);

  int m() const { return m_; }
  int l() const { return l_; }
  int dim() const { return 2 * l_; }
  int count() const { return m_ + 1; }
  bool exact() const { return std::holds_alternative<std::vector<SignedPermMatrix>>(gens_); }
  const std::optional<Provenance>& provenance() const { return provenance_; }

  /// Exact generators; throws std::logic_error for dense systems.
  const std::vector<SignedPermMatrix>& perm_generators() const;
  Mat dense(int i) const;

  /// P_i x
  Vec apply(int i, const Vec& x) const;
  /// (sum_i p_i P_i) x for span coordinates p.
  Vec apply_span(const Vec& p, const Vec& x) const;
  /// sum_i p_i P_i as a dense matrix.
  Mat span_matrix(const Vec& p) const;

 private:
  int m_;
  int l_;
  std::variant<std::vector<SignedPermMatrix>, std::vector<Mat>> gens_;
  std::optional<Provenance> provenance_;
};

/// n pairwise anticommuting complex structures on R^N, exact.
std::vector<SignedPermMatrix> build_complex_structures(int n, std::int64_t target_dim);

struct BuildOptions {
  int max_dim = kDefaultMaxDim;  // cap on 2l
};

/// Direct sum of k irreducible blocks with P_0 negated on `flips` of them.
/// Layout is R^l (+) R^l = (u, v) with u, v in (R^{delta(m)})^k:
///   P_0(u,v) = (s u, -s v), P_1(u,v) = (v, u), P_{r+1}(u,v) = (J_r v, -J_r u)
/// where s = -1 on the flipped blocks.
CliffordSystem build_system(int m, int k, int flips, const BuildOptions& options = {});

/// Symmetry, involution and anticommutation defects of the generators.
VerificationReport verify_relations(const CliffordSystem& c, double tol = 0.0);

/// |tr(P_0 ... P_m)| / (2 delta(m)).
double trace_invariant(const CliffordSystem& c);

EquivalenceProfile equivalence_profile(const CliffordSystem& c);

/// Generators A^T P_i A, dense.
CliffordSystem conjugate_system(const CliffordSystem& c, const Mat& a);

/// Restriction to the generators at `indices` (strictly increasing).
CliffordSystem sub_system(const CliffordSystem& c, const std::vector<int>& indices);

/// Dense identity  <P x, Q x> = <p, q> |x|^2  residual for span coordinates p, q.
double inner_product_identity_residual(const CliffordSystem& c, const Vec& p, const Vec& q, const Vec& x);

}  // namespace cfol
