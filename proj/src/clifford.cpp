#include "cfol/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cfol {

std::int64_t delta(int m) {
  static constexpr std::int64_t table[] = {0, 1, 2, 4, 4, 8, 8, 8, 8};
  if (m < 1) throw std::invalid_argument("delta: m must be >= 1");
  if (m <= 8) return table[m];
  if (m > 60) throw std::overflow_error("delta: m too large");
  return 16 * delta(m - 8);
}

// ---------------------------------------------------------------------------

CliffordSystem::CliffordSystem(int m, int l, std::vector<SignedPermMatrix> generators,
                               std::optional<Provenance> provenance)
    : m_(m), l_(l), gens_(std::move(generators)), provenance_(provenance) {
  const auto& g = std::get<0>(gens_);
  if (m < 0 || l < 1) throw std::invalid_argument("CliffordSystem: need m >= 0 and l >= 1");
  if (static_cast<int>(g.size()) != m + 1) throw std::invalid_argument("CliffordSystem: expected m+1 generators");
  for (const auto& p : g)
    if (p.size() != 2 * l) throw std::invalid_argument("CliffordSystem: generator dimension is not 2l");
}

CliffordSystem::CliffordSystem(int m, int l, std::vector<Mat> generators, std::optional<Provenance> provenance)
    : m_(m), l_(l), gens_(std::move(generators)), provenance_(provenance) {
  const auto& g = std::get<1>(gens_);
  if (m < 0 || l < 1) throw std::invalid_argument("CliffordSystem: need m >= 0 and l >= 1");
  if (static_cast<int>(g.size()) != m + 1) throw std::invalid_argument("CliffordSystem: expected m+1 generators");
  for (const auto& p : g) {
    if (p.rows() != 2 * l || p.cols() != 2 * l)
      throw std::invalid_argument("CliffordSystem: generator dimension is not 2l");
    if (!p.allFinite()) throw std::invalid_argument("CliffordSystem: non-finite generator entry");
  }
}

const std::vector<SignedPermMatrix>& CliffordSystem::perm_generators() const {
  if (!exact()) throw std::logic_error("CliffordSystem: generators are dense");
  return std::get<0>(gens_);
}

Mat CliffordSystem::dense(int i) const {
  if (exact()) return std::get<0>(gens_).at(i).dense();
  return std::get<1>(gens_).at(i);
}

Vec CliffordSystem::apply(int i, const Vec& x) const {
  if (exact()) return std::get<0>(gens_)[i].apply(x);
  return std::get<1>(gens_)[i] * x;
}

Vec CliffordSystem::apply_span(const Vec& p, const Vec& x) const {
  if (p.size() != count()) throw std::invalid_argument("apply_span: coordinate count mismatch");
  Vec y = Vec::Zero(dim());
  if (exact()) {
    const auto& g = std::get<0>(gens_);
    for (int i = 0; i < count(); ++i)
      if (p[i] != 0.0) g[i].apply_add(x, p[i], y);
  } else {
    const auto& g = std::get<1>(gens_);
    for (int i = 0; i < count(); ++i)
      if (p[i] != 0.0) y.noalias() += p[i] * (g[i] * x);
  }
  return y;
}

Mat CliffordSystem::span_matrix(const Vec& p) const {
  if (p.size() != count()) throw std::invalid_argument("span_matrix: coordinate count mismatch");
  Mat s = Mat::Zero(dim(), dim());
  for (int i = 0; i < count(); ++i) s += p[i] * dense(i);
  return s;
}

// ---------------------------------------------------------------------------

namespace {

SignedPermMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  Mat m(n, n);
  int r = 0;
  for (const auto& row : rows) {
    int c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return SignedPermMatrix::from_dense(m);
}

// Structures on the minimal dimension delta(n+1).
std::vector<SignedPermMatrix> minimal_structures(int n) {
  std::vector<SignedPermMatrix> out;
  if (n == 0) return out;
  if (n == 1) {
    out.push_back(from_rows({{0, -1}, {1, 0}}));
    return out;
  }
  if (n <= 3) {
    for (int r = 1; r <= n; ++r) out.push_back(left_mult_quaternion_unit(r));
    return out;
  }
  if (n <= 7) {
    for (int r = 1; r <= n; ++r) out.push_back(left_mult_octonion_unit(r));
    return out;
  }
  if (n == 8) {
    // diag(J_r, -J_r) for the seven octonionic structures, plus [[0,-I],[I,0]].
    const auto seven = minimal_structures(7);
    for (const auto& j : seven) {
      const SignedPermMatrix neg = -j;
      out.push_back(block2x2(&j, nullptr, nullptr, &neg, 8));
    }
    const SignedPermMatrix id = SignedPermMatrix::identity(8);
    const SignedPermMatrix neg_id = -id;
    out.push_back(block2x2(nullptr, &neg_id, &id, nullptr, 8));
    return out;
  }
  // Period 8: E_r (x) Id together with omega (x) K_s, omega = E_1 ... E_8.
  const auto eight = minimal_structures(8);
  const auto rest = minimal_structures(n - 8);
  const int rest_dim = static_cast<int>(delta(n - 7));
  SignedPermMatrix omega = SignedPermMatrix::identity(16);
  for (const auto& e : eight) omega = omega * e;
  const auto id_rest = SignedPermMatrix::identity(rest_dim);
  for (const auto& e : eight) out.push_back(kron(e, id_rest));
  for (const auto& k : rest) out.push_back(kron(omega, k));
  return out;
}

}  // namespace

std::vector<SignedPermMatrix> build_complex_structures(int n, std::int64_t target_dim) {
  if (n < 0) throw std::invalid_argument("build_complex_structures: n must be >= 0");
  const std::int64_t minimal = delta(n + 1);
  if (target_dim < minimal || target_dim % minimal != 0)
    throw std::invalid_argument("build_complex_structures: target dimension " + std::to_string(target_dim) +
                                " is not a multiple of " + std::to_string(minimal));
  auto base = minimal_structures(n);
  if (target_dim == minimal) return base;
  const auto id = SignedPermMatrix::identity(static_cast<int>(target_dim / minimal));
  for (auto& j : base) j = kron(id, j);
  return base;
}

CliffordSystem build_system(int m, int k, int flips, const BuildOptions& options) {
  if (m < 1) throw std::invalid_argument("build_system: m must be >= 1");
  if (k < 1) throw std::invalid_argument("build_system: k must be >= 1");
  if (flips < 0 || flips > k) throw std::invalid_argument("build_system: flips must satisfy 0 <= flips <= k");
  if (m == 1 && k == 1)
    throw std::invalid_argument("build_system: (m,k) = (1,1) is degenerate (fibers are antipodal point pairs)");
  const std::int64_t d = delta(m);
  const std::int64_t l = k * d;
  if (2 * l > options.max_dim)
    throw std::length_error("build_system: dimension 2l = " + std::to_string(2 * l) + " exceeds cap " +
                            std::to_string(options.max_dim));
  const int half = static_cast<int>(l);

  std::vector<SignedPermMatrix> gens;
  gens.reserve(m + 1);

  // P_0 = diag(s, -s); flipped blocks are the last `flips` ones.
  std::vector<int> rows(2 * half), signs(2 * half);
  for (int c = 0; c < half; ++c) {
    const int block = static_cast<int>(c / d);
    const int s = block >= k - flips ? -1 : 1;
    rows[c] = c;
    signs[c] = s;
    rows[half + c] = half + c;
    signs[half + c] = -s;
  }
  gens.emplace_back(std::move(rows), std::move(signs));

  const auto id = SignedPermMatrix::identity(half);
  gens.push_back(block2x2(nullptr, &id, &id, nullptr, half));

  for (const auto& j : build_complex_structures(m - 1, l)) {
    const SignedPermMatrix neg = -j;
    gens.push_back(block2x2(nullptr, &j, &neg, nullptr, half));
  }
  return CliffordSystem(m, half, std::move(gens), Provenance{k, flips});
}

VerificationReport verify_relations(const CliffordSystem& c, double tol) {
  VerificationReport report;
  report.suite = "relations";
  report.samples = c.count();
  double sym = 0.0, inv = 0.0, anti = 0.0;
  if (c.exact()) {
    const auto& g = c.perm_generators();
    const auto id = SignedPermMatrix::identity(c.dim());
    for (int i = 0; i < c.count(); ++i) {
      sym = std::max<double>(sym, g[i].max_abs_diff(g[i].transpose()));
      inv = std::max<double>(inv, (g[i] * g[i]).max_abs_diff(id));
      for (int j = i + 1; j < c.count(); ++j) anti = std::max<double>(anti, (g[i] * g[j]).max_abs_sum(g[j] * g[i]));
    }
  } else {
    std::vector<Mat> g;
    for (int i = 0; i < c.count(); ++i) g.push_back(c.dense(i));
    const Mat id = Mat::Identity(c.dim(), c.dim());
    for (int i = 0; i < c.count(); ++i) {
      sym = std::max(sym, max_abs(g[i] - g[i].transpose()));
      inv = std::max(inv, max_abs(g[i] * g[i] - id));
      for (int j = i + 1; j < c.count(); ++j) anti = std::max(anti, max_abs(g[i] * g[j] + g[j] * g[i]));
    }
  }
  report.add("symmetry", "each generator is symmetric", sym, tol);
  report.add("involution", "each generator squares to the identity", inv, tol);
  report.add("anticommutation", "distinct generators anticommute", anti, tol);
  return report;
}

double trace_invariant(const CliffordSystem& c) {
  const double norm = 2.0 * static_cast<double>(delta(c.m()));
  if (c.exact()) {
    const auto& g = c.perm_generators();
    SignedPermMatrix prod = g[0];
    for (int i = 1; i < c.count(); ++i) prod = prod * g[i];
    return std::abs(prod.trace()) / norm;
  }
  Mat prod = c.dense(0);
  for (int i = 1; i < c.count(); ++i) prod = prod * c.dense(i);
  return std::abs(prod.trace()) / norm;
}

EquivalenceProfile equivalence_profile(const CliffordSystem& c) {
  const std::int64_t d = delta(c.m());
  if (c.l() % d != 0)
    throw std::domain_error("equivalence_profile: malformed system, l = " + std::to_string(c.l()) +
                            " is not a multiple of delta(m) = " + std::to_string(d));
  EquivalenceProfile p;
  p.m = c.m();
  p.k = static_cast<int>(c.l() / d);
  if (c.provenance() && c.provenance()->k != p.k)
    throw std::domain_error("equivalence_profile: provenance k disagrees with l / delta(m)");
  if (c.m() % 4 == 0) p.kappa = static_cast<int>(std::lround(trace_invariant(c)));
  return p;
}

CliffordSystem conjugate_system(const CliffordSystem& c, const Mat& a) {
  if (a.rows() != c.dim() || a.cols() != c.dim()) throw std::invalid_argument("conjugate_system: dimension mismatch");
  const Mat gram = a.transpose() * a;
  if (max_abs(gram - Mat::Identity(c.dim(), c.dim())) > 1e-12)
    throw std::invalid_argument("conjugate_system: matrix is not orthogonal to 1e-12");
  std::vector<Mat> gens;
  gens.reserve(c.count());
  for (int i = 0; i < c.count(); ++i) {
    Mat pa(c.dim(), c.dim());
    if (c.exact()) {
      const auto& p = c.perm_generators()[i];
      for (int col = 0; col < c.dim(); ++col) pa.row(p.row(col)) = p.sign(col) * a.row(col);
    } else {
      pa.noalias() = c.dense(i) * a;
    }
    Mat g = a.transpose() * pa;
    gens.push_back(std::move(g));
  }
  return CliffordSystem(c.m(), c.l(), std::move(gens), c.provenance());
}

CliffordSystem sub_system(const CliffordSystem& c, const std::vector<int>& indices) {
  if (indices.empty()) throw std::invalid_argument("sub_system: empty selection");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] > c.m()) throw std::out_of_range("sub_system: index out of range");
    if (i > 0 && indices[i] <= indices[i - 1]) throw std::invalid_argument("sub_system: indices must increase");
  }
  const int m = static_cast<int>(indices.size()) - 1;
  if (c.exact()) {
    std::vector<SignedPermMatrix> g;
    for (int i : indices) g.push_back(c.perm_generators()[i]);
    return CliffordSystem(m, c.l(), std::move(g));
  }
  std::vector<Mat> g;
  for (int i : indices) g.push_back(c.dense(i));
  return CliffordSystem(m, c.l(), std::move(g));
}

double inner_product_identity_residual(const CliffordSystem& c, const Vec& p, const Vec& q, const Vec& x) {
  return std::abs(c.apply_span(p, x).dot(c.apply_span(q, x)) - p.dot(q) * x.squaredNorm());
}

}  // namespace cfol
