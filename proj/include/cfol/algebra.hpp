#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cfol {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Division algebras
// ---------------------------------------------------------------------------

/// Real quaternion w + x i + y j + z k.
template <typename Scalar>
struct Quaternion {
  Scalar w{0}, x{0}, y{0}, z{0};

  static Quaternion one() { return {Scalar(1), Scalar(0), Scalar(0), Scalar(0)}; }
  static Quaternion i() { return {Scalar(0), Scalar(1), Scalar(0), Scalar(0)}; }
  static Quaternion j() { return {Scalar(0), Scalar(0), Scalar(1), Scalar(0)}; }
  static Quaternion k() { return {Scalar(0), Scalar(0), Scalar(0), Scalar(1)}; }

  /// Basis element by index: 0 -> 1, 1 -> i, 2 -> j, 3 -> k.
  static Quaternion basis(int index) {
    Quaternion q;
    q.coeff(index) = Scalar(1);
    return q;
  }

  Scalar& coeff(int index) {
    switch (index) {
      case 0: return w;
      case 1: return x;
      case 2: return y;
      case 3: return z;
      default: throw std::out_of_range("quaternion coefficient index");
    }
  }
  Scalar coeff(int index) const { return const_cast<Quaternion&>(*this).coeff(index); }

  Quaternion conj() const { return {w, -x, -y, -z}; }
  Scalar squaredNorm() const { return w * w + x * x + y * y + z * z; }
  Scalar norm() const { using std::sqrt; return sqrt(squaredNorm()); }
  Scalar real() const { return w; }

  Quaternion operator-() const { return {-w, -x, -y, -z}; }
  Quaternion& operator+=(const Quaternion& o) { w += o.w; x += o.x; y += o.y; z += o.z; return *this; }
  Quaternion& operator-=(const Quaternion& o) { w -= o.w; x -= o.x; y -= o.y; z -= o.z; return *this; }
  friend Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
  friend Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
  friend Quaternion operator*(Scalar s, const Quaternion& q) { return {s * q.w, s * q.x, s * q.y, s * q.z}; }
  friend Quaternion operator*(const Quaternion& q, Scalar s) { return s * q; }
  friend Quaternion operator/(const Quaternion& q, Scalar s) { return {q.w / s, q.x / s, q.y / s, q.z / s}; }
  friend bool operator==(const Quaternion&, const Quaternion&) = default;

  /// Hamilton product.
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
};

template <typename Scalar>
Quaternion<Scalar> quat_mul(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
  return a * b;
}

/// Octonion as a Cayley-Dickson pair (a, b) of quaternions, a + b l.
/// Basis order: e0 = (1,0), e1..e3 = (i|j|k, 0), e4 = (0,1), e5..e7 = (0, i|j|k).
template <typename Scalar>
struct Octonion {
  Quaternion<Scalar> a, b;

  static Octonion one() { return {Quaternion<Scalar>::one(), {}}; }
  static Octonion basis(int index) {
    if (index < 0 || index > 7) throw std::out_of_range("octonion basis index");
    Octonion o;
    if (index < 4) o.a.coeff(index) = Scalar(1);
    else o.b.coeff(index - 4) = Scalar(1);
    return o;
  }

  Scalar coeff(int index) const { return index < 4 ? a.coeff(index) : b.coeff(index - 4); }
  Scalar& coeff(int index) { return index < 4 ? a.coeff(index) : b.coeff(index - 4); }

  Octonion conj() const { return {a.conj(), -b}; }
  Scalar squaredNorm() const { return a.squaredNorm() + b.squaredNorm(); }
  Scalar norm() const { using std::sqrt; return sqrt(squaredNorm()); }
  Scalar real() const { return a.w; }

  Octonion operator-() const { return {-a, -b}; }
  friend Octonion operator+(const Octonion& p, const Octonion& q) { return {p.a + q.a, p.b + q.b}; }
  friend Octonion operator-(const Octonion& p, const Octonion& q) { return {p.a - q.a, p.b - q.b}; }
  friend Octonion operator*(Scalar s, const Octonion& q) { return {s * q.a, s * q.b}; }
  friend bool operator==(const Octonion&, const Octonion&) = default;

  /// (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c))
  friend Octonion operator*(const Octonion& p, const Octonion& q) {
    return {p.a * q.a - q.b.conj() * p.b, q.b * p.a + p.b * q.a.conj()};
  }
};

template <typename Scalar>
Octonion<Scalar> oct_mul(const Octonion<Scalar>& a, const Octonion<Scalar>& b) {
  return a * b;
}

// ---------------------------------------------------------------------------
// Signed permutation matrices
// ---------------------------------------------------------------------------

/// Exact n x n matrix with one entry +-1 per row and column. Column c maps
/// e_c to sign[c] * e_{row[c]}.
class SignedPermMatrix {
 public:
  SignedPermMatrix() = default;
  SignedPermMatrix(std::vector<int> rows, std::vector<int> signs);

  static SignedPermMatrix identity(int n);
  /// Rounds a dense matrix with entries in {-1, 0, 1}; throws if it is not a signed permutation.
  static SignedPermMatrix from_dense(const Mat& m);

  int size() const { return static_cast<int>(rows_.size()); }
  int row(int col) const { return rows_[col]; }
  int sign(int col) const { return signs_[col]; }
  const std::vector<int>& rows() const { return rows_; }
  const std::vector<int>& signs() const { return signs_; }

  Mat dense() const;
  Vec apply(const Vec& x) const;
  /// y += s * (this x)
  void apply_add(const Vec& x, double s, Vec& y) const;

  SignedPermMatrix transpose() const;
  SignedPermMatrix operator-() const;
  friend SignedPermMatrix operator*(const SignedPermMatrix& a, const SignedPermMatrix& b);
  friend bool operator==(const SignedPermMatrix&, const SignedPermMatrix&) = default;

  /// Exact trace (sum of fixed-column signs).
  int trace() const;
  bool is_symmetric() const { return *this == transpose(); }

  /// max |(this + other)_{ij}| computed exactly.
  int max_abs_sum(const SignedPermMatrix& other) const;
  /// max |(this - other)_{ij}| computed exactly.
  int max_abs_diff(const SignedPermMatrix& other) const { return max_abs_sum(-other); }

 private:
  std::vector<int> rows_;
  std::vector<int> signs_;
};

SignedPermMatrix kron(const SignedPermMatrix& a, const SignedPermMatrix& b);
/// Block diagonal diag(blocks...).
SignedPermMatrix direct_sum(const std::vector<SignedPermMatrix>& blocks);
/// 2x2 block matrix [[a, b], [c, d]] where exactly one of each row/column pair is non-empty.
SignedPermMatrix block2x2(const SignedPermMatrix* a, const SignedPermMatrix* b,
                          const SignedPermMatrix* c, const SignedPermMatrix* d, int half);

/// Left multiplication x -> u x on the octonions as an 8x8 matrix.
/// u must be imaginary and of unit norm.
Mat left_mult_matrix(const Octonion<double>& u, double tol = 1e-12);
/// Exact left multiplication by the imaginary basis unit e_index (index in 1..7).
SignedPermMatrix left_mult_octonion_unit(int index);
/// Exact left multiplication by the imaginary quaternion unit (index 1 -> i, 2 -> j, 3 -> k).
SignedPermMatrix left_mult_quaternion_unit(int index);

// ---------------------------------------------------------------------------
// Dense helpers
// ---------------------------------------------------------------------------

/// Modified Gram-Schmidt with one reorthogonalization pass. Columns of the
/// result are orthonormal; throws if the input is numerically rank deficient.
Mat gram_schmidt(const Mat& a);

/// Orthonormal basis of the column space of a symmetric projector.
Mat projector_range_basis(const Mat& projector, double rel_tol = 1e-10);

/// Singular values in decreasing order.
Vec singular_values(const Mat& a);

/// Spherical distance between unit vectors, accurate near 0 and pi.
double sphere_angle(const Vec& a, const Vec& b);

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// Seeded sampling
// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic Gaussian / uniform stream. Value type: copy it or derive
/// child streams with child(index) instead of sharing one mutably.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }
  Sampler child(std::uint64_t index) const {
    return Sampler(splitmix64(seed_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
  }

  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  Vec gaussian(int n);
  Mat gaussian(int rows, int cols);
  /// Uniform point on S^{n-1}; draws with norm < 1e-8 are redrawn.
  Vec unit_sphere(int n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Haar-distributed element of O(n) (or SO(n) when special is set).
Mat haar_orthogonal(int n, Sampler& sampler, bool special = false);

}  // namespace cfol
