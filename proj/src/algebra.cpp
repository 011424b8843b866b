#include "cfol/algebra.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace cfol {

SignedPermMatrix::SignedPermMatrix(std::vector<int> rows, std::vector<int> signs)
    : rows_(std::move(rows)), signs_(std::move(signs)) {
  if (rows_.size() != signs_.size()) throw std::invalid_argument("signed permutation: size mismatch");
  std::vector<char> seen(rows_.size(), 0);
  for (std::size_t c = 0; c < rows_.size(); ++c) {
    const int r = rows_[c];
    if (r < 0 || r >= static_cast<int>(rows_.size()) || seen[r])
      throw std::invalid_argument("signed permutation: rows do not form a permutation");
    seen[r] = 1;
    if (signs_[c] != 1 && signs_[c] != -1) throw std::invalid_argument("signed permutation: sign must be +-1");
  }
}

SignedPermMatrix SignedPermMatrix::identity(int n) {
  std::vector<int> rows(n);
  for (int i = 0; i < n; ++i) rows[i] = i;
  return {std::move(rows), std::vector<int>(n, 1)};
}

SignedPermMatrix SignedPermMatrix::from_dense(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("signed permutation: matrix not square");
  const int n = static_cast<int>(m.cols());
  std::vector<int> rows(n, -1), signs(n, 0);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      const double v = m(r, c);
      if (v == 0.0) continue;
      if ((v != 1.0 && v != -1.0) || rows[c] != -1)
        throw std::invalid_argument("signed permutation: entries must be one +-1 per column");
      rows[c] = r;
      signs[c] = v > 0 ? 1 : -1;
    }
    if (rows[c] == -1) throw std::invalid_argument("signed permutation: empty column");
  }
  return {std::move(rows), std::move(signs)};
}

Mat SignedPermMatrix::dense() const {
  Mat m = Mat::Zero(size(), size());
  for (int c = 0; c < size(); ++c) m(rows_[c], c) = signs_[c];
  return m;
}

Vec SignedPermMatrix::apply(const Vec& x) const {
  Vec y(size());
  for (int c = 0; c < size(); ++c) y[rows_[c]] = signs_[c] * x[c];
  return y;
}

void SignedPermMatrix::apply_add(const Vec& x, double s, Vec& y) const {
  for (int c = 0; c < size(); ++c) y[rows_[c]] += s * signs_[c] * x[c];
}

SignedPermMatrix SignedPermMatrix::transpose() const {
  std::vector<int> rows(size()), signs(size());
  for (int c = 0; c < size(); ++c) {
    rows[rows_[c]] = c;
    signs[rows_[c]] = signs_[c];
  }
  return {std::move(rows), std::move(signs)};
}

SignedPermMatrix SignedPermMatrix::operator-() const {
  std::vector<int> signs(signs_);
  for (int& s : signs) s = -s;
  return {rows_, std::move(signs)};
}

SignedPermMatrix operator*(const SignedPermMatrix& a, const SignedPermMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("signed permutation product: size mismatch");
  std::vector<int> rows(b.size()), signs(b.size());
  for (int c = 0; c < b.size(); ++c) {
    rows[c] = a.rows_[b.rows_[c]];
    signs[c] = a.signs_[b.rows_[c]] * b.signs_[c];
  }
  return {std::move(rows), std::move(signs)};
}

int SignedPermMatrix::trace() const {
  int t = 0;
  for (int c = 0; c < size(); ++c)
    if (rows_[c] == c) t += signs_[c];
  return t;
}

int SignedPermMatrix::max_abs_sum(const SignedPermMatrix& other) const {
  if (size() != other.size()) throw std::invalid_argument("signed permutation: size mismatch");
  int worst = 0;
  for (int c = 0; c < size(); ++c) {
    if (rows_[c] == other.rows_[c]) worst = std::max(worst, std::abs(signs_[c] + other.signs_[c]));
    else worst = std::max(worst, 1);
  }
  return worst;
}

SignedPermMatrix kron(const SignedPermMatrix& a, const SignedPermMatrix& b) {
  const int nb = b.size();
  const int n = a.size() * nb;
  std::vector<int> rows(n), signs(n);
  for (int ca = 0; ca < a.size(); ++ca)
    for (int cb = 0; cb < nb; ++cb) {
      rows[ca * nb + cb] = a.row(ca) * nb + b.row(cb);
      signs[ca * nb + cb] = a.sign(ca) * b.sign(cb);
    }
  return {std::move(rows), std::move(signs)};
}

SignedPermMatrix direct_sum(const std::vector<SignedPermMatrix>& blocks) {
  std::vector<int> rows, signs;
  int offset = 0;
  for (const auto& b : blocks) {
    for (int c = 0; c < b.size(); ++c) {
      rows.push_back(offset + b.row(c));
      signs.push_back(b.sign(c));
    }
    offset += b.size();
  }
  return {std::move(rows), std::move(signs)};
}

SignedPermMatrix block2x2(const SignedPermMatrix* a, const SignedPermMatrix* b,
                          const SignedPermMatrix* c, const SignedPermMatrix* d, int half) {
  std::vector<int> rows(2 * half), signs(2 * half);
  auto place = [&](const SignedPermMatrix* top, const SignedPermMatrix* bottom, int col_offset) {
    if ((top == nullptr) == (bottom == nullptr))
      throw std::invalid_argument("block2x2: each block column needs exactly one block");
    const SignedPermMatrix& blk = top ? *top : *bottom;
    const int row_offset = top ? 0 : half;
    if (blk.size() != half) throw std::invalid_argument("block2x2: block size mismatch");
    for (int col = 0; col < half; ++col) {
      rows[col_offset + col] = row_offset + blk.row(col);
      signs[col_offset + col] = blk.sign(col);
    }
  };
  place(a, c, 0);
  place(b, d, half);
  return {std::move(rows), std::move(signs)};
}

Mat left_mult_matrix(const Octonion<double>& u, double tol) {
  if (std::abs(u.real()) > tol) throw std::invalid_argument("left_mult_matrix: octonion is not imaginary");
  if (std::abs(u.norm() - 1.0) > tol) throw std::invalid_argument("left_mult_matrix: octonion is not a unit");
  Mat m(8, 8);
  for (int c = 0; c < 8; ++c) {
    const Octonion<double> col = u * Octonion<double>::basis(c);
    for (int r = 0; r < 8; ++r) m(r, c) = col.coeff(r);
  }
  return m;
}

SignedPermMatrix left_mult_octonion_unit(int index) {
  if (index < 1 || index > 7) throw std::out_of_range("octonion imaginary unit index must be in 1..7");
  return SignedPermMatrix::from_dense(left_mult_matrix(Octonion<double>::basis(index)));
}

SignedPermMatrix left_mult_quaternion_unit(int index) {
  if (index < 1 || index > 3) throw std::out_of_range("quaternion imaginary unit index must be in 1..3");
  const auto u = Quaternion<double>::basis(index);
  Mat m(4, 4);
  for (int c = 0; c < 4; ++c) {
    const auto col = u * Quaternion<double>::basis(c);
    for (int r = 0; r < 4; ++r) m(r, c) = col.coeff(r);
  }
  return SignedPermMatrix::from_dense(m);
}

Mat gram_schmidt(const Mat& a) {
  Mat q = a;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const double original = q.col(j).norm();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    const double n = q.col(j).norm();
    if (!(n > 1e-14 * std::max(original, 1e-300)))
      throw std::domain_error("gram_schmidt: columns are numerically dependent");
    q.col(j) /= n;
  }
  return q;
}

Mat projector_range_basis(const Mat& projector, double rel_tol) {
  Eigen::ColPivHouseholderQR<Mat> qr(projector);
  qr.setThreshold(rel_tol);
  const auto rank = qr.rank();
  Mat q = qr.householderQ() * Mat::Identity(projector.rows(), rank);
  return q;
}

Vec singular_values(const Mat& a) {
  if (a.size() == 0) return Vec();
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues();
}

double sphere_angle(const Vec& a, const Vec& b) {
  const double chord = (a - b).norm();
  const double co_chord = (a + b).norm();
  return 2.0 * std::atan2(chord, co_chord);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vec Sampler::gaussian(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = normal_(engine_);
  return v;
}

Mat Sampler::gaussian(int rows, int cols) {
  Mat m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = normal_(engine_);
  return m;
}

Vec Sampler::unit_sphere(int n) {
  for (;;) {
    Vec v = gaussian(n);
    const double norm = v.norm();
    if (norm >= 1e-8) return v / norm;
  }
}

Mat haar_orthogonal(int n, Sampler& sampler, bool special) {
  const Mat g = sampler.gaussian(n, n);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  if (special && q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace cfol
