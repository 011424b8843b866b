#include "cfol/homogeneity.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "cfol/clifford.hpp"

namespace cfol {

int field_dim(Field f) {
  switch (f) {
    case Field::R: return 1;
    case Field::C: return 2;
    case Field::H: return 4;
  }
  return 1;
}

Field field_for_m(int m) {
  switch (m) {
    case 1: return Field::R;
    case 2: return Field::C;
    case 4: return Field::H;
    default: throw std::invalid_argument("no diagonal group action for m = " + std::to_string(m));
  }
}

std::string to_string(Field f) {
  switch (f) {
    case Field::R: return "R";
    case Field::C: return "C";
    case Field::H: return "H";
  }
  return "?";
}

namespace {

// Matrix of q -> q * g on the first d quaternion coordinates.
Mat right_mult(const Quat& g, int d) {
  Mat r(d, d);
  for (int c = 0; c < d; ++c) {
    const Quat col = Quat::basis(c) * g;
    for (int row = 0; row < d; ++row) r(row, c) = col.coeff(row);
  }
  return r;
}

Quat random_entry(Field f, Sampler& s) {
  Quat q;
  for (int i = 0; i < field_dim(f); ++i) q.coeff(i) = s.gaussian();
  return q;
}

// sum_t a_t conj(b_t)
Quat hermitian(const std::vector<Quat>& a, const std::vector<Quat>& b) {
  Quat sum;
  for (std::size_t t = 0; t < a.size(); ++t) sum += a[t] * b[t].conj();
  return sum;
}

double fnorm(const std::vector<Quat>& a) {
  double s = 0.0;
  for (const auto& q : a) s += q.squaredNorm();
  return std::sqrt(s);
}

}  // namespace

GroupElement make_group_element(Field f, int k, std::vector<Quat> entries) {
  if (k < 1) throw std::invalid_argument("group element: k must be >= 1");
  if (entries.size() != static_cast<std::size_t>(k) * k) throw std::invalid_argument("group element: expected k*k entries");
  const int d = field_dim(f);
  GroupElement g;
  g.field = f;
  g.k = k;
  g.entries = std::move(entries);
  g.real = Mat::Zero(k * d, k * d);
  // (u g)_i = sum_j u_j g_ji
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g.real.block(i * d, j * d, d, d) = right_mult(g.at(j, i), d);
  return g;
}

GroupElement sample_group_element(Field f, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("sample_group_element: k must be >= 1");
  Sampler s(seed);
  std::vector<std::vector<Quat>> rows(k, std::vector<Quat>(k));
  for (int i = 0; i < k; ++i) {
    for (;;) {
      for (auto& e : rows[i]) e = random_entry(f, s);
      for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < i; ++j) {
          const Quat c = hermitian(rows[i], rows[j]);
          for (int t = 0; t < k; ++t) rows[i][t] -= c * rows[j][t];
        }
      const double n = fnorm(rows[i]);
      if (n > 1e-8) {
        for (auto& e : rows[i]) e = e / n;
        break;
      }
    }
  }
  if (f == Field::R) {
    Mat a(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) a(i, j) = rows[i][j].w;
    if (a.determinant() < 0)
      for (auto& e : rows[0]) e = -e;
  } else if (f == Field::C) {
    Eigen::MatrixXcd a(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) a(i, j) = {rows[i][j].w, rows[i][j].x};
    const std::complex<double> det = a.determinant();
    const std::complex<double> phase = det / std::abs(det);
    const Quat inv{phase.real(), -phase.imag(), 0.0, 0.0};
    for (auto& e : rows[0]) e = inv * e;
  }
  std::vector<Quat> entries;
  entries.reserve(static_cast<std::size_t>(k) * k);
  for (auto& row : rows)
    for (auto& e : row) entries.push_back(e);
  return make_group_element(f, k, std::move(entries));
}

Vec diagonal_act(const GroupElement& g, const Vec& x) {
  const Eigen::Index half = g.real.rows();
  if (x.size() != 2 * half) throw std::invalid_argument("diagonal_act: dimension mismatch");
  Vec out(x.size());
  out.head(half) = g.real * x.head(half);
  out.tail(half) = g.real * x.tail(half);
  return out;
}

std::vector<Quat> to_quaternions(Field f, const Vec& coords) {
  const int d = field_dim(f);
  if (coords.size() % d != 0) throw std::invalid_argument("to_quaternions: length not a multiple of dim F");
  std::vector<Quat> out(coords.size() / d);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (int c = 0; c < d; ++c) out[i].coeff(c) = coords[static_cast<Eigen::Index>(i) * d + c];
  return out;
}

Vec from_quaternions(Field f, const std::vector<Quat>& q) {
  const int d = field_dim(f);
  Vec out(static_cast<Eigen::Index>(q.size()) * d);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (int c = 0; c < d; ++c) out[static_cast<Eigen::Index>(i) * d + c] = q[i].coeff(c);
  return out;
}

NormalForm normal_form(const std::vector<Quat>& u, const std::vector<Quat>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("normal_form: u and v differ in length");
  const double nu = fnorm(u), nv = fnorm(v);
  if (std::abs(nu * nu + nv * nv - 1.0) > 1e-12) throw std::invalid_argument("normal_form: (u, v) is not a unit vector");
  const double r0 = nu * nu - nv * nv;
  const Quat w = hermitian(u, v);
  NormalForm nf;
  nf.u1 = std::sqrt(std::max(0.0, 0.5 * (1.0 + r0)));
  if (nf.u1 > 1e-8) {
    nf.v1 = w.conj() / nf.u1;
    // v2 = |v - alpha u| with alpha = conj(w) / |u|^2, the part of v off the F-line of u
    const Quat alpha = w.conj() / (nu * nu);
    double rest = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) rest += (v[i] - alpha * u[i]).squaredNorm();
    nf.v2 = std::sqrt(rest);
  } else {
    nf.v1.w = std::sqrt(std::max(0.0, 0.5 * (1.0 - r0)));
  }
  return nf;
}

NormalForm normal_form(Field f, int k, const Vec& x) {
  const int half = k * field_dim(f);
  if (x.size() != 2 * half) throw std::invalid_argument("normal_form: dimension mismatch");
  return normal_form(to_quaternions(f, x.head(half)), to_quaternions(f, x.tail(half)));
}

double normal_form_distance(const NormalForm& a, const NormalForm& b) {
  const Quat dv = a.v1 - b.v1;
  return std::sqrt((a.u1 - b.u1) * (a.u1 - b.u1) + dv.squaredNorm() + (a.v2 - b.v2) * (a.v2 - b.v2));
}

std::string HomogeneityVerdict::label() const {
  switch (status) {
    case Status::Homogeneous: return "homogeneous(" + group + ")";
    case Status::NonHomogeneous: return "non_homogeneous";
    case Status::Conditional: return "conditionally(" + condition + ")";
  }
  return "";
}

HomogeneityVerdict classify_homogeneity(const EquivalenceProfile& p) {
  using S = HomogeneityVerdict::Status;
  if (p.m < 1 || p.k < 1) throw std::invalid_argument("classify_homogeneity: m and k must be positive");
  if (p.m == 1 && p.k == 1) throw std::invalid_argument("classify_homogeneity: (m,k) = (1,1) is excluded");
  const std::string ks = std::to_string(p.k);
  auto hom = [](std::string group, std::string source) {
    return HomogeneityVerdict{S::Homogeneous, std::move(group), "", std::move(source)};
  };
  auto non = [](std::string source) { return HomogeneityVerdict{S::NonHomogeneous, "", "", std::move(source)}; };

  const std::int64_t l = p.k * delta(p.m);
  if (l == p.m) {
    if (p.m == 2) return hom("U(1)", "sphere quotient: Hopf fibration S^3 -> S^2, orbits of U(1)");
    if (p.m == 4) return hom("Sp(1)", "sphere quotient: Hopf fibration S^7 -> S^4, orbits of Sp(1)");
    return non("sphere quotient: Hopf fibration S^15 -> S^8 is the only non-homogeneous regular foliation");
  }
  if (p.m == 1) return hom("SO(" + ks + ")", "diagonal SO(k) action on R^k x R^k");
  if (p.m == 2) return hom("SU(" + ks + ")", "diagonal SU(k) action on C^k x C^k");
  if (p.m == 4) {
    if (!p.kappa) {
      HomogeneityVerdict v{S::Conditional, "Sp(" + ks + ")", "P0 P1 P2 P3 P4 = +-Id",
                           "homogeneous iff m in {1,2,4} with P0 P1 P2 P3 P4 = +-Id when m = 4"};
      return v;
    }
    if (*p.kappa == p.k) return hom("Sp(" + ks + ")", "diagonal Sp(k) action on H^k x H^k; P0 P1 P2 P3 P4 = +-Id");
    return non("m = 4 with P0 P1 P2 P3 P4 != +-Id is not homogeneous");
  }
  if (l == p.m + 1) throw std::invalid_argument("classify_homogeneity: l = m+1 profile " + to_string(p) + " is not supported");
  if (p.m == 9 && p.k == 1) return non("C_{9,1}: the Clifford foliation is not homogeneous");
  return non("homogeneous only for m in {1,2,4}; m = " + std::to_string(p.m) + " with l > m+1");
}

}  // namespace cfol
