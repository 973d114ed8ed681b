#include "naxray/liegroup.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace naxray {

std::string_view to_string(Group g) { return g == Group::SU2 ? "su2" : "so3"; }

Group parse_group(std::string_view name) {
  if (name == "su2" || name == "SU2") return Group::SU2;
  if (name == "so3" || name == "SO3") return Group::SO3;
  throw std::invalid_argument("unknown group '" + std::string(name) + "'");
}

// Complex products are spelled out on re/im parts; std::complex operator*
// carries NaN-recovery branches that cost a lot in the transport loop.
namespace {
inline Complex cmul(const Complex& x, const Complex& y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}
}  // namespace

Mat2c operator*(const Mat2c& x, const Mat2c& y) {
  Mat2c r;
  r.a[0] = cmul(x.a[0], y.a[0]) + cmul(x.a[1], y.a[2]);
  r.a[1] = cmul(x.a[0], y.a[1]) + cmul(x.a[1], y.a[3]);
  r.a[2] = cmul(x.a[2], y.a[0]) + cmul(x.a[3], y.a[2]);
  r.a[3] = cmul(x.a[2], y.a[1]) + cmul(x.a[3], y.a[3]);
  return r;
}

Mat2c operator+(const Mat2c& x, const Mat2c& y) {
  Mat2c r;
  for (int i = 0; i < 4; ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

Mat2c operator-(const Mat2c& x, const Mat2c& y) {
  Mat2c r;
  for (int i = 0; i < 4; ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

Mat2c operator*(double s, const Mat2c& x) {
  Mat2c r;
  for (int i = 0; i < 4; ++i) r.a[i] = s * x.a[i];
  return r;
}

Mat2c adjoint(const Mat2c& x) {
  return Mat2c{{std::conj(x.a[0]), std::conj(x.a[2]), std::conj(x.a[1]), std::conj(x.a[3])}};
}

Complex det(const Mat2c& x) { return cmul(x.a[0], x.a[3]) - cmul(x.a[1], x.a[2]); }

Mat3 operator*(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j) + x(i, 2) * y(2, j);
  return r;
}

Mat3 operator+(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

Mat3 operator-(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

Mat3 operator*(double s, const Mat3& x) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.a[i] = s * x.a[i];
  return r;
}

Mat3 adjoint(const Mat3& x) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = x(j, i);
  return r;
}

double det(const Mat3& x) {
  return x(0, 0) * (x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1)) -
         x(0, 1) * (x(1, 0) * x(2, 2) - x(1, 2) * x(2, 0)) +
         x(0, 2) * (x(1, 0) * x(2, 1) - x(1, 1) * x(2, 0));
}

double sinc(double x) {
  // Below 1e-4 the truncated series is exact to double precision.
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

Mat2c realize_su2(const Vec3& b) {
  return Mat2c{{Complex{0, 0.5 * b[0]}, Complex{0.5 * b[1], 0.5 * b[2]},
                Complex{-0.5 * b[1], 0.5 * b[2]}, Complex{0, -0.5 * b[0]}}};
}

Mat3 realize_so3(const Vec3& b) {
  return Mat3{{0, b[2], -b[1], -b[2], 0, b[0], b[1], -b[0], 0}};
}

Mat2c exp_su2(const Vec3& b, double l) {
  const double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  const double x = 0.5 * l * norm;
  const double c = std::cos(x);
  const double s = 0.5 * l * sinc(x);
  return Mat2c{{Complex{c, s * b[0]}, Complex{s * b[1], s * b[2]},
                Complex{-s * b[1], s * b[2]}, Complex{c, -s * b[0]}}};
}

Mat3 exp_so3(const Vec3& b, double l) {
  const Vec3 lb{l * b[0], l * b[1], l * b[2]};
  const double theta = std::sqrt(lb[0] * lb[0] + lb[1] * lb[1] + lb[2] * lb[2]);
  const Mat3 a = realize_so3(lb);
  const double s1 = sinc(theta);
  const double sh = sinc(0.5 * theta);
  const double s2 = 0.5 * sh * sh;
  return Mat3::identity() + s1 * a + s2 * (a * a);
}

double frob_norm(const Mat2c& x) {
  double s = 0;
  for (const auto& z : x.a) s += std::norm(z);
  return std::sqrt(s);
}

double frob_norm(const Mat3& x) {
  double s = 0;
  for (double v : x.a) s += v * v;
  return std::sqrt(s);
}

double frob_dist(const Mat2c& x, const Mat2c& y) { return frob_norm(x - y); }
double frob_dist(const Mat3& x, const Mat3& y) { return frob_norm(x - y); }

double frob_dist(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("frob_dist: shape mismatch (" + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + " reals)");
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void flatten(const Mat2c& x, std::span<double> out) {
  for (int i = 0; i < 4; ++i) {
    out[2 * i] = x.a[i].real();
    out[2 * i + 1] = x.a[i].imag();
  }
}

void flatten(const Mat3& x, std::span<double> out) {
  for (int i = 0; i < 9; ++i) out[i] = x.a[i];
}

Mat2c unflatten_su2(std::span<const double> flat) {
  if (flat.size() != 8) throw std::invalid_argument("unflatten_su2: expected 8 reals");
  Mat2c m;
  for (int i = 0; i < 4; ++i) m.a[i] = Complex{flat[2 * i], flat[2 * i + 1]};
  return m;
}

Mat3 unflatten_so3(std::span<const double> flat) {
  if (flat.size() != 9) throw std::invalid_argument("unflatten_so3: expected 9 reals");
  Mat3 m;
  for (int i = 0; i < 9; ++i) m.a[i] = flat[i];
  return m;
}

}  // namespace naxray
