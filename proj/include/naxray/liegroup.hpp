#pragma once

#include <array>
#include <complex>
#include <span>
#include <string_view>

namespace naxray {

using Vec3 = std::array<double, 3>;
using Complex = std::complex<double>;

enum class Group { SU2, SO3 };

std::string_view to_string(Group g);
Group parse_group(std::string_view name);

/// Number of reals in the flattened matrix of a group element: 8 for SU(2)
/// (row-major, interleaved re/im), 9 for SO(3) (row-major).
constexpr std::size_t flat_size(Group g) { return g == Group::SU2 ? 8 : 9; }

/// Coefficients (b1,b2,b3) of an element of su(2) or so(3).
struct AlgebraElement {
  Vec3 coeffs{};
  Group group = Group::SU2;
};

/// 2x2 complex matrix, row-major. std::complex is layout compatible with
/// double[2], so the storage is 8 interleaved (re, im) reals.
struct Mat2c {
  std::array<Complex, 4> a{};

  Complex& operator()(int r, int c) { return a[2 * r + c]; }
  const Complex& operator()(int r, int c) const { return a[2 * r + c]; }
  Complex& operator[](std::size_t k) { return a[k]; }
  const Complex& operator[](std::size_t k) const { return a[k]; }
  auto begin() { return a.begin(); }
  auto end() { return a.end(); }
  auto begin() const { return a.begin(); }
  auto end() const { return a.end(); }
  bool operator==(const Mat2c&) const = default;

  static Mat2c identity() { return Mat2c{{Complex{1, 0}, Complex{}, Complex{}, Complex{1, 0}}}; }
  static Mat2c zero() { return Mat2c{}; }
};

/// 3x3 real matrix, row-major.
struct Mat3 {
  std::array<double, 9> a{};

  double& operator()(int r, int c) { return a[3 * r + c]; }
  double operator()(int r, int c) const { return a[3 * r + c]; }
  double& operator[](std::size_t k) { return a[k]; }
  double operator[](std::size_t k) const { return a[k]; }
  auto begin() { return a.begin(); }
  auto end() { return a.end(); }
  auto begin() const { return a.begin(); }
  auto end() const { return a.end(); }
  bool operator==(const Mat3&) const = default;

  static Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
  static Mat3 zero() { return Mat3{}; }
};

Mat2c operator*(const Mat2c& x, const Mat2c& y);
Mat2c operator+(const Mat2c& x, const Mat2c& y);
Mat2c operator-(const Mat2c& x, const Mat2c& y);
Mat2c operator*(double s, const Mat2c& x);
Mat2c adjoint(const Mat2c& x);
Complex det(const Mat2c& x);

Mat3 operator*(const Mat3& x, const Mat3& y);
Mat3 operator+(const Mat3& x, const Mat3& y);
Mat3 operator-(const Mat3& x, const Mat3& y);
Mat3 operator*(double s, const Mat3& x);
Mat3 adjoint(const Mat3& x);
double det(const Mat3& x);

/// sin(x)/x with the removable singularity at 0 filled in.
double sinc(double x);

/// b1 s1 + b2 s2 + b3 s3 with s_k the half-Pauli basis of su(2), where
/// [s1,s2] = s3 cyclically.
Mat2c realize_su2(const Vec3& b);

/// The so(3) matrix [[0,B3,-B2],[-B3,0,B1],[B2,-B1,0]].
Mat3 realize_so3(const Vec3& b);

/// exp(l A) for A = realize_su2(b):
///   cos(l|b|/2) id + sinc(l|b|/2) l A.
Mat2c exp_su2(const Vec3& b, double l);

/// exp(l A) for A = realize_so3(b), Rodrigues form
///   id + sinc(t) lA + 1/2 sinc^2(t/2) (lA)^2,  t = l|b|.
Mat3 exp_so3(const Vec3& b, double l = 1.0);

double frob_norm(const Mat2c& x);
double frob_norm(const Mat3& x);
double frob_dist(const Mat2c& x, const Mat2c& y);
double frob_dist(const Mat3& x, const Mat3& y);

/// Frobenius distance between two flattened matrices. Throws
/// std::invalid_argument when the shapes differ.
double frob_dist(std::span<const double> x, std::span<const double> y);

void flatten(const Mat2c& x, std::span<double> out);
void flatten(const Mat3& x, std::span<double> out);
Mat2c unflatten_su2(std::span<const double> flat);
Mat3 unflatten_so3(std::span<const double> flat);

/// Squared Frobenius norm of a realized basis element, so that
/// ||realize(b)||_F^2 = frobenius_weight(g) * |b|^2.
constexpr double frobenius_weight(Group g) { return g == Group::SU2 ? 0.5 : 2.0; }

/// Compile-time group policies used by the transport kernels.
struct Su2 {
  using Matrix = Mat2c;
  static constexpr Group kGroup = Group::SU2;
  static Matrix identity() { return Mat2c::identity(); }
  static Matrix realize(const Vec3& b) { return realize_su2(b); }
  static Matrix exp(const Vec3& b, double l) { return exp_su2(b, l); }
};

struct So3 {
  using Matrix = Mat3;
  static constexpr Group kGroup = Group::SO3;
  static Matrix identity() { return Mat3::identity(); }
  static Matrix realize(const Vec3& b) { return realize_so3(b); }
  static Matrix exp(const Vec3& b, double l) { return exp_so3(b, l); }
};

}  // namespace naxray
