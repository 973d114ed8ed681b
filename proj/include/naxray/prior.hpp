#pragma once

#include <memory>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "naxray/field.hpp"
#include "naxray/rng.hpp"

namespace naxray {

struct MaternParams {
  double nu = 3.0;
  double ell = 0.2;
  double jitter = 1e-10;
};

/// k(r) = 2^{1-nu}/Gamma(nu) (sqrt(2 nu) r / ell)^nu K_nu(sqrt(2 nu) r / ell), k(0) = 1.
/// Half-integer nu uses the terminating closed form; other nu go through
/// matern_kernel_bessel.
double matern_kernel(const MaternParams& p, double r);

/// The general route through std::cyl_bessel_k, for any nu > 0.
double matern_kernel_bessel(const MaternParams& p, double r);

/// Dense covariance C_ij = k(|x_i - x_j|) + jitter delta_ij (OpenMP over columns).
Eigen::MatrixXd matern_covariance(std::span<const Point2> points, const MaternParams& p);
Eigen::MatrixXd matern_covariance_serial(std::span<const Point2> points, const MaternParams& p);
Eigen::MatrixXd matern_covariance(const Mesh& mesh, const MaternParams& p);
Eigen::MatrixXd matern_covariance_serial(const Mesh& mesh, const MaternParams& p);

/// N^{-1/(2(alpha+1))}, the factor that shrinks the base prior with the sample size.
double shrinkage_scale(double alpha, double n);

class CovarianceNotPdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cholesky factor of the Matern covariance on a mesh. Immutable after build;
/// sampling takes a caller-owned Rng.
class PriorSampler {
 public:
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const Eigen::MatrixXd& chol() const { return chol_; }
  double scale() const { return scale_; }
  /// Jitter actually used after escalation.
  double jitter() const { return jitter_; }
  const MaternParams& params() const { return params_; }

  /// Each component is scale * (L z) with z ~ N(0, I), drawn in component order.
  AlgebraField sample_field(Group group, Rng& rng) const;

  friend PriorSampler build_sampler(std::shared_ptr<const Mesh> mesh, const MaternParams& p, double scale);

 private:
  std::shared_ptr<const Mesh> mesh_;
  MaternParams params_;
  Eigen::MatrixXd chol_;
  double scale_ = 1.0;
  double jitter_ = 0.0;
};

/// Factorizes the covariance, escalating the jitter x10 from p.jitter up to
/// 1e-6 until the factor reproduces the covariance to 1e-8 relative
/// Frobenius. Throws CovarianceNotPdError otherwise.
PriorSampler build_sampler(std::shared_ptr<const Mesh> mesh, const MaternParams& p, double scale = 1.0);

}  // namespace naxray
