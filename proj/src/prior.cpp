#include "naxray/prior.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace naxray {

namespace {

bool is_half_integer(double nu, int& n) {
  const double twice = 2.0 * nu;
  const double r = std::round(twice);
  if (std::abs(twice - r) > 1e-12 || static_cast<long>(r) % 2 == 0) return false;
  n = static_cast<int>((r - 1) / 2);
  return n <= 20;
}

// exp(-x) n!/(2n)! sum_{i=0}^{n} (n+i)!/(i!(n-i)!) (2x)^{n-i}
double half_integer_matern(int n, double x) {
  double coef = std::tgamma(n + 1.0) / std::tgamma(2.0 * n + 1.0);
  double sum = 0;
  for (int i = 0; i <= n; ++i) {
    const double c = std::tgamma(n + i + 1.0) / (std::tgamma(i + 1.0) * std::tgamma(n - i + 1.0));
    sum += c * std::pow(2.0 * x, n - i);
  }
  return std::exp(-x) * coef * sum;
}

void check_params(const MaternParams& p) {
  if (!(p.nu > 0) || !(p.ell > 0)) throw std::invalid_argument("Matern parameters nu and ell must be positive");
  if (!(p.jitter >= 0)) throw std::invalid_argument("Matern jitter must be non-negative");
}

}  // namespace

double matern_kernel_bessel(const MaternParams& p, double r) {
  if (r <= 0) return 1.0;
  const double x = std::sqrt(2.0 * p.nu) * r / p.ell;
  // Past x ~ 700 K_nu underflows long before x^nu overflows.
  if (x > 700) return 0.0;
  const double logpre = (1.0 - p.nu) * std::log(2.0) - std::lgamma(p.nu) + p.nu * std::log(x);
  return std::exp(logpre) * std::cyl_bessel_k(p.nu, x);
}

double matern_kernel(const MaternParams& p, double r) {
  if (r <= 0) return 1.0;
  int n = 0;
  if (is_half_integer(p.nu, n)) return half_integer_matern(n, std::sqrt(2.0 * p.nu) * r / p.ell);
  return matern_kernel_bessel(p, r);
}

Eigen::MatrixXd matern_covariance(std::span<const Point2> v, const MaternParams& p) {
  check_params(p);
  const auto n = static_cast<std::int64_t>(v.size());
  Eigen::MatrixXd c(n, n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t j = 0; j < n; ++j) {
    for (std::int64_t i = 0; i < n; ++i) {
      const Point2 d = v[i] - v[j];
      c(i, j) = matern_kernel(p, std::sqrt(dot(d, d)));
    }
    c(j, j) = 1.0 + p.jitter;
  }
  return c;
}

Eigen::MatrixXd matern_covariance_serial(std::span<const Point2> v, const MaternParams& p) {
  check_params(p);
  const auto n = static_cast<std::int64_t>(v.size());
  Eigen::MatrixXd c(n, n);
  for (std::int64_t j = 0; j < n; ++j) {
    for (std::int64_t i = 0; i < n; ++i) {
      const Point2 d = v[i] - v[j];
      c(i, j) = matern_kernel(p, std::sqrt(dot(d, d)));
    }
    c(j, j) = 1.0 + p.jitter;
  }
  return c;
}

Eigen::MatrixXd matern_covariance(const Mesh& mesh, const MaternParams& p) {
  return matern_covariance(mesh.vertices(), p);
}

Eigen::MatrixXd matern_covariance_serial(const Mesh& mesh, const MaternParams& p) {
  return matern_covariance_serial(mesh.vertices(), p);
}

double shrinkage_scale(double alpha, double n) { return std::pow(n, -1.0 / (2.0 * (alpha + 1.0))); }

PriorSampler build_sampler(std::shared_ptr<const Mesh> mesh, const MaternParams& p, double scale) {
  check_params(p);
  if (!mesh) throw std::invalid_argument("build_sampler: null mesh");
  constexpr double kMaxJitter = 1e-6;
  constexpr double kMinJitter = 1e-10;
  MaternParams trial = p;
  Eigen::MatrixXd base = matern_covariance(*mesh, MaternParams{p.nu, p.ell, 0.0});
  for (;;) {
    Eigen::MatrixXd c = base;
    c.diagonal().array() += trial.jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd l = llt.matrixL();
      const double rel = (l * l.transpose() - c).norm() / c.norm();
      if (rel <= 1e-8) {
        PriorSampler s;
        s.mesh_ = std::move(mesh);
        s.params_ = p;
        s.chol_ = std::move(l);
        s.scale_ = scale;
        s.jitter_ = trial.jitter;
        return s;
      }
    }
    if (trial.jitter >= kMaxJitter)
      throw CovarianceNotPdError("Matern covariance (nu=" + std::to_string(p.nu) + ", ell=" + std::to_string(p.ell) +
                                 ") is not positive definite up to jitter 1e-6");
    trial.jitter = std::min(kMaxJitter, std::max(kMinJitter, trial.jitter * 10.0));
  }
}

AlgebraField PriorSampler::sample_field(Group group, Rng& rng) const {
  const auto n = static_cast<Eigen::Index>(mesh_->num_vertices());
  std::array<std::vector<double>, 3> c;
  Eigen::VectorXd z(n);
  for (int k = 0; k < 3; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
    const Eigen::VectorXd b = chol_.triangularView<Eigen::Lower>() * z;
    c[k].resize(n);
    for (Eigen::Index i = 0; i < n; ++i) c[k][i] = scale_ * b[i];
  }
  return AlgebraField(mesh_, group, std::move(c));
}

}  // namespace naxray
