#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "naxray/mesh.hpp"

namespace naxray {

/// Isotropic metric g = exp(2 lambda(x, y)) id on the unit disk.
class Metric {
 public:
  enum class Kind { Euclidean, PaperGaussian };

  explicit Metric(Kind kind) : kind_(kind) {}

  Kind kind() const { return kind_; }
  std::string_view name() const;

  double lambda(Point2 p) const;
  Point2 grad_lambda(Point2 p) const;
  /// Riemannian area density exp(2 lambda).
  double area_density(Point2 p) const;

 private:
  Kind kind_;
};

/// "euclidean" (lambda = 0) or "paper-gaussian":
///   lambda = 0.3 (exp(-((x+0.3)^2+y^2)/(2 tau^2)) - exp(-((x-0.3)^2+y^2)/(2 tau^2))), tau = 0.25.
Metric builtin_metric(std::string_view name);

/// Mesh whose lumped weights carry the metric's area element.
Mesh metric_weighted(const Mesh& mesh, const Metric& metric);

/// Fan-beam coordinates of an inward unit vector at the boundary: the
/// entry point is (cos beta, sin beta) and the initial direction angle is
/// beta + pi + alpha.
struct FanBeamPoint {
  double beta = 0;   // (0, 2 pi)
  double alpha = 0;  // (-pi/2, pi/2)
};

class NonExitingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A discretised unit-speed geodesic. points[0] is the entry point,
/// points[j] for 0 < j < size-1 sit at arc length j*step, and the final
/// point is the interpolated exit on the unit circle at arc length
/// exit_time.
struct Geodesic {
  FanBeamPoint entry;
  std::string mesh_hash;
  double step = 0;
  std::vector<Point2> points;
  std::vector<double> angles;
  std::vector<Location> locations;
  double exit_time = 0;

  std::size_t num_segments() const { return points.size() - 1; }
  /// Arc length of segment j (ending at points[j]), 1 <= j <= num_segments().
  double segment_length(std::size_t j) const {
    return j == num_segments() ? exit_time - step * static_cast<double>(j - 1) : step;
  }
};

/// Integrates x' = e^{-l} cos t, y' = e^{-l} sin t, t' = e^{-l}(-sin t l_x + cos t l_y)
/// with classical RK4 at fixed step h until the boundary is crossed. The
/// crossing parameter is found by linear interpolation of |x|^2 - 1 over the
/// last step. Geodesics shorter than a few steps are re-shot at h/2.
Geodesic shoot_geodesic(const Metric& metric, const Mesh& mesh, FanBeamPoint entry, double h);

/// OpenMP over entries; order preserved.
std::vector<Geodesic> shoot_geodesics(const Metric& metric, const Mesh& mesh,
                                      std::span<const FanBeamPoint> entries, double h);
std::vector<Geodesic> shoot_geodesics_serial(const Metric& metric, const Mesh& mesh,
                                             std::span<const FanBeamPoint> entries, double h);

/// n i.i.d. draws from the uniform law d beta d alpha / (2 pi^2).
std::vector<FanBeamPoint> sample_fanbeam(std::size_t n, std::uint64_t seed);

}  // namespace naxray
