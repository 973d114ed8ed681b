#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "naxray/liegroup.hpp"
#include "naxray/mesh.hpp"

namespace naxray {

/// Piecewise-linear Lie-algebra-valued field: three per-vertex coefficient
/// vectors (b1, b2, b3) on a shared, immutable mesh.
class AlgebraField {
 public:
  AlgebraField(std::shared_ptr<const Mesh> mesh, Group group);
  AlgebraField(std::shared_ptr<const Mesh> mesh, Group group, std::array<std::vector<double>, 3> coeffs);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  Group group() const { return group_; }
  std::size_t size() const { return coeffs_[0].size(); }

  std::span<const double> component(int k) const { return coeffs_[k]; }
  std::span<double> component(int k) { return coeffs_[k]; }
  const std::array<std::vector<double>, 3>& coeffs() const { return coeffs_; }

  Vec3 at_vertex(std::size_t v) const { return {coeffs_[0][v], coeffs_[1][v], coeffs_[2][v]}; }

  /// Barycentric interpolation of the coefficients.
  Vec3 eval(const Location& loc) const {
    const auto& t = mesh_->triangles()[loc.triangle];
    Vec3 r;
    for (int k = 0; k < 3; ++k) {
      const auto& c = coeffs_[k];
      r[k] = loc.bary[0] * c[t[0]] + loc.bary[1] * c[t[1]] + loc.bary[2] * c[t[2]];
    }
    return r;
  }

  bool operator==(const AlgebraField& o) const {
    return mesh_->hash() == o.mesh_->hash() && group_ == o.group_ && coeffs_ == o.coeffs_;
  }

 private:
  std::shared_ptr<const Mesh> mesh_;
  Group group_;
  std::array<std::vector<double>, 3> coeffs_;
};

AlgebraElement eval_field(const AlgebraField& f, const Location& loc);

/// Samples g at every vertex. Throws std::invalid_argument on non-finite values.
AlgebraField from_function(std::shared_ptr<const Mesh> mesh, Group group,
                           const std::function<Vec3(Point2)>& g);

/// Ground-truth presets: "zero", or "bumps", three Gaussian bumps of
/// amplitude 1 and width 0.25, with b1 centred at (0.4, 0), b2 at (-0.4, 0)
/// and b3 at (0, 0.4).
AlgebraField builtin_truth(std::string_view name, std::shared_ptr<const Mesh> mesh, Group group);

/// a*f + b*g, coefficientwise.
AlgebraField combine(double a, const AlgebraField& f, double b, const AlgebraField& g);
AlgebraField scaled(double s, const AlgebraField& f);

/// L^2(M) Frobenius distance of the realized matrix fields, using the
/// mesh's lumped weights and ||sum b_k s_k||_F^2 = w_G |b|^2.
double field_l2_distance(const AlgebraField& f, const AlgebraField& g);
double field_l2_norm(const AlgebraField& f);

/// Throws std::invalid_argument when f and g live on different meshes or groups.
void require_compatible(const AlgebraField& f, const AlgebraField& g);

}  // namespace naxray
