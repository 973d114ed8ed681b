#include "naxray/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace naxray {

AlgebraField::AlgebraField(std::shared_ptr<const Mesh> mesh, Group group)
    : mesh_(std::move(mesh)), group_(group) {
  if (!mesh_) throw std::invalid_argument("AlgebraField: null mesh");
  for (auto& c : coeffs_) c.assign(mesh_->num_vertices(), 0.0);
}

AlgebraField::AlgebraField(std::shared_ptr<const Mesh> mesh, Group group,
                           std::array<std::vector<double>, 3> coeffs)
    : mesh_(std::move(mesh)), group_(group), coeffs_(std::move(coeffs)) {
  if (!mesh_) throw std::invalid_argument("AlgebraField: null mesh");
  for (const auto& c : coeffs_) {
    if (c.size() != mesh_->num_vertices())
      throw std::invalid_argument("AlgebraField: coefficient vector length " + std::to_string(c.size()) +
                                  " does not match vertex count " + std::to_string(mesh_->num_vertices()));
    for (double v : c)
      if (!std::isfinite(v)) throw std::invalid_argument("AlgebraField: non-finite coefficient");
  }
}

AlgebraElement eval_field(const AlgebraField& f, const Location& loc) { return {f.eval(loc), f.group()}; }

AlgebraField from_function(std::shared_ptr<const Mesh> mesh, Group group,
                           const std::function<Vec3(Point2)>& g) {
  std::array<std::vector<double>, 3> c;
  const auto verts = mesh->vertices();
  for (auto& comp : c) comp.resize(verts.size());
  for (std::size_t v = 0; v < verts.size(); ++v) {
    const Vec3 b = g(verts[v]);
    for (int k = 0; k < 3; ++k) {
      if (!std::isfinite(b[k])) throw std::invalid_argument("from_function: non-finite value at vertex " + std::to_string(v));
      c[k][v] = b[k];
    }
  }
  return AlgebraField(std::move(mesh), group, std::move(c));
}

AlgebraField builtin_truth(std::string_view name, std::shared_ptr<const Mesh> mesh, Group group) {
  if (name == "zero") return AlgebraField(std::move(mesh), group);
  if (name == "bumps") {
    constexpr double w = 0.25;
    auto bump = [](Point2 p, double cx, double cy) {
      const double d2 = (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy);
      return std::exp(-d2 / (2 * w * w));
    };
    return from_function(std::move(mesh), group, [&](Point2 p) -> Vec3 {
      return {bump(p, 0.4, 0.0), bump(p, -0.4, 0.0), bump(p, 0.0, 0.4)};
    });
  }
  throw std::invalid_argument("unknown truth preset '" + std::string(name) + "'");
}

void require_compatible(const AlgebraField& f, const AlgebraField& g) {
  if (f.mesh().hash() != g.mesh().hash() || f.size() != g.size())
    throw std::invalid_argument("fields live on different meshes");
  if (f.group() != g.group()) throw std::invalid_argument("fields have different groups");
}

AlgebraField combine(double a, const AlgebraField& f, double b, const AlgebraField& g) {
  require_compatible(f, g);
  std::array<std::vector<double>, 3> c;
  for (int k = 0; k < 3; ++k) {
    const auto fk = f.component(k), gk = g.component(k);
    c[k].resize(fk.size());
    for (std::size_t v = 0; v < fk.size(); ++v) c[k][v] = a * fk[v] + b * gk[v];
  }
  return AlgebraField(f.mesh_ptr(), f.group(), std::move(c));
}

AlgebraField scaled(double s, const AlgebraField& f) {
  auto c = f.coeffs();
  for (auto& comp : c)
    for (auto& v : comp) v *= s;
  return AlgebraField(f.mesh_ptr(), f.group(), std::move(c));
}

double field_l2_distance(const AlgebraField& f, const AlgebraField& g) {
  require_compatible(f, g);
  const auto w = f.mesh().lumped_weights();
  double s = 0;
  for (int k = 0; k < 3; ++k) {
    const auto fk = f.component(k), gk = g.component(k);
    for (std::size_t v = 0; v < fk.size(); ++v) {
      const double d = fk[v] - gk[v];
      s += w[v] * d * d;
    }
  }
  return std::sqrt(frobenius_weight(f.group()) * s);
}

double field_l2_norm(const AlgebraField& f) {
  const auto w = f.mesh().lumped_weights();
  double s = 0;
  for (int k = 0; k < 3; ++k) {
    const auto fk = f.component(k);
    for (std::size_t v = 0; v < fk.size(); ++v) s += w[v] * fk[v] * fk[v];
  }
  return std::sqrt(frobenius_weight(f.group()) * s);
}

}  // namespace naxray
