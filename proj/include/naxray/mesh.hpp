#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace naxray {

struct Point2 {
  double x = 0;
  double y = 0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

using Triangle = std::array<std::int32_t, 3>;

/// Triangle index plus barycentric weights of a point.
struct Location {
  std::int32_t triangle = -1;
  std::array<double, 3> bary{};
};

class OutsideMeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Triangulated disk with lumped (one third of each triangle's area per
/// vertex) quadrature weights. Immutable after construction.
class Mesh {
 public:
  /// Triangles with negative orientation are flipped to counterclockwise;
  /// degenerate triangles or out-of-range indices throw.
  Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles);

  std::span<const Point2> vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  const std::vector<bool>& boundary_flags() const { return boundary_; }
  std::span<const double> lumped_weights() const { return weights_; }

  /// Neighbor across the edge opposite local vertex k, or -1 on the boundary.
  std::int32_t neighbor(std::int32_t t, int k) const { return neighbors_[t][k]; }
  std::span<const std::int32_t> boundary_triangles() const { return boundary_triangles_; }

  double triangle_area(std::int32_t t) const;
  double total_area() const;

  /// Copy whose lumped weights use the area element density(x) dA, with the
  /// density sampled at each triangle centroid.
  Mesh with_density(const std::function<double(Point2)>& density) const;

  /// FNV-1a over vertex coordinates and triangle indices, as 16 hex digits.
  const std::string& hash() const { return hash_; }

  /// Barycentric coordinates of p with respect to triangle t (may be negative).
  std::array<double, 3> barycentric(std::int32_t t, Point2 p) const;

 private:
  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::array<std::int32_t, 3>> neighbors_;
  std::vector<std::int32_t> boundary_triangles_;
  std::vector<bool> boundary_;
  std::vector<double> weights_;
  std::string hash_;
};

/// Concentric-ring disk mesh with about target_nv vertices, followed by one
/// Laplacian smoothing pass of the interior vertices. seed sets the angular
/// phase of each ring.
Mesh generate_disk_mesh(int target_nv, std::uint64_t seed);

/// Walking point locator. It caches the last triangle found, so it is
/// cheap along a ray; each thread needs its own instance.
class Locator {
 public:
  explicit Locator(const Mesh& mesh) : mesh_(&mesh) {}

  std::optional<Location> find(Point2 p);
  /// Throws OutsideMeshError when p is not covered by any triangle.
  Location locate(Point2 p);
  /// Like locate, but a point outside the mesh is snapped to the closest
  /// point of the nearest boundary triangle.
  Location locate_or_clamp(Point2 p);

 private:
  std::optional<Location> walk(Point2 p);
  std::optional<Location> brute_force(Point2 p) const;

  const Mesh* mesh_;
  std::int32_t last_ = 0;
};

Location locate(const Mesh& mesh, Point2 p);

/// Convex combination of the triangle's vertices with weights loc.bary.
Point2 reconstruct(const Mesh& mesh, const Location& loc);

/// sqrt(sum_v w_v f_v^2) with the mesh's lumped weights.
double l2_norm(const Mesh& mesh, std::span<const double> values);
double l2_norm(std::span<const double> weights, std::span<const double> values);

}  // namespace naxray
