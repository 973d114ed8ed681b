#include "naxray/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numbers>
#include <set>
#include <utility>

#include "naxray/rng.hpp"

namespace naxray {

namespace {

constexpr double kInsideTol = 1e-12;

std::string fnv1a_hex(const std::vector<Point2>& v, const std::vector<Triangle>& t) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& p : v) {
    feed(&p.x, sizeof(double));
    feed(&p.y, sizeof(double));
  }
  for (const auto& tri : t) feed(tri.data(), sizeof(Triangle));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double signed_area(Point2 a, Point2 b, Point2 c) { return 0.5 * cross(b - a, c - a); }

Point2 closest_on_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  double s = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return a + s * ab;
}

}  // namespace

Mesh::Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const auto nv = static_cast<std::int32_t>(vertices_.size());
  if (nv < 3 || triangles_.empty()) throw std::invalid_argument("mesh: need at least one triangle");
  for (const auto& p : vertices_)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("mesh: non-finite vertex coordinate");

  for (auto& t : triangles_) {
    for (auto i : t)
      if (i < 0 || i >= nv) throw std::invalid_argument("mesh: triangle index out of range");
    double a = signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    if (a < 0) {
      std::swap(t[1], t[2]);
      a = -a;
    }
    if (!(a > 0)) throw std::invalid_argument("mesh: degenerate triangle");
  }

  // Edge (lo, hi) -> (triangle, local vertex opposite the edge).
  std::map<std::pair<std::int32_t, std::int32_t>, std::vector<std::pair<std::int32_t, int>>> edges;
  for (std::int32_t ti = 0; ti < static_cast<std::int32_t>(triangles_.size()); ++ti) {
    const auto& t = triangles_[ti];
    for (int k = 0; k < 3; ++k) {
      auto a = t[(k + 1) % 3], b = t[(k + 2) % 3];
      edges[{std::min(a, b), std::max(a, b)}].push_back({ti, k});
    }
  }

  neighbors_.assign(triangles_.size(), {-1, -1, -1});
  boundary_.assign(vertices_.size(), false);
  std::set<std::int32_t> btri;
  for (const auto& [e, owners] : edges) {
    if (owners.size() > 2) throw std::invalid_argument("mesh: non-manifold edge");
    if (owners.size() == 2) {
      neighbors_[owners[0].first][owners[0].second] = owners[1].first;
      neighbors_[owners[1].first][owners[1].second] = owners[0].first;
    } else {
      boundary_[e.first] = boundary_[e.second] = true;
      btri.insert(owners[0].first);
    }
  }
  boundary_triangles_.assign(btri.begin(), btri.end());

  weights_.assign(vertices_.size(), 0.0);
  for (std::int32_t ti = 0; ti < static_cast<std::int32_t>(triangles_.size()); ++ti) {
    const double third = triangle_area(ti) / 3.0;
    for (auto i : triangles_[ti]) weights_[i] += third;
  }
  hash_ = fnv1a_hex(vertices_, triangles_);
}

double Mesh::triangle_area(std::int32_t t) const {
  const auto& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double Mesh::total_area() const {
  double s = 0;
  for (std::int32_t t = 0; t < static_cast<std::int32_t>(triangles_.size()); ++t) s += triangle_area(t);
  return s;
}

Mesh Mesh::with_density(const std::function<double(Point2)>& density) const {
  Mesh m = *this;
  std::fill(m.weights_.begin(), m.weights_.end(), 0.0);
  for (std::int32_t ti = 0; ti < static_cast<std::int32_t>(triangles_.size()); ++ti) {
    const auto& t = triangles_[ti];
    const Point2 c = (1.0 / 3.0) * (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]);
    const double third = density(c) * triangle_area(ti) / 3.0;
    for (auto i : t) m.weights_[i] += third;
  }
  return m;
}

std::array<double, 3> Mesh::barycentric(std::int32_t t, Point2 p) const {
  const auto& tri = triangles_[t];
  const Point2 a = vertices_[tri[0]], b = vertices_[tri[1]], c = vertices_[tri[2]];
  const double d = cross(b - a, c - a);
  const double l1 = cross(p - a, c - a) / d;
  const double l2 = cross(b - a, p - a) / d;
  return {1.0 - l1 - l2, l1, l2};
}

Mesh generate_disk_mesh(int target_nv, std::uint64_t seed) {
  if (target_nv < 4) throw std::invalid_argument("generate_disk_mesh: target_nv must be >= 4");
  const double pi = std::numbers::pi;
  const int rings = std::max(1, static_cast<int>(std::lround(std::sqrt((target_nv - 1) / pi))));
  const double per_k = (target_nv - 1) / (0.5 * rings * (rings + 1.0));

  Rng rng(derive_seed(seed, Stream::kMesh));
  std::vector<Point2> verts{{0.0, 0.0}};
  std::vector<std::vector<std::int32_t>> ring_ids{{0}};
  std::vector<double> ring_phase{0.0};
  int prev_n = 1;
  for (int k = 1; k <= rings; ++k) {
    int n = std::max({3, prev_n, static_cast<int>(std::lround(per_k * k))});
    // Boundary points lie exactly on the unit circle.
    const double r = k == rings ? 1.0 : static_cast<double>(k) / rings;
    const double phase = rng.uniform();
    std::vector<std::int32_t> ids;
    for (int i = 0; i < n; ++i) {
      const double th = 2 * pi * (i + phase) / n;
      ids.push_back(static_cast<std::int32_t>(verts.size()));
      verts.push_back({r * std::cos(th), r * std::sin(th)});
    }
    ring_ids.push_back(std::move(ids));
    ring_phase.push_back(phase);
    prev_n = n;
  }

  std::vector<Triangle> tris;
  auto angle_of = [&](int k, int i) {
    const int n = static_cast<int>(ring_ids[k].size());
    return 2 * pi * (i + ring_phase[k]) / n;
  };
  for (int k = 1; k <= rings; ++k) {
    const auto& outer = ring_ids[k];
    const int nb = static_cast<int>(outer.size());
    if (k == 1) {
      for (int j = 0; j < nb; ++j) tris.push_back({0, outer[j], outer[(j + 1) % nb]});
      continue;
    }
    const auto& inner = ring_ids[k - 1];
    const int na = static_cast<int>(inner.size());
    // Align the outer ring so that its start is the vertex nearest in angle to inner[0].
    const double a0 = angle_of(k - 1, 0);
    int j0 = 0;
    double best = 1e300;
    for (int j = 0; j < nb; ++j) {
      double d = std::remainder(angle_of(k, j) - a0, 2 * pi);
      if (std::abs(d) < best) {
        best = std::abs(d);
        j0 = j;
      }
    }
    auto ua = [&](int i) { return a0 + 2 * pi * i / na; };
    const double b0 = a0 + std::remainder(angle_of(k, j0) - a0, 2 * pi);
    auto ub = [&](int j) { return b0 + 2 * pi * j / nb; };
    auto A = [&](int i) { return inner[i % na]; };
    auto B = [&](int j) { return outer[(j0 + j) % nb]; };
    int i = 0, j = 0;
    while (i < na || j < nb) {
      const bool advance_inner = j == nb || (i < na && ua(i + 1) < ub(j + 1));
      if (advance_inner) {
        tris.push_back({A(i), B(j), A(i + 1)});
        ++i;
      } else {
        tris.push_back({A(i), B(j), B(j + 1)});
        ++j;
      }
    }
  }

  // Orient counterclockwise before smoothing so sign checks are meaningful.
  for (auto& t : tris)
    if (signed_area(verts[t[0]], verts[t[1]], verts[t[2]]) < 0) std::swap(t[1], t[2]);

  std::vector<std::set<std::int32_t>> adj(verts.size());
  for (const auto& t : tris)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) adj[t[a]].insert(t[b]);
  const std::size_t first_boundary = ring_ids.back().front();
  std::vector<Point2> smoothed = verts;
  for (std::size_t v = 0; v < first_boundary; ++v) {
    Point2 s{};
    for (auto u : adj[v]) s = s + verts[u];
    smoothed[v] = (1.0 / adj[v].size()) * s;
  }
  bool valid = true;
  for (const auto& t : tris)
    if (!(signed_area(smoothed[t[0]], smoothed[t[1]], smoothed[t[2]]) > 0)) valid = false;
  if (valid) verts = std::move(smoothed);

  return Mesh(std::move(verts), std::move(tris));
}

std::optional<Location> Locator::walk(Point2 p) {
  const auto nt = static_cast<std::int32_t>(mesh_->num_triangles());
  std::int32_t t = (last_ >= 0 && last_ < nt) ? last_ : 0;
  for (std::int32_t iter = 0; iter < nt; ++iter) {
    const auto bary = mesh_->barycentric(t, p);
    int kmin = 0;
    for (int k = 1; k < 3; ++k)
      if (bary[k] < bary[kmin]) kmin = k;
    if (bary[kmin] >= -kInsideTol) return Location{t, bary};
    const auto nb = mesh_->neighbor(t, kmin);
    if (nb < 0) return std::nullopt;
    t = nb;
  }
  return std::nullopt;
}

std::optional<Location> Locator::brute_force(Point2 p) const {
  for (std::int32_t t = 0; t < static_cast<std::int32_t>(mesh_->num_triangles()); ++t) {
    const auto bary = mesh_->barycentric(t, p);
    if (bary[0] >= -kInsideTol && bary[1] >= -kInsideTol && bary[2] >= -kInsideTol)
      return Location{t, bary};
  }
  return std::nullopt;
}

std::optional<Location> Locator::find(Point2 p) {
  auto loc = walk(p);
  if (!loc) loc = brute_force(p);
  if (!loc) return std::nullopt;
  // Snap the tolerance band back onto the simplex.
  double s = 0;
  for (auto& b : loc->bary) {
    b = std::max(b, 0.0);
    s += b;
  }
  for (auto& b : loc->bary) b /= s;
  last_ = loc->triangle;
  return loc;
}

Location Locator::locate(Point2 p) {
  if (auto loc = find(p)) return *loc;
  throw OutsideMeshError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                         ") is outside the mesh");
}

Location Locator::locate_or_clamp(Point2 p) {
  if (auto loc = find(p)) return *loc;
  double best = 1e300;
  std::int32_t best_t = -1;
  Point2 best_q{};
  for (auto t : mesh_->boundary_triangles()) {
    const auto& tri = mesh_->triangles()[t];
    for (int k = 0; k < 3; ++k) {
      const Point2 q = closest_on_segment(p, mesh_->vertices()[tri[k]], mesh_->vertices()[tri[(k + 1) % 3]]);
      const Point2 d = q - p;
      const double d2 = dot(d, d);
      if (d2 < best) {
        best = d2;
        best_t = t;
        best_q = q;
      }
    }
  }
  Location loc{best_t, mesh_->barycentric(best_t, best_q)};
  double s = 0;
  for (auto& b : loc.bary) {
    b = std::max(b, 0.0);
    s += b;
  }
  for (auto& b : loc.bary) b /= s;
  last_ = best_t;
  return loc;
}

Location locate(const Mesh& mesh, Point2 p) { return Locator(mesh).locate(p); }

Point2 reconstruct(const Mesh& mesh, const Location& loc) {
  const auto& t = mesh.triangles()[loc.triangle];
  const auto v = mesh.vertices();
  return loc.bary[0] * v[t[0]] + loc.bary[1] * v[t[1]] + loc.bary[2] * v[t[2]];
}

double l2_norm(std::span<const double> weights, std::span<const double> values) {
  if (weights.size() != values.size())
    throw std::invalid_argument("l2_norm: value count does not match vertex count");
  double s = 0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i] * values[i];
  return std::sqrt(s);
}

double l2_norm(const Mesh& mesh, std::span<const double> values) {
  return l2_norm(mesh.lumped_weights(), values);
}

}  // namespace naxray
