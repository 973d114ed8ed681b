#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "naxray/field.hpp"
#include "naxray/geometry.hpp"
#include "naxray/mesh.hpp"

namespace naxray {

/// Malformed, truncated, or mismatched artifact file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kFormatVersion = 1;

/// {"version", "vertices": [[x, y], ...], "triangles": [[i, j, k], ...]}
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
Mesh load_mesh(const std::filesystem::path& path);

/// {"version", "mesh_hash", "group", "b1", "b2", "b3"}. Loading checks the
/// hash against the mesh the field is attached to.
void save_field(const AlgebraField& f, const std::filesystem::path& path);
AlgebraField load_field(const std::filesystem::path& path, std::shared_ptr<const Mesh> mesh);

/// Geodesic sidecar: {"version", "metric", "step", "mesh_hash",
/// "entries": [{"beta", "alpha", "exit_time"}]}. Traces are not stored; they
/// are recomputed on load and the recorded exit times are checked.
void save_geodesics(const std::vector<Geodesic>& geos, const Metric& metric, double step,
                    const std::filesystem::path& path);
std::vector<Geodesic> load_geodesics(const std::filesystem::path& path, const Mesh& mesh);

std::string read_text(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it into place.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace naxray
