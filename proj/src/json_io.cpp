#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "naxray/data.hpp"
#include "naxray/io.hpp"

namespace naxray {

using nlohmann::json;

namespace {

json parse_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void check_version(const json& j, const std::filesystem::path& path) {
  if (!j.is_object() || !j.contains("version")) throw FormatError(path.string() + ": missing version field");
  if (j.at("version").get<int>() != kFormatVersion)
    throw FormatError(path.string() + ": unsupported version " + j.at("version").dump());
}

// Wraps json access errors (missing keys, wrong types) into FormatError.
template <class F>
auto guarded(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  json j;
  j["version"] = kFormatVersion;
  auto& v = j["vertices"] = json::array();
  for (const auto& p : mesh.vertices()) v.push_back({p.x, p.y});
  auto& t = j["triangles"] = json::array();
  for (const auto& tri : mesh.triangles()) t.push_back({tri[0], tri[1], tri[2]});
  write_text(path, j.dump() + "\n");
}

Mesh load_mesh(const std::filesystem::path& path) {
  const json j = parse_file(path);
  check_version(j, path);
  return guarded(path, [&] {
    std::vector<Point2> verts;
    for (const auto& p : j.at("vertices")) {
      if (p.size() != 2) throw FormatError(path.string() + ": vertex must be [x, y]");
      verts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    std::vector<Triangle> tris;
    for (const auto& t : j.at("triangles")) {
      if (t.size() != 3) throw FormatError(path.string() + ": triangle must be [i, j, k]");
      tris.push_back({t.at(0).get<std::int32_t>(), t.at(1).get<std::int32_t>(), t.at(2).get<std::int32_t>()});
    }
    try {
      return Mesh(std::move(verts), std::move(tris));
    } catch (const std::invalid_argument& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  });
}

void save_field(const AlgebraField& f, const std::filesystem::path& path) {
  json j;
  j["version"] = kFormatVersion;
  j["mesh_hash"] = f.mesh().hash();
  j["group"] = std::string(to_string(f.group()));
  j["b1"] = f.coeffs()[0];
  j["b2"] = f.coeffs()[1];
  j["b3"] = f.coeffs()[2];
  write_text(path, j.dump() + "\n");
}

AlgebraField load_field(const std::filesystem::path& path, std::shared_ptr<const Mesh> mesh) {
  const json j = parse_file(path);
  check_version(j, path);
  return guarded(path, [&] {
    const auto hash = j.at("mesh_hash").get<std::string>();
    if (hash != mesh->hash())
      throw FormatError(path.string() + ": field belongs to mesh " + hash + ", not " + mesh->hash());
    const Group g = parse_group(j.at("group").get<std::string>());
    std::array<std::vector<double>, 3> c{j.at("b1").get<std::vector<double>>(), j.at("b2").get<std::vector<double>>(),
                                         j.at("b3").get<std::vector<double>>()};
    try {
      return AlgebraField(std::move(mesh), g, std::move(c));
    } catch (const std::invalid_argument& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  });
}

void save_geodesics(const std::vector<Geodesic>& geos, const Metric& metric, double step,
                    const std::filesystem::path& path) {
  json j;
  j["version"] = kFormatVersion;
  j["metric"] = std::string(metric.name());
  j["step"] = step;
  j["mesh_hash"] = geos.empty() ? std::string() : geos.front().mesh_hash;
  auto& e = j["entries"] = json::array();
  for (const auto& g : geos) e.push_back({{"beta", g.entry.beta}, {"alpha", g.entry.alpha}, {"exit_time", g.exit_time}});
  write_text(path, j.dump() + "\n");
}

std::vector<Geodesic> load_geodesics(const std::filesystem::path& path, const Mesh& mesh) {
  const json j = parse_file(path);
  check_version(j, path);
  return guarded(path, [&] {
    const Metric metric = builtin_metric(j.at("metric").get<std::string>());
    const double step = j.at("step").get<double>();
    std::vector<FanBeamPoint> entries;
    std::vector<double> exits;
    for (const auto& e : j.at("entries")) {
      entries.push_back({e.at("beta").get<double>(), e.at("alpha").get<double>()});
      exits.push_back(e.at("exit_time").get<double>());
    }
    if (!entries.empty() && j.at("mesh_hash").get<std::string>() != mesh.hash())
      throw FormatError(path.string() + ": geodesics were traced on a different mesh");
    auto geos = shoot_geodesics(metric, mesh, entries, step);
    for (std::size_t i = 0; i < geos.size(); ++i)
      if (geos[i].exit_time != exits[i])
        throw FormatError(path.string() + ": recomputed exit time differs for entry " + std::to_string(i));
    return geos;
  });
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  json j;
  j["version"] = kFormatVersion;
  j["group"] = std::string(to_string(ds.group));
  j["sigma"] = ds.sigma;
  j["seed"] = ds.seed;
  auto& recs = j["records"] = json::array();
  for (const auto& r : ds.records) recs.push_back({{"beta", r.entry.beta}, {"alpha", r.entry.alpha}, {"y", r.y}});
  write_text(path, j.dump() + "\n");
}

Dataset load_dataset(const std::filesystem::path& path) {
  const json j = parse_file(path);
  check_version(j, path);
  return guarded(path, [&] {
    Dataset ds;
    ds.group = parse_group(j.at("group").get<std::string>());
    ds.sigma = j.at("sigma").get<double>();
    ds.seed = j.at("seed").get<std::uint64_t>();
    const std::size_t m = flat_size(ds.group);
    for (const auto& r : j.at("records")) {
      Record rec{{r.at("beta").get<double>(), r.at("alpha").get<double>()}, r.at("y").get<std::vector<double>>()};
      if (rec.y.size() != m)
        throw FormatError(path.string() + ": record has " + std::to_string(rec.y.size()) + " entries, expected " +
                          std::to_string(m));
      for (double v : rec.y)
        if (!std::isfinite(v)) throw FormatError(path.string() + ": non-finite observation");
      ds.records.push_back(std::move(rec));
    }
    return ds;
  });
}

}  // namespace naxray
