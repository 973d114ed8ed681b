#include "naxray/eval.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "naxray/forward.hpp"
#include "naxray/io.hpp"

namespace naxray {

double l2_error(const AlgebraField& f, const AlgebraField& truth) { return field_l2_distance(f, truth); }

double rel_l2_error(const AlgebraField& f, const AlgebraField& truth) {
  const double e = l2_error(f, truth);
  const double n = field_l2_norm(truth);
  if (n == 0) return e == 0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  return e / n;
}

namespace {

std::vector<double> pair_sq_dists(const AlgebraField& f, const AlgebraField& g, std::span<const Geodesic> geos) {
  require_compatible(f, g);
  const std::size_t m = flat_size(f.group());
  std::vector<double> uf(geos.size() * m), ug(geos.size() * m);
  scattering_batch_flat(f, geos, uf);
  scattering_batch_flat(g, geos, ug);
  std::vector<double> d2(geos.size());
  for (std::size_t i = 0; i < geos.size(); ++i) {
    double s = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const double d = uf[i * m + k] - ug[i * m + k];
      s += d * d;
    }
    d2[i] = s;
  }
  return d2;
}

}  // namespace

double hellinger_affinity(const AlgebraField& f, const AlgebraField& g, std::span<const Geodesic> geos,
                          double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("hellinger_affinity: sigma must be positive");
  if (geos.empty()) return 1.0;
  double s = 0;
  for (double d2 : pair_sq_dists(f, g, geos)) s += std::exp(-d2 / (8.0 * sigma * sigma));
  return s / static_cast<double>(geos.size());
}

double scattering_l2_sq(const AlgebraField& f, const AlgebraField& g, std::span<const Geodesic> geos) {
  if (geos.empty()) return 0.0;
  double s = 0;
  for (double d2 : pair_sq_dists(f, g, geos)) s += d2;
  return s / static_cast<double>(geos.size());
}

void export_plot_data(const Mesh& mesh, std::span<const NamedField> fields, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "x,y";
  for (const auto& nf : fields) {
    if (nf.field->size() != mesh.num_vertices() || nf.field->mesh().hash() != mesh.hash())
      throw std::invalid_argument("export_plot_data: field '" + nf.name + "' is not on this mesh");
    for (int k = 1; k <= 3; ++k) out << ",b" << k << (fields.size() > 1 ? "_" + nf.name : "");
  }
  out << "\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  const auto verts = mesh.vertices();
  for (std::size_t v = 0; v < verts.size(); ++v) {
    put(verts[v].x);
    out << ",";
    put(verts[v].y);
    for (const auto& nf : fields)
      for (int k = 0; k < 3; ++k) {
        out << ",";
        put(nf.field->component(k)[v]);
      }
    out << "\n";
  }
  write_text(path, out.str());
}

PlotTable read_plot_data(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  PlotTable t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty CSV");
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) t.columns.push_back(col);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != t.columns.size()) throw FormatError(path.string() + ": ragged CSV row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace naxray
