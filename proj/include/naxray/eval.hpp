#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "naxray/field.hpp"
#include "naxray/geometry.hpp"

namespace naxray {

double l2_error(const AlgebraField& f, const AlgebraField& truth);

/// l2_error / ||truth||; NaN when the truth is identically zero and f is not.
double rel_l2_error(const AlgebraField& f, const AlgebraField& truth);

/// Monte Carlo estimate over geos (drawn from the fan-beam law) of
///   rho = E exp(-||U_f - U_g||_F^2 / (8 sigma^2)).
/// The squared Hellinger distance of the observation laws is 2 (1 - rho).
double hellinger_affinity(const AlgebraField& f, const AlgebraField& g, std::span<const Geodesic> geos,
                          double sigma);
inline double hellinger_sq(double affinity) { return 2.0 * (1.0 - affinity); }

/// Monte Carlo estimate of ||C_f - C_g||^2_{L^2} = E ||U_f - U_g||_F^2 over geos.
double scattering_l2_sq(const AlgebraField& f, const AlgebraField& g, std::span<const Geodesic> geos);

struct NamedField {
  std::string name;
  const AlgebraField* field;
};

/// CSV with columns x, y and b1, b2, b3 per field, one row per vertex in
/// index order. A single field gets unsuffixed columns; several get
/// b1_<name>, b2_<name>, b3_<name>.
void export_plot_data(const Mesh& mesh, std::span<const NamedField> fields, const std::filesystem::path& path);

struct PlotTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

PlotTable read_plot_data(const std::filesystem::path& path);

}  // namespace naxray
