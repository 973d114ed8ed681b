#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "naxray/field.hpp"
#include "naxray/geometry.hpp"

namespace naxray {

struct Record {
  FanBeamPoint entry;
  /// Noisy matrix, flattened like ScatteringValue::u. Not constrained to the group.
  std::vector<double> y;

  bool operator==(const Record& o) const {
    return entry.beta == o.entry.beta && entry.alpha == o.entry.alpha && y == o.y;
  }
};

struct Dataset {
  Group group = Group::SU2;
  double sigma = 0;
  std::uint64_t seed = 0;
  std::vector<Record> records;

  bool operator==(const Dataset& o) const {
    return group == o.group && sigma == o.sigma && seed == o.seed && records == o.records;
  }
};

/// Y_i = U_truth(geo_i) + E_i with i.i.d. N(0, sigma^2) entries. For SU(2)
/// the real and imaginary parts of every entry get independent noise. One
/// sequential stream seeded by seed.
Dataset simulate(const AlgebraField& truth, std::span<const Geodesic> geos, double sigma, std::uint64_t seed);

std::vector<FanBeamPoint> entries_of(const Dataset& ds);

/// JSON {version, group, sigma, seed, records: [{beta, alpha, y}]}; doubles
/// are written in shortest round-trip form, so save/load is bit exact.
void save_dataset(const Dataset& ds, const std::filesystem::path& path);
/// Throws FormatError on parse failure or version/shape mismatch.
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace naxray
