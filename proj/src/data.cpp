#include "naxray/data.hpp"

#include <stdexcept>

#include "naxray/forward.hpp"
#include "naxray/rng.hpp"

namespace naxray {

Dataset simulate(const AlgebraField& truth, std::span<const Geodesic> geos, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0)) throw std::invalid_argument("simulate: sigma must be non-negative");
  const std::size_t m = flat_size(truth.group());
  std::vector<double> clean(geos.size() * m);
  scattering_batch_flat(truth, geos, clean);

  Dataset ds;
  ds.group = truth.group();
  ds.sigma = sigma;
  ds.seed = seed;
  ds.records.reserve(geos.size());
  Rng rng(seed);
  for (std::size_t i = 0; i < geos.size(); ++i) {
    Record r{geos[i].entry, std::vector<double>(clean.begin() + i * m, clean.begin() + (i + 1) * m)};
    if (sigma > 0)
      for (auto& v : r.y) v += sigma * rng.normal();
    ds.records.push_back(std::move(r));
  }
  return ds;
}

std::vector<FanBeamPoint> entries_of(const Dataset& ds) {
  std::vector<FanBeamPoint> out;
  out.reserve(ds.records.size());
  for (const auto& r : ds.records) out.push_back(r.entry);
  return out;
}

}  // namespace naxray
