#include "naxray/forward.hpp"

#include <cstdint>
#include <stdexcept>

namespace naxray {

void require_same_mesh(const AlgebraField& f, const Geodesic& geo) {
  if (geo.mesh_hash != f.mesh().hash())
    throw std::invalid_argument("geodesic was traced on mesh " + geo.mesh_hash + ", field lives on " +
                                f.mesh().hash());
}

Mat2c scattering_su2(const AlgebraField& f, const Geodesic& geo) { return transport<Su2>(f, geo); }
Mat3 scattering_so3(const AlgebraField& f, const Geodesic& geo) { return transport<So3>(f, geo); }

void scattering(const AlgebraField& f, const Geodesic& geo, std::span<double> out) {
  if (f.group() == Group::SU2)
    flatten(transport<Su2>(f, geo), out);
  else
    flatten(transport<So3>(f, geo), out);
}

std::vector<double> scattering(const AlgebraField& f, const Geodesic& geo) {
  require_same_mesh(f, geo);
  std::vector<double> out(flat_size(f.group()));
  scattering(f, geo, out);
  return out;
}

namespace {

void check_batch(const AlgebraField& f, std::span<const Geodesic> geos, std::span<double> out) {
  if (out.size() != geos.size() * flat_size(f.group()))
    throw std::invalid_argument("scattering_batch: output buffer has the wrong size");
  for (const auto& g : geos) require_same_mesh(f, g);
}

template <class G>
double pseudo_lin_impl(const AlgebraField& f, const AlgebraField& g, const Geodesic& geo) {
  using M = typename G::Matrix;
  const M id = G::identity();
  M w{};
  auto rhs = [](const M& phi, const M& psi, const M& w) { return (psi - phi) + (w * psi - phi * w); };
  M phi0 = G::realize(f.eval(geo.locations[0]));
  M psi0 = G::realize(g.eval(geo.locations[0]));
  for (std::size_t j = 1; j <= geo.num_segments(); ++j) {
    const double len = geo.segment_length(j);
    const M phi1 = G::realize(f.eval(geo.locations[j]));
    const M psi1 = G::realize(g.eval(geo.locations[j]));
    const M k1 = rhs(phi0, psi0, w);
    const M k2 = rhs(phi1, psi1, w + len * k1);
    w = w + (0.5 * len) * (k1 + k2);
    phi0 = phi1;
    psi0 = psi1;
  }
  const M uf = transport<G>(f, geo);
  const M ug = transport<G>(g, geo);
  return frob_norm((uf * adjoint(ug) - id) - w);
}

}  // namespace

void scattering_batch_flat(const AlgebraField& f, std::span<const Geodesic> geos, std::span<double> out) {
  check_batch(f, geos, out);
  const std::size_t m = flat_size(f.group());
  const auto n = static_cast<std::int64_t>(geos.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) scattering(f, geos[i], out.subspan(i * m, m));
}

void scattering_batch_flat_serial(const AlgebraField& f, std::span<const Geodesic> geos,
                                  std::span<double> out) {
  check_batch(f, geos, out);
  const std::size_t m = flat_size(f.group());
  for (std::size_t i = 0; i < geos.size(); ++i) scattering(f, geos[i], out.subspan(i * m, m));
}

namespace {
std::vector<ScatteringValue> to_values(const AlgebraField& f, std::span<const Geodesic> geos,
                                       const std::vector<double>& flat) {
  const std::size_t m = flat_size(f.group());
  std::vector<ScatteringValue> out;
  out.reserve(geos.size());
  for (std::size_t i = 0; i < geos.size(); ++i)
    out.push_back({geos[i].entry, f.group(), {flat.begin() + i * m, flat.begin() + (i + 1) * m}});
  return out;
}
}  // namespace

std::vector<ScatteringValue> scattering_batch(const AlgebraField& f, std::span<const Geodesic> geos) {
  std::vector<double> flat(geos.size() * flat_size(f.group()));
  scattering_batch_flat(f, geos, flat);
  return to_values(f, geos, flat);
}

std::vector<ScatteringValue> scattering_batch_serial(const AlgebraField& f, std::span<const Geodesic> geos) {
  std::vector<double> flat(geos.size() * flat_size(f.group()));
  scattering_batch_flat_serial(f, geos, flat);
  return to_values(f, geos, flat);
}

double pseudo_linearization_residual(const AlgebraField& f, const AlgebraField& g, const Geodesic& geo) {
  require_compatible(f, g);
  require_same_mesh(f, geo);
  return f.group() == Group::SU2 ? pseudo_lin_impl<Su2>(f, g, geo) : pseudo_lin_impl<So3>(f, g, geo);
}

}  // namespace naxray
