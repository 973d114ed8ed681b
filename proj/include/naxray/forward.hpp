#pragma once

#include <span>
#include <vector>

#include "naxray/field.hpp"
#include "naxray/geometry.hpp"
#include "naxray/liegroup.hpp"

namespace naxray {

/// Transported solution at the exit point of one geodesic, flattened
/// (see flat_size()).
struct ScatteringValue {
  FanBeamPoint entry;
  Group group = Group::SU2;
  std::vector<double> u;
};

/// Solves U' + Phi(gamma(t)) U = 0, U(0) = id along the geodesic with
///   U_j = exp(-len_j (Phi_{j-1} + Phi_j) / 2) U_{j-1},
/// where len_j is the segment arc length (the last one is partial). This is
/// the forward-in-time solution; the scattering data in the backward
/// convention is its adjoint, and the whole pipeline uses this convention.
template <class G>
typename G::Matrix transport(const AlgebraField& f, const Geodesic& geo) {
  auto u = G::identity();
  Vec3 prev = f.eval(geo.locations[0]);
  const std::size_t n = geo.num_segments();
  for (std::size_t j = 1; j <= n; ++j) {
    const Vec3 cur = f.eval(geo.locations[j]);
    const Vec3 mid{0.5 * (prev[0] + cur[0]), 0.5 * (prev[1] + cur[1]), 0.5 * (prev[2] + cur[2])};
    u = G::exp(mid, -geo.segment_length(j)) * u;
    prev = cur;
  }
  return u;
}

Mat2c scattering_su2(const AlgebraField& f, const Geodesic& geo);
Mat3 scattering_so3(const AlgebraField& f, const Geodesic& geo);

/// Group-dispatched transport written into out (flat_size(f.group()) reals).
void scattering(const AlgebraField& f, const Geodesic& geo, std::span<double> out);
std::vector<double> scattering(const AlgebraField& f, const Geodesic& geo);

/// OpenMP kernel: geodesic i is written to out[i*m, (i+1)*m), m = flat_size.
/// Slots are fixed, so results do not depend on the thread count.
void scattering_batch_flat(const AlgebraField& f, std::span<const Geodesic> geos, std::span<double> out);
/// Serial reference of scattering_batch_flat.
void scattering_batch_flat_serial(const AlgebraField& f, std::span<const Geodesic> geos,
                                  std::span<double> out);

std::vector<ScatteringValue> scattering_batch(const AlgebraField& f, std::span<const Geodesic> geos);
std::vector<ScatteringValue> scattering_batch_serial(const AlgebraField& f, std::span<const Geodesic> geos);

/// Compares both sides of C_f C_g^{-1} = id + I_Theta(f - g): W solves
///   W' + f W - W g = -(f - g),  W(0) = 0
/// by Heun's method on the same segments as the transport, and the result is
/// ||(U_f U_g^* - id) - W(exit)||_F.
double pseudo_linearization_residual(const AlgebraField& f, const AlgebraField& g, const Geodesic& geo);

/// Throws std::invalid_argument if geo was traced on a different mesh than f.
void require_same_mesh(const AlgebraField& f, const Geodesic& geo);

}  // namespace naxray
