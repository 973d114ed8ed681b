#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "naxray/forward.hpp"
#include "naxray/parallel.hpp"
#include "naxray/prior.hpp"
#include "oracles.hpp"

using namespace naxray;
using std::numbers::pi;

namespace {

std::shared_ptr<const Mesh> mesh886() {
  static const auto m = std::make_shared<const Mesh>(generate_disk_mesh(886, 1));
  return m;
}

const PriorSampler& prior886() {
  static const PriorSampler s = build_sampler(mesh886(), MaternParams{});
  return s;
}

AlgebraField constant(Group g, Vec3 b) {
  return from_function(mesh886(), g, [&](Point2) { return b; });
}

std::vector<Geodesic> random_geodesics(const char* metric, std::size_t n, std::uint64_t seed, double h) {
  return shoot_geodesics(builtin_metric(metric), *mesh886(), sample_fanbeam(n, seed), h);
}

double unitarity_drift(const std::vector<double>& flat, Group g) {
  if (g == Group::SU2) {
    const Mat2c u = unflatten_su2(flat);
    return frob_dist(adjoint(u) * u, Mat2c::identity());
  }
  const Mat3 u = unflatten_so3(flat);
  return frob_dist(adjoint(u) * u, Mat3::identity());
}

}  // namespace

TEST_SUITE("forward") {
  TEST_CASE("zero field gives the identity exactly") {
    for (const char* metric : {"euclidean", "paper-gaussian"}) {
      const auto geos = random_geodesics(metric, 50, 3, 2e-3);
      for (Group g : {Group::SU2, Group::SO3}) {
        const AlgebraField zero(mesh886(), g);
        for (const auto& geo : geos) {
          if (g == Group::SU2) CHECK(scattering_su2(zero, geo) == Mat2c::identity());
          else CHECK(scattering_so3(zero, geo) == Mat3::identity());
        }
      }
    }
  }

  TEST_CASE("constant diagonal field on a chord") {
    const Metric e = builtin_metric("euclidean");
    Rng rng(1);
    for (int k = 0; k < 10; ++k) {
      const double c = 4 * rng.normal();
      const FanBeamPoint fb{2 * pi * rng.uniform(), 0.9 * pi * (rng.uniform() - 0.5)};
      const Geodesic geo = shoot_geodesic(e, *mesh886(), fb, 1e-3);
      const double t = oracle::chord(fb.alpha);
      const auto u = oracle::from_lib(scattering_su2(constant(Group::SU2, {c, 0, 0}), geo));
      oracle::CMat want(2);
      want(0, 0) = std::exp(oracle::cd(0, -c * t / 2));
      want(1, 1) = std::exp(oracle::cd(0, c * t / 2));
      CHECK(oracle::frob_diff(u, want) / oracle::frob(want) <= 1e-5);
    }
  }

  TEST_CASE("constant sigma2 field across the diameter") {
    const Geodesic geo = shoot_geodesic(builtin_metric("euclidean"), *mesh886(), {0, 0}, 1e-3);
    const auto u = oracle::from_lib(scattering_su2(constant(Group::SU2, {0, 1, 0}), geo));
    const auto want = oracle::exp_series(-2.0 * oracle::su2(0, 1, 0), 30);
    CHECK(oracle::frob_diff(u, want) <= 1e-5);
    for (auto v : u.a) CHECK(std::abs(v.imag()) < 1e-15);
  }

  TEST_CASE("constant so3 field on a chord") {
    const Metric e = builtin_metric("euclidean");
    Rng rng(2);
    for (int k = 0; k < 10; ++k) {
      const Vec3 b{rng.normal(), rng.normal(), rng.normal()};
      const FanBeamPoint fb{2 * pi * rng.uniform(), 0.9 * pi * (rng.uniform() - 0.5)};
      const Geodesic geo = shoot_geodesic(e, *mesh886(), fb, 1e-3);
      const auto u = oracle::from_lib(scattering_so3(constant(Group::SO3, b), geo));
      const auto want = oracle::expm(-oracle::chord(fb.alpha) * oracle::so3(b[0], b[1], b[2]));
      CHECK(oracle::frob_diff(u, want) / oracle::frob(want) <= 1e-5);
    }
  }

  TEST_CASE("transport is second order on a curved metric") {
    // Reference at a much finer step; the geometry error is fourth order.
    Rng rng(3);
    const AlgebraField f = prior886().sample_field(Group::SU2, rng);
    const FanBeamPoint fb{1.0, 0.3};
    const Metric m = builtin_metric("paper-gaussian");
    const auto ref = scattering(f, shoot_geodesic(m, *mesh886(), fb, 1.25e-4));
    const double e1 = frob_dist(scattering(f, shoot_geodesic(m, *mesh886(), fb, 2e-3)), ref);
    const double e2 = frob_dist(scattering(f, shoot_geodesic(m, *mesh886(), fb, 1e-3)), ref);
    CHECK(e2 < e1);
    CHECK(e1 <= 1e-3);
  }

  TEST_CASE("unitarity drift on prior draws") {
    const auto geos = random_geodesics("paper-gaussian", 100, 4, 1e-3);
    Rng rng(4);
    for (Group g : {Group::SU2, Group::SO3}) {
      const AlgebraField f = prior886().sample_field(g, rng);
      for (const auto& v : scattering_batch(f, geos)) CHECK(unitarity_drift(v.u, g) <= 1e-8);
    }
  }

  TEST_CASE("batch wrappers") {
    const auto geos = random_geodesics("paper-gaussian", 40, 5, 2e-3);
    Rng rng(5);
    const AlgebraField f = prior886().sample_field(Group::SU2, rng);
    CHECK(scattering_batch(f, std::span<const Geodesic>()).empty());
    const auto one = scattering_batch(f, std::span(geos.data(), 1));
    REQUIRE(one.size() == 1);
    CHECK(one[0].u == scattering(f, geos[0]));
    CHECK(one[0].entry.beta == geos[0].entry.beta);
    const auto par = scattering_batch(f, geos), ser = scattering_batch_serial(f, geos);
    REQUIRE(par.size() == geos.size());
    for (std::size_t i = 0; i < geos.size(); ++i) CHECK(par[i].u == ser[i].u);
    std::vector<double> small(3);
    CHECK_THROWS_AS(scattering_batch_flat(f, geos, small), std::invalid_argument);
  }

  TEST_CASE("batch results do not depend on the thread count") {
    const auto geos = random_geodesics("paper-gaussian", 64, 6, 2e-3);
    Rng rng(6);
    const AlgebraField f = prior886().sample_field(Group::SO3, rng);
    std::vector<double> a(geos.size() * 9), b(geos.size() * 9), c(geos.size() * 9);
    parallel::set_num_threads(1);
    scattering_batch_flat(f, geos, a);
    parallel::set_num_threads(8);
    scattering_batch_flat(f, geos, b);
    parallel::set_num_threads(0);
    scattering_batch_flat_serial(f, geos, c);
    CHECK(a == b);
    CHECK(a == c);
  }

  TEST_CASE("geodesics from another mesh are rejected") {
    const auto other = std::make_shared<const Mesh>(generate_disk_mesh(200, 9));
    const Geodesic geo = shoot_geodesic(builtin_metric("euclidean"), *other, {0, 0}, 1e-2);
    CHECK_THROWS_AS(scattering(AlgebraField(mesh886(), Group::SU2), geo), std::invalid_argument);
  }

  TEST_CASE("pseudo-linearization identity") {
    const Metric m = builtin_metric("paper-gaussian");
    Rng rng(7);
    const AlgebraField f = prior886().sample_field(Group::SU2, rng);
    const AlgebraField g = prior886().sample_field(Group::SU2, rng);
    const AlgebraField zero(mesh886(), Group::SU2);
    const auto entries = sample_fanbeam(5, 7);
    for (const auto& e : entries) {
      const Geodesic g1 = shoot_geodesic(m, *mesh886(), e, 2e-3);
      const Geodesic g2 = shoot_geodesic(m, *mesh886(), e, 1e-3);
      CHECK(pseudo_linearization_residual(f, f, g1) <= 1e-12);
      const double z1 = pseudo_linearization_residual(f, zero, g1), z2 = pseudo_linearization_residual(f, zero, g2);
      CHECK(z2 <= 5 * 1e-3);
      CHECK(z2 < z1);
      const double r1 = pseudo_linearization_residual(f, g, g1), r2 = pseudo_linearization_residual(f, g, g2);
      CHECK(r2 < r1);
      CHECK(r2 <= 5e-3);
    }
  }

  TEST_CASE("forward map is Lipschitz with a stable constant") {
    const auto geos = random_geodesics("paper-gaussian", 200, 8, 2e-3);
    Rng rng(8);
    std::vector<double> ratios;
    for (int k = 0; k < 50; ++k) {
      const AlgebraField f = prior886().sample_field(Group::SU2, rng);
      const AlgebraField g = prior886().sample_field(Group::SU2, rng);
      double dphi = 0;
      for (std::size_t v = 0; v < f.size(); ++v) {
        Vec3 d;
        for (int c = 0; c < 3; ++c) d[c] = f.component(c)[v] - g.component(c)[v];
        dphi = std::max(dphi, frob_norm(realize_su2(d)));
      }
      double du = 0;
      const auto uf = scattering_batch(f, geos), ug = scattering_batch(g, geos);
      for (std::size_t i = 0; i < geos.size(); ++i) du = std::max(du, frob_dist(uf[i].u, ug[i].u));
      ratios.push_back(du / dphi);
    }
    const double c1 = *std::max_element(ratios.begin(), ratios.begin() + 25);
    const double c2 = *std::max_element(ratios.begin() + 25, ratios.end());
    CHECK(std::abs(c2 - c1) / c1 <= 0.2);
    // Continuum bound: ||U_f - U_g|| <= exit time * sup ||f - g||, and exit times stay below ~2.2 here.
    for (double r : ratios) CHECK(r <= 2.5);
  }
}
