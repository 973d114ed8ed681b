#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "naxray/eval.hpp"
#include "naxray/forward.hpp"
#include "naxray/prior.hpp"

using namespace naxray;
namespace fs = std::filesystem;

namespace {

std::shared_ptr<const Mesh> mesh300() {
  static const auto m = std::make_shared<const Mesh>(generate_disk_mesh(300, 1));
  return m;
}

const PriorSampler& prior300() {
  static const PriorSampler s = build_sampler(mesh300(), MaternParams{});
  return s;
}

const std::vector<Geodesic>& geos100() {
  static const auto g = shoot_geodesics(builtin_metric("paper-gaussian"), *mesh300(), sample_fanbeam(100, 5), 5e-3);
  return g;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "naxray_test_eval";
  fs::create_directories(dir);
  return dir / name;
}

// Bhattacharyya coefficient of N(a, s^2) and N(b, s^2) by trapezoidal quadrature.
double gaussian_overlap(double a, double b, double s) {
  const double lo = std::min(a, b) - 12 * s, hi = std::max(a, b) + 12 * s;
  const int n = 4000;
  const double dx = (hi - lo) / n;
  double sum = 0;
  for (int i = 0; i <= n; ++i) {
    const double y = lo + i * dx;
    const double pa = std::exp(-(y - a) * (y - a) / (2 * s * s)), pb = std::exp(-(y - b) * (y - b) / (2 * s * s));
    sum += (i == 0 || i == n ? 0.5 : 1.0) * std::sqrt(pa * pb);
  }
  return sum * dx / (s * std::sqrt(2 * std::numbers::pi));
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("L2 error identities") {
    const AlgebraField t = builtin_truth("bumps", mesh300(), Group::SU2);
    const AlgebraField zero(mesh300(), Group::SU2);
    CHECK(l2_error(t, t) == 0.0);
    CHECK(l2_error(zero, t) == doctest::Approx(field_l2_norm(t)).epsilon(1e-15));
    CHECK(l2_error(scaled(2, t), t) == doctest::Approx(field_l2_norm(t)).epsilon(1e-15));
    CHECK(rel_l2_error(zero, t) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rel_l2_error(zero, zero) == 0.0);
    CHECK(std::isnan(rel_l2_error(t, zero)));
    CHECK_THROWS_AS(l2_error(t, AlgebraField(mesh300(), Group::SO3)), std::invalid_argument);
  }

  TEST_CASE("Hellinger affinity basics") {
    Rng rng(1);
    const AlgebraField f = prior300().sample_field(Group::SU2, rng), g = prior300().sample_field(Group::SU2, rng);
    CHECK(hellinger_affinity(f, f, geos100(), 0.05) == 1.0);
    const double rho = hellinger_affinity(f, g, geos100(), 1.0);
    CHECK(rho > 0);
    CHECK(rho <= 1);
    CHECK(hellinger_sq(rho) >= 0);
    CHECK(hellinger_affinity(g, f, geos100(), 1.0) == rho);
    CHECK_THROWS_AS(hellinger_affinity(f, g, geos100(), 0.0), std::invalid_argument);
  }

  TEST_CASE("closed form matches a direct Gaussian integral") {
    Rng rng(2);
    const AlgebraField f = prior300().sample_field(Group::SU2, rng), g = prior300().sample_field(Group::SU2, rng);
    for (std::size_t i = 0; i < 5; ++i) {
      const std::span<const Geodesic> one(&geos100()[i], 1);
      const auto uf = scattering(f, geos100()[i]), ug = scattering(g, geos100()[i]);
      double direct = 1;
      for (std::size_t k = 0; k < uf.size(); ++k) direct *= gaussian_overlap(uf[k], ug[k], 1.0);
      CHECK(hellinger_affinity(f, g, one, 1.0) == doctest::Approx(direct).epsilon(1e-9));
    }
  }

  TEST_CASE("Hellinger sandwich and monotonicity") {
    Rng rng(3);
    std::vector<double> lower;
    for (int k = 0; k < 10; ++k) {
      const AlgebraField f = prior300().sample_field(Group::SU2, rng), g = prior300().sample_field(Group::SU2, rng);
      const double h2 = hellinger_sq(hellinger_affinity(f, g, geos100(), 1.0));
      const double d2 = scattering_l2_sq(f, g, geos100());
      CHECK(h2 >= 0);
      CHECK(h2 <= d2 / 4 * (1 + 1e-12));
      lower.push_back(d2 / h2);
      const AlgebraField half = combine(0.5, f, 0.5, g);
      CHECK(hellinger_affinity(f, half, geos100(), 1.0) > hellinger_affinity(f, g, geos100(), 1.0));
    }
    // On bounded group-valued data the ratio stays between 4 and a moderate constant.
    for (double c : lower) {
      CHECK(c >= 4 * (1 - 1e-12));
      CHECK(c <= 16);
    }
  }

  TEST_CASE("plot export") {
    const AlgebraField zero(mesh300(), Group::SU2);
    const NamedField z{"zero", &zero};
    export_plot_data(*mesh300(), std::span(&z, 1), scratch("zero.csv"));
    const PlotTable tz = read_plot_data(scratch("zero.csv"));
    CHECK(tz.columns == std::vector<std::string>{"x", "y", "b1", "b2", "b3"});
    REQUIRE(tz.rows.size() == mesh300()->num_vertices());
    for (const auto& r : tz.rows)
      for (int k = 2; k < 5; ++k) CHECK(r[k] == 0.0);

    Rng rng(4);
    const AlgebraField f = prior300().sample_field(Group::SU2, rng), g = prior300().sample_field(Group::SU2, rng);
    const std::vector<NamedField> two{{"a", &f}, {"b", &g}};
    export_plot_data(*mesh300(), two, scratch("two.csv"));
    const PlotTable t = read_plot_data(scratch("two.csv"));
    CHECK(t.columns == std::vector<std::string>{"x", "y", "b1_a", "b2_a", "b3_a", "b1_b", "b2_b", "b3_b"});
    for (std::size_t v = 0; v < t.rows.size(); ++v) {
      CHECK(t.rows[v][0] == mesh300()->vertices()[v].x);
      CHECK(t.rows[v][1] == mesh300()->vertices()[v].y);
      for (int k = 0; k < 3; ++k) {
        CHECK(t.rows[v][2 + k] == f.component(k)[v]);
        CHECK(t.rows[v][5 + k] == g.component(k)[v]);
      }
    }
    const auto other = std::make_shared<const Mesh>(generate_disk_mesh(300, 9));
    const AlgebraField w(other, Group::SU2);
    const NamedField nw{"w", &w};
    CHECK_THROWS_AS(export_plot_data(*mesh300(), std::span(&nw, 1), scratch("bad.csv")), std::invalid_argument);
  }
}
