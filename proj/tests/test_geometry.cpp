#include <doctest.h>

#include <cmath>
#include <numbers>

#include "naxray/geometry.hpp"
#include "naxray/rng.hpp"
#include "oracles.hpp"

using namespace naxray;
using std::numbers::pi;

namespace {

const Mesh& test_mesh() {
  static const Mesh m = generate_disk_mesh(886, 1);
  return m;
}

double wrap_alpha(double a) {
  while (a > pi) a -= 2 * pi;
  while (a < -pi) a += 2 * pi;
  return a;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("builtin metrics") {
    const Metric e = builtin_metric("euclidean");
    CHECK(e.lambda({0.5, 0.5}) == 0.0);
    CHECK(e.grad_lambda({0.5, 0.5}).x == 0.0);
    CHECK(e.grad_lambda({0.5, 0.5}).y == 0.0);
    const Metric g = builtin_metric("paper-gaussian");
    CHECK(g.lambda({0.3, 0}) == doctest::Approx(0.3 * (std::exp(-2.88) - 1)).epsilon(1e-14));
    for (double y : {-0.9, -0.3, 0.0, 0.2, 0.7}) CHECK(g.lambda({0, y}) == 0.0);
    CHECK(g.name() == "paper-gaussian");
    CHECK_THROWS_AS(builtin_metric("hyperbolic"), std::invalid_argument);
  }

  TEST_CASE("analytic gradient matches central differences") {
    const Metric g = builtin_metric("paper-gaussian");
    Rng rng(1);
    for (int k = 0; k < 100; ++k) {
      const Point2 p{rng.uniform() - 0.5, rng.uniform() - 0.5};
      const double eps = 1e-6;
      const double dx = (g.lambda({p.x + eps, p.y}) - g.lambda({p.x - eps, p.y})) / (2 * eps);
      const double dy = (g.lambda({p.x, p.y + eps}) - g.lambda({p.x, p.y - eps})) / (2 * eps);
      CHECK(g.grad_lambda(p).x == doctest::Approx(dx).epsilon(1e-7));
      CHECK(g.grad_lambda(p).y == doctest::Approx(dy).epsilon(1e-7));
    }
  }

  TEST_CASE("euclidean chords") {
    const Metric e = builtin_metric("euclidean");
    const double h = 1e-3;
    const Geodesic g0 = shoot_geodesic(e, test_mesh(), {0, 0}, h);
    CHECK(std::abs(g0.exit_time - 2) <= 2e-3);
    CHECK(g0.points.front().x == 1.0);
    CHECK(g0.points.back().x == doctest::Approx(-1).epsilon(1e-9));
    for (const auto& p : g0.points) CHECK(std::abs(p.y) < 1e-12);
    const Geodesic g1 = shoot_geodesic(e, test_mesh(), {pi / 2, pi / 4}, h);
    CHECK(std::abs(g1.exit_time - std::sqrt(2.0)) <= 2e-3);
  }

  TEST_CASE("geodesic structure") {
    const Metric g = builtin_metric("paper-gaussian");
    const double h = 2e-3;
    Rng rng(2);
    double max_speed = 0;
    for (double x = -1; x <= 1; x += 0.01)
      for (double y = -1; y <= 1; y += 0.01) max_speed = std::max(max_speed, std::exp(-g.lambda({x, y})));
    for (int k = 0; k < 20; ++k) {
      const FanBeamPoint e{2 * pi * rng.uniform(), pi * (rng.uniform() - 0.5)};
      const Geodesic geo = shoot_geodesic(g, test_mesh(), e, h);
      CHECK(geo.points.front().x == std::cos(e.beta));
      CHECK(geo.points.front().y == std::sin(e.beta));
      CHECK(geo.angles.front() == e.beta + pi + e.alpha);
      CHECK(geo.locations.size() == geo.points.size());
      CHECK(geo.angles.size() == geo.points.size());
      CHECK(geo.num_segments() >= 4);
      CHECK(geo.mesh_hash == test_mesh().hash());
      const Point2 last = geo.points.back();
      CHECK(std::abs(std::hypot(last.x, last.y) - 1) < 1e-12);
      for (std::size_t j = 1; j < geo.points.size(); ++j) {
        const Point2 d = geo.points[j] - geo.points[j - 1];
        CHECK(std::sqrt(dot(d, d)) <= (1 + 1e-6) * geo.step * max_speed);
      }
      double len = 0;
      for (std::size_t j = 1; j <= geo.num_segments(); ++j) len += geo.segment_length(j);
      CHECK(len == doctest::Approx(geo.exit_time).epsilon(1e-12));
      CHECK(geo.segment_length(geo.num_segments()) > 0);
      CHECK(geo.segment_length(geo.num_segments()) <= geo.step * (1 + 1e-12));
    }
  }

  TEST_CASE("unit speed along the gaussian metric") {
    const Metric g = builtin_metric("paper-gaussian");
    const double h = 1e-3;
    const Geodesic geo = shoot_geodesic(g, test_mesh(), {0, 0}, h);
    double worst = 0;
    for (std::size_t j = 1; j + 1 < geo.points.size(); ++j) {
      const Point2 d = geo.points[j] - geo.points[j - 1];
      const Point2 mid = 0.5 * (geo.points[j] + geo.points[j - 1]);
      const double speed2 = dot(d, d) / (h * h);
      worst = std::max(worst, std::abs(std::exp(2 * g.lambda(mid)) * speed2 - 1));
    }
    CHECK(worst <= 1e-6);
  }

  TEST_CASE("exit time error is first order or better") {
    const Metric e = builtin_metric("euclidean");
    Rng rng(4);
    for (int k = 0; k < 20; ++k) {
      const FanBeamPoint fb{2 * pi * rng.uniform(), 0.98 * pi * (rng.uniform() - 0.5)};
      for (double h : {4e-3, 2e-3, 1e-3, 5e-4}) {
        const double err = std::abs(shoot_geodesic(e, test_mesh(), fb, h).exit_time - oracle::chord(fb.alpha));
        CHECK(err <= 2 * h);
      }
    }
  }

  TEST_CASE("reversing a geodesic retraces it") {
    Rng rng(5);
    for (const char* name : {"euclidean", "paper-gaussian"}) {
      const Metric m = builtin_metric(name);
      const double h = 1e-3;
      for (int k = 0; k < 10; ++k) {
        const FanBeamPoint fb{2 * pi * rng.uniform(), 0.9 * pi * (rng.uniform() - 0.5)};
        const Geodesic fwd = shoot_geodesic(m, test_mesh(), fb, h);
        const Point2 exit = fwd.points.back();
        const double beta = std::atan2(exit.y, exit.x);
        const double alpha = wrap_alpha(fwd.angles.back() - beta);
        const Geodesic back = shoot_geodesic(m, test_mesh(), {beta < 0 ? beta + 2 * pi : beta, alpha}, h);
        const Point2 end = back.points.back();
        CHECK(std::hypot(end.x - fwd.points.front().x, end.y - fwd.points.front().y) <= 10 * h);
        CHECK(back.exit_time == doctest::Approx(fwd.exit_time).epsilon(10 * h));
      }
    }
  }

  TEST_CASE("exit point depends continuously on alpha") {
    const Metric m = builtin_metric("paper-gaussian");
    Rng rng(6);
    for (int k = 0; k < 20; ++k) {
      const FanBeamPoint fb{2 * pi * rng.uniform(), 0.9 * pi * (rng.uniform() - 0.5)};
      const Point2 a = shoot_geodesic(m, test_mesh(), fb, 1e-3).points.back();
      const Point2 b = shoot_geodesic(m, test_mesh(), {fb.beta, fb.alpha + 1e-6}, 1e-3).points.back();
      CHECK(std::hypot(a.x - b.x, a.y - b.y) <= 1e-4);
    }
  }

  TEST_CASE("step size validation") {
    const Metric e = builtin_metric("euclidean");
    CHECK_THROWS_AS(shoot_geodesic(e, test_mesh(), {0, 0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(shoot_geodesic(e, test_mesh(), {0, 0}, 0.06), std::invalid_argument);
  }

  TEST_CASE("grazing entries still give a usable trace") {
    const Metric m = builtin_metric("paper-gaussian");
    for (double a : {pi / 2 - 1e-3, -(pi / 2 - 1e-4), pi / 2 - 1e-7}) {
      const Geodesic geo = shoot_geodesic(m, test_mesh(), {1.0, a}, 1e-3);
      CHECK(geo.num_segments() >= 4);
      CHECK(geo.exit_time > 0);
    }
  }

  TEST_CASE("fan-beam sampling") {
    CHECK(sample_fanbeam(0, 1).empty());
    const auto s = sample_fanbeam(100000, 3);
    double mean = 0;
    for (const auto& p : s) {
      CHECK((p.beta > 0 && p.beta < 2 * pi));
      CHECK((p.alpha > -pi / 2 && p.alpha < pi / 2));
      mean += p.alpha;
    }
    mean /= static_cast<double>(s.size());
    CHECK(std::abs(mean) <= 3 * (pi / std::sqrt(12.0)) / std::sqrt(1e5));
    const auto a = sample_fanbeam(10, 9), b = sample_fanbeam(10, 9);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(a[i].beta == b[i].beta);
      CHECK(a[i].alpha == b[i].alpha);
    }
  }

  TEST_CASE("parallel shooting matches the serial reference") {
    const Metric m = builtin_metric("paper-gaussian");
    const auto entries = sample_fanbeam(64, 2);
    const auto par = shoot_geodesics(m, test_mesh(), entries, 2e-3);
    const auto ser = shoot_geodesics_serial(m, test_mesh(), entries, 2e-3);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].exit_time == ser[i].exit_time);
      CHECK(par[i].points.size() == ser[i].points.size());
    }
  }

  TEST_CASE("metric-weighted lumped weights") {
    const Metric g = builtin_metric("paper-gaussian");
    const Mesh w = metric_weighted(test_mesh(), g);
    double base = 0, weighted = 0;
    for (std::size_t v = 0; v < test_mesh().num_vertices(); ++v) {
      base += test_mesh().lumped_weights()[v];
      weighted += w.lumped_weights()[v];
    }
    // The metric is odd in x, so its area element is close to, but not exactly, the Euclidean one.
    CHECK(weighted == doctest::Approx(base).epsilon(0.05));
    CHECK(weighted != base);
  }
}
