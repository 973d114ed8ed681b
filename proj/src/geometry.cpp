#include "naxray/geometry.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "naxray/rng.hpp"

namespace naxray {

namespace {

constexpr double kTau = 0.25;
constexpr double kAmp = 0.3;
constexpr double kCenter = 0.3;
constexpr std::size_t kMinSegments = 4;

struct State {
  double x, y, theta;
};

State rhs(const Metric& m, const State& s) {
  const Point2 p{s.x, s.y};
  const double speed = std::exp(-m.lambda(p));
  const Point2 g = m.grad_lambda(p);
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  return {speed * c, speed * sn, speed * (-sn * g.x + c * g.y)};
}

State axpy(const State& s, double a, const State& k) {
  return {s.x + a * k.x, s.y + a * k.y, s.theta + a * k.theta};
}

State rk4(const Metric& m, const State& s, double h) {
  const State k1 = rhs(m, s);
  const State k2 = rhs(m, axpy(s, 0.5 * h, k1));
  const State k3 = rhs(m, axpy(s, 0.5 * h, k2));
  const State k4 = rhs(m, axpy(s, h, k3));
  return {s.x + h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
          s.y + h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
          s.theta + h / 6 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta)};
}

double level(const State& s) { return s.x * s.x + s.y * s.y - 1.0; }

// Integrates one geodesic at step h. Returns false when it exits in fewer
// than kMinSegments segments.
bool integrate(const Metric& metric, FanBeamPoint entry, double h, Geodesic& out) {
  out = Geodesic{};
  out.entry = entry;
  out.step = h;
  State s{std::cos(entry.beta), std::sin(entry.beta), entry.beta + std::numbers::pi + entry.alpha};
  out.points.push_back({s.x, s.y});
  out.angles.push_back(s.theta);

  const auto max_steps = static_cast<std::size_t>(10.0 * (2.0 / h));
  for (std::size_t j = 0;; ++j) {
    if (j > max_steps)
      throw NonExitingError("geodesic (beta=" + std::to_string(entry.beta) +
                            ", alpha=" + std::to_string(entry.alpha) + ") did not exit");
    const State next = rk4(metric, s, h);
    const double f1 = level(next);
    if (f1 >= 0.0) {
      if (j == 0) return false;
      const double f0 = level(s);
      const double frac = -f0 / (f1 - f0);
      State q = axpy(s, frac, {next.x - s.x, next.y - s.y, next.theta - s.theta});
      const double r = std::hypot(q.x, q.y);
      q.x /= r;
      q.y /= r;
      out.points.push_back({q.x, q.y});
      out.angles.push_back(q.theta);
      out.exit_time = h * (static_cast<double>(j) + frac);
      return out.num_segments() >= kMinSegments;
    }
    out.points.push_back({next.x, next.y});
    out.angles.push_back(next.theta);
    s = next;
  }
}

}  // namespace

std::string_view Metric::name() const {
  return kind_ == Kind::Euclidean ? "euclidean" : "paper-gaussian";
}

double Metric::lambda(Point2 p) const {
  if (kind_ == Kind::Euclidean) return 0.0;
  const double s = 2 * kTau * kTau;
  const double gp = std::exp(-((p.x + kCenter) * (p.x + kCenter) + p.y * p.y) / s);
  const double gm = std::exp(-((p.x - kCenter) * (p.x - kCenter) + p.y * p.y) / s);
  return kAmp * (gp - gm);
}

Point2 Metric::grad_lambda(Point2 p) const {
  if (kind_ == Kind::Euclidean) return {0.0, 0.0};
  const double t2 = kTau * kTau;
  const double s = 2 * t2;
  const double gp = std::exp(-((p.x + kCenter) * (p.x + kCenter) + p.y * p.y) / s);
  const double gm = std::exp(-((p.x - kCenter) * (p.x - kCenter) + p.y * p.y) / s);
  return {kAmp * (-(p.x + kCenter) / t2 * gp + (p.x - kCenter) / t2 * gm),
          kAmp * (-p.y / t2 * gp + p.y / t2 * gm)};
}

double Metric::area_density(Point2 p) const { return std::exp(2.0 * lambda(p)); }

Metric builtin_metric(std::string_view name) {
  if (name == "euclidean") return Metric(Metric::Kind::Euclidean);
  if (name == "paper-gaussian") return Metric(Metric::Kind::PaperGaussian);
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

Mesh metric_weighted(const Mesh& mesh, const Metric& metric) {
  return mesh.with_density([&metric](Point2 p) { return metric.area_density(p); });
}

Geodesic shoot_geodesic(const Metric& metric, const Mesh& mesh, FanBeamPoint entry, double h) {
  if (!(h > 0.0 && h <= 0.05)) throw std::invalid_argument("shoot_geodesic: step must lie in (0, 0.05]");
  Geodesic g;
  double step = h;
  for (int attempt = 0; !integrate(metric, entry, step, g); ++attempt) {
    if (attempt > 60) throw NonExitingError("geodesic chord too short to resolve");
    step *= 0.5;
  }
  g.mesh_hash = mesh.hash();
  Locator locator(mesh);
  g.locations.reserve(g.points.size());
  for (const auto& p : g.points) g.locations.push_back(locator.locate_or_clamp(p));
  return g;
}

std::vector<Geodesic> shoot_geodesics(const Metric& metric, const Mesh& mesh,
                                      std::span<const FanBeamPoint> entries, double h) {
  std::vector<Geodesic> out(entries.size());
  const auto n = static_cast<std::int64_t>(entries.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) out[i] = shoot_geodesic(metric, mesh, entries[i], h);
  return out;
}

std::vector<Geodesic> shoot_geodesics_serial(const Metric& metric, const Mesh& mesh,
                                             std::span<const FanBeamPoint> entries, double h) {
  std::vector<Geodesic> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(shoot_geodesic(metric, mesh, e, h));
  return out;
}

std::vector<FanBeamPoint> sample_fanbeam(std::size_t n, std::uint64_t seed) {
  constexpr double pi = std::numbers::pi;
  Rng rng(seed);
  std::vector<FanBeamPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double beta = 2 * pi * rng.uniform_open();
    const double alpha = pi * (rng.uniform_open() - 0.5);
    out.push_back({beta, alpha});
  }
  return out;
}

}  // namespace naxray
