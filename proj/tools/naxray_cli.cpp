// naxray: batch pipeline for synthetic non-Abelian X-ray tomography.
//
//   naxray mesh|truth|forward|simulate|sample|eval|export [options]
//
// Artifacts go to --out (default ./run): run.json, mesh.json, truth.json,
// geodesics.json, data.json, forward.csv, chain/{report.json, mean.json,
// trace.csv}, eval.json, plots/*.csv.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "naxray/config.hpp"
#include "naxray/data.hpp"
#include "naxray/eval.hpp"
#include "naxray/field.hpp"
#include "naxray/forward.hpp"
#include "naxray/geometry.hpp"
#include "naxray/io.hpp"
#include "naxray/mcmc.hpp"
#include "naxray/mesh.hpp"
#include "naxray/parallel.hpp"
#include "naxray/prior.hpp"
#include "naxray/rng.hpp"

namespace fs = std::filesystem;
using namespace naxray;
using nlohmann::json;

namespace {

/// Missing or inconsistent input artifacts; maps to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string out = "run";
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> truth;
  std::optional<double> sigma;
  std::optional<std::size_t> n;
  std::optional<double> step;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> burn_in;
  bool no_burn_in = false;
  std::optional<double> delta;
  bool tune = false;
  std::optional<std::size_t> chains;
  std::optional<std::size_t> thin;
  std::string estimate;
};

RunConfig resolve(const Options& o) {
  RunConfig cfg;
  if (!o.config.empty()) apply_config_file(cfg, o.config);
  for (const auto& s : o.sets) apply_override(cfg, s);
  auto put = [&](const char* key, const auto& v) {
    if (v) {
      std::ostringstream ss;
      ss.precision(17);
      ss << *v;
      set_key(cfg, key, ss.str());
    }
  };
  put("seed", o.seed);
  put("threads", o.threads);
  put("truth.name", o.truth);
  put("noise.sigma", o.sigma);
  put("data.n", o.n);
  put("forward.step", o.step);
  put("mcmc.steps", o.steps);
  put("mcmc.burn_in", o.burn_in);
  put("mcmc.delta", o.delta);
  put("mcmc.chains", o.chains);
  put("mcmc.thin", o.thin);
  if (o.no_burn_in) cfg.burn_in = 0;
  if (o.tune) cfg.tune = true;
  return cfg;
}

struct Context {
  RunConfig cfg;
  fs::path out;
};

Context start(const Options& o) {
  Context c{resolve(o), fs::path(o.out)};
  parallel::set_num_threads(c.cfg.threads);
  fs::create_directories(c.out);
  write_text(c.out / "run.json", to_json(c.cfg));
  return c;
}

void need(const fs::path& p, const char* producer) {
  if (!fs::exists(p)) throw DataError("missing " + p.string() + " (run `naxray " + producer + "` first)");
}

std::shared_ptr<const Mesh> build_mesh(const RunConfig& cfg) {
  if (!cfg.mesh_file.empty()) return std::make_shared<const Mesh>(load_mesh(cfg.mesh_file));
  return std::make_shared<const Mesh>(generate_disk_mesh(cfg.mesh_nv, derive_seed(cfg.seed, Stream::kMesh)));
}

/// The mesh artifact of the output directory, created from the config when absent.
std::shared_ptr<const Mesh> ensure_mesh(const Context& c) {
  const auto path = c.out / "mesh.json";
  if (fs::exists(path)) {
    auto m = std::make_shared<const Mesh>(load_mesh(path));
    if (!c.cfg.mesh_file.empty()) {
      const Mesh wanted = load_mesh(c.cfg.mesh_file);
      if (wanted.hash() != m->hash())
        throw DataError("mesh.file " + c.cfg.mesh_file + " does not match " + path.string());
    }
    return m;
  }
  auto m = build_mesh(c.cfg);
  save_mesh(*m, path);
  std::cerr << "mesh: " << m->num_vertices() << " vertices, hash " << m->hash() << "\n";
  return m;
}

AlgebraField make_truth(const Context& c, std::shared_ptr<const Mesh> mesh) {
  AlgebraField t = builtin_truth(c.cfg.truth, std::move(mesh), parse_group(c.cfg.group));
  save_field(t, c.out / "truth.json");
  return t;
}

std::vector<Geodesic> make_design(const Context& c, const Mesh& mesh, const Metric& metric) {
  const auto entries = sample_fanbeam(c.cfg.n_data, derive_seed(c.cfg.seed, Stream::kDesign));
  auto geos = shoot_geodesics(metric, mesh, entries, c.cfg.step);
  save_geodesics(geos, metric, c.cfg.step, c.out / "geodesics.json");
  return geos;
}

int cmd_mesh(const Options& o) {
  const Context c = start(o);
  const auto m = build_mesh(c.cfg);
  save_mesh(*m, c.out / "mesh.json");
  std::cerr << "mesh: " << m->num_vertices() << " vertices, " << m->triangles().size() << " triangles, hash "
            << m->hash() << "\n";
  return 0;
}

int cmd_truth(const Options& o) {
  const Context c = start(o);
  make_truth(c, ensure_mesh(c));
  return 0;
}

int cmd_forward(const Options& o) {
  const Context c = start(o);
  const auto mesh = ensure_mesh(c);
  const AlgebraField truth = make_truth(c, mesh);
  const auto geos = make_design(c, *mesh, builtin_metric(c.cfg.metric));
  const std::size_t m = flat_size(truth.group());
  std::vector<double> u(geos.size() * m);
  scattering_batch_flat(truth, geos, u);
  std::ostringstream csv;
  csv << "beta,alpha";
  for (std::size_t k = 0; k < m; ++k) csv << ",u" << k;
  csv << "\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    csv << buf;
  };
  for (std::size_t i = 0; i < geos.size(); ++i) {
    put(geos[i].entry.beta);
    csv << ",";
    put(geos[i].entry.alpha);
    for (std::size_t k = 0; k < m; ++k) {
      csv << ",";
      put(u[i * m + k]);
    }
    csv << "\n";
  }
  write_text(c.out / "forward.csv", csv.str());
  return 0;
}

int cmd_simulate(const Options& o) {
  const Context c = start(o);
  const auto mesh = ensure_mesh(c);
  const AlgebraField truth = make_truth(c, mesh);
  const auto geos = make_design(c, *mesh, builtin_metric(c.cfg.metric));
  const Dataset ds = simulate(truth, geos, c.cfg.sigma, derive_seed(c.cfg.seed, Stream::kNoise));
  save_dataset(ds, c.out / "data.json");
  std::cerr << "simulate: " << ds.records.size() << " records, sigma " << ds.sigma << "\n";
  return 0;
}

json report_json(const ChainReport& r) {
  return {{"seed", r.seed},
          {"n_steps", r.n_steps},
          {"burn_in", r.burn_in},
          {"delta_used", r.delta_used},
          {"acceptance_rate", r.acceptance_rate},
          {"final_window_acceptance", r.final_window_acceptance},
          {"window_acceptance", r.window_acceptance}};
}

int cmd_sample(const Options& o) {
  const Context c = start(o);
  for (const char* f : {"mesh.json", "data.json", "geodesics.json"}) need(c.out / f, "simulate");
  const auto mesh = std::make_shared<const Mesh>(load_mesh(c.out / "mesh.json"));
  const Dataset ds = load_dataset(c.out / "data.json");
  const auto geos = load_geodesics(c.out / "geodesics.json", *mesh);
  if (geos.size() != ds.records.size()) throw DataError("geodesics.json and data.json disagree in length");

  const MaternParams mp{c.cfg.nu, c.cfg.ell, c.cfg.jitter};
  const double scale = c.cfg.shrink ? shrinkage_scale(c.cfg.alpha, static_cast<double>(ds.records.size())) : 1.0;
  const PriorSampler prior = build_sampler(mesh, mp, scale);

  ChainConfig cc;
  cc.delta = c.cfg.delta;
  cc.n_steps = c.cfg.steps;
  cc.burn_in = c.cfg.resolved_burn_in();
  cc.tune = c.cfg.tune;
  cc.tune_target = c.cfg.tune_target;
  cc.thin = c.cfg.thin;
  cc.seed = c.cfg.seed;
  try {
    validate(cc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const auto loglik = make_log_likelihood(ds, geos);
  const AlgebraField init(mesh, ds.group);
  const MultiChainReport mr = run_chains(cc, c.cfg.chains, prior, loglik, init);

  const fs::path dir = c.out / "chain";
  json rep;
  rep["version"] = kFormatVersion;
  rep["n_records"] = ds.records.size();
  rep["prior_scale"] = scale;
  rep["prior_jitter"] = prior.jitter();
  rep["chains"] = json::array();
  std::ostringstream trace;
  trace << "chain,step,loglik\n";
  char buf[32];
  for (std::size_t k = 0; k < mr.chains.size(); ++k) {
    const auto& r = mr.chains[k];
    rep["chains"].push_back(report_json(r));
    if (mr.chains.size() > 1) save_field(r.posterior_mean, dir / ("mean_" + std::to_string(k) + ".json"));
    for (const auto& [step, l] : r.loglik_trace) {
      std::snprintf(buf, sizeof(buf), "%.17g", l);
      trace << k << "," << step << "," << buf << "\n";
    }
    std::cerr << "chain " << k << ": acceptance " << r.acceptance_rate << ", delta " << r.delta_used << "\n";
  }
  save_field(mr.pooled_mean, dir / "mean.json");
  write_text(dir / "report.json", rep.dump(2) + "\n");
  write_text(dir / "trace.csv", trace.str());
  return 0;
}

int cmd_eval(const Options& o) {
  const Context c = start(o);
  need(c.out / "mesh.json", "mesh");
  need(c.out / "truth.json", "truth");
  const fs::path est = o.estimate.empty() ? c.out / "chain" / "mean.json" : fs::path(o.estimate);
  need(est, "sample");
  // L^2 norms are taken with the Riemannian area element of the configured metric.
  const auto mesh =
      std::make_shared<const Mesh>(metric_weighted(load_mesh(c.out / "mesh.json"), builtin_metric(c.cfg.metric)));
  const AlgebraField truth = load_field(c.out / "truth.json", mesh);
  const AlgebraField f = load_field(est, mesh);
  if (f.group() != truth.group()) throw DataError("estimate and truth groups differ");

  json r;
  r["l2_error"] = l2_error(f, truth);
  const double rel = rel_l2_error(f, truth);
  r["rel_l2_error"] = std::isfinite(rel) ? json(rel) : json(nullptr);
  std::vector<Geodesic> geos;
  double sigma = c.cfg.sigma;
  if (fs::exists(c.out / "geodesics.json")) geos = load_geodesics(c.out / "geodesics.json", *mesh);
  if (fs::exists(c.out / "data.json")) sigma = load_dataset(c.out / "data.json").sigma;
  r["n_geodesics"] = geos.size();
  r["hellinger_sq"] = sigma > 0 ? json(hellinger_sq(hellinger_affinity(f, truth, geos, sigma))) : json(nullptr);
  const std::string text = r.dump() + "\n";
  write_text(c.out / "eval.json", text);
  std::cout << text;
  return 0;
}

int cmd_export(const Options& o) {
  const Context c = start(o);
  need(c.out / "mesh.json", "mesh");
  const auto mesh = std::make_shared<const Mesh>(load_mesh(c.out / "mesh.json"));
  std::optional<AlgebraField> truth, mean;
  if (fs::exists(c.out / "truth.json")) truth = load_field(c.out / "truth.json", mesh);
  if (fs::exists(c.out / "chain" / "mean.json")) mean = load_field(c.out / "chain" / "mean.json", mesh);
  if (!truth && !mean) throw DataError("nothing to export: no truth.json or chain/mean.json in " + c.out.string());
  const fs::path dir = c.out / "plots";
  std::vector<NamedField> both;
  if (truth) {
    const NamedField nf{"truth", &*truth};
    export_plot_data(*mesh, std::span(&nf, 1), dir / "truth.csv");
    both.push_back(nf);
  }
  if (mean) {
    const NamedField nf{"mean", &*mean};
    export_plot_data(*mesh, std::span(&nf, 1), dir / "mean.csv");
    both.push_back(nf);
  }
  if (both.size() == 2) export_plot_data(*mesh, both, dir / "compare.csv");
  return 0;
}

void common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "key=value or JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--set", o.sets, "config override key=value (repeatable)");
  sub->add_option("--seed", o.seed, "top-level seed");
  sub->add_option("--threads", o.threads, "worker threads (0: hardware default)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"naxray: Bayesian non-Abelian X-ray tomography on the unit disk"};
  app.require_subcommand(1);
  Options o;

  auto* mesh = app.add_subcommand("mesh", "generate the disk mesh");
  auto* truth = app.add_subcommand("truth", "write a built-in truth field");
  auto* forward = app.add_subcommand("forward", "noiseless scattering data as CSV");
  auto* sim = app.add_subcommand("simulate", "synthetic noisy dataset");
  auto* sample = app.add_subcommand("sample", "pCN posterior sampling");
  auto* eval = app.add_subcommand("eval", "compare an estimate against the truth");
  auto* exp = app.add_subcommand("export", "plot CSVs of truth and posterior mean");
  for (auto* s : {mesh, truth, forward, sim, sample, eval, exp}) common(s, o);
  for (auto* s : {truth, forward, sim}) s->add_option("--truth", o.truth, "built-in truth: zero or bumps");
  for (auto* s : {forward, sim}) {
    s->add_option("--n", o.n, "number of geodesics");
    s->add_option("--step", o.step, "geodesic step h");
  }
  sim->add_option("--sigma", o.sigma, "noise standard deviation");
  sample->add_option("--steps", o.steps, "chain length");
  auto* bi = sample->add_option("--burn-in", o.burn_in, "discarded initial steps (default steps/5)");
  sample->add_flag("--no-burn-in", o.no_burn_in, "average from the first step")->excludes(bi);
  sample->add_option("--delta", o.delta, "pCN step size");
  sample->add_flag("--tune", o.tune, "tune delta during burn-in");
  sample->add_option("--chains", o.chains, "independent chains");
  sample->add_option("--thin", o.thin, "trace decimation");
  eval->add_option("--estimate", o.estimate, "field file to evaluate (default chain/mean.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*mesh) return cmd_mesh(o);
    if (*truth) return cmd_truth(o);
    if (*forward) return cmd_forward(o);
    if (*sim) return cmd_simulate(o);
    if (*sample) return cmd_sample(o);
    if (*eval) return cmd_eval(o);
    if (*exp) return cmd_export(o);
  } catch (const ConfigError& e) {
    std::cerr << "naxray: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "naxray: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
