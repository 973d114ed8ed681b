#include "naxray/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "naxray/forward.hpp"

namespace naxray {

namespace {

const double kMinTuneFactor = std::pow(2.0, 1.0 / 16);

void check_alignment(const Dataset& ds, std::span<const Geodesic> geos) {
  if (ds.records.size() != geos.size())
    throw std::invalid_argument("log_likelihood: " + std::to_string(geos.size()) + " geodesics for " +
                                std::to_string(ds.records.size()) + " records");
  for (std::size_t i = 0; i < geos.size(); ++i)
    if (geos[i].entry.beta != ds.records[i].entry.beta || geos[i].entry.alpha != ds.records[i].entry.alpha)
      throw std::invalid_argument("log_likelihood: geodesic " + std::to_string(i) + " does not match its record");
  if (!ds.records.empty() && !(ds.sigma > 0))
    throw std::invalid_argument("log_likelihood: sigma must be positive");
}

double loglik_unchecked(const AlgebraField& f, const Dataset& ds, std::span<const Geodesic> geos) {
  if (ds.records.empty()) return 0.0;
  if (f.group() != ds.group) throw std::invalid_argument("log_likelihood: field and dataset groups differ");
  const std::size_t m = flat_size(f.group());
  std::vector<double> u(geos.size() * m);
  scattering_batch_flat(f, geos, u);
  // Summed serially in record order so the value is independent of threading.
  double ss = 0;
  for (std::size_t i = 0; i < geos.size(); ++i) {
    const auto& y = ds.records[i].y;
    for (std::size_t k = 0; k < m; ++k) {
      const double d = y[k] - u[i * m + k];
      ss += d * d;
    }
  }
  return -ss / (2.0 * ds.sigma * ds.sigma);
}

AlgebraField mean_of(const AlgebraField& like, const std::array<std::vector<double>, 3>& sum, std::size_t n) {
  auto c = sum;
  if (n > 0)
    for (auto& comp : c)
      for (auto& v : comp) v /= static_cast<double>(n);
  return AlgebraField(like.mesh_ptr(), like.group(), std::move(c));
}

}  // namespace

double log_likelihood(const AlgebraField& f, const Dataset& ds, std::span<const Geodesic> geos) {
  check_alignment(ds, geos);
  return loglik_unchecked(f, ds, geos);
}

LogLikelihoodFn make_log_likelihood(const Dataset& ds, std::span<const Geodesic> geos) {
  check_alignment(ds, geos);
  return [&ds, geos](const AlgebraField& f) { return loglik_unchecked(f, ds, geos); };
}

void validate(const ChainConfig& cfg) {
  if (!(cfg.delta > 0 && cfg.delta <= 0.5)) throw std::invalid_argument("pCN delta must lie in (0, 1/2]");
  if (cfg.n_steps == 0) throw std::invalid_argument("chain needs at least one step");
  if (cfg.burn_in >= cfg.n_steps) throw std::invalid_argument("burn-in must be shorter than the chain");
  if (cfg.tune_window == 0) throw std::invalid_argument("tune window must be positive");
  if (!(cfg.tune_target > 0 && cfg.tune_target < 1)) throw std::invalid_argument("tune target must lie in (0, 1)");
}

ChainState init_chain(AlgebraField init, const LogLikelihoodFn& loglik, std::uint64_t seed) {
  const double l = loglik(init);
  ChainState s{std::move(init), l, {}, 0, 0, 0, Rng(seed)};
  for (auto& c : s.mean_sum) c.assign(s.current.size(), 0.0);
  return s;
}

bool pcn_step(ChainState& state, double delta, const PriorSampler& prior, const LogLikelihoodFn& loglik,
              bool accumulate) {
  if (!(delta > 0 && delta <= 0.5)) throw std::invalid_argument("pCN delta must lie in (0, 1/2]");
  const AlgebraField psi = prior.sample_field(state.current.group(), state.rng);
  const double u = state.rng.uniform();
  const AlgebraField proposal = combine(std::sqrt(1.0 - 2.0 * delta), state.current, std::sqrt(2.0 * delta), psi);
  const double lp = loglik(proposal);
  const double diff = lp - state.current_loglik;
  const bool accept = diff >= 0 || u < std::exp(diff);
  if (accept) {
    state.current = proposal;
    state.current_loglik = lp;
    ++state.accepted;
  }
  ++state.step_index;
  if (accumulate) {
    for (int k = 0; k < 3; ++k) {
      auto& sum = state.mean_sum[k];
      const auto cur = state.current.component(k);
      for (std::size_t v = 0; v < sum.size(); ++v) sum[v] += cur[v];
    }
    ++state.n_accumulated;
  }
  return accept;
}

ChainReport run_chain(const ChainConfig& cfg, const PriorSampler& prior, const LogLikelihoodFn& loglik,
                      const AlgebraField& init) {
  validate(cfg);
  ChainState state = init_chain(init, loglik, cfg.seed);
  ChainReport report{mean_of(init, state.mean_sum, 0), 0, 0, {}, {}, 0, 0, 0, 0};
  double delta = cfg.delta;
  double factor = 2.0;
  int last_dir = 0;
  std::size_t window_acc = 0, window_len = 0, post_acc = 0;
  for (std::size_t n = 1; n <= cfg.n_steps; ++n) {
    const bool post = n > cfg.burn_in;
    const bool acc = pcn_step(state, delta, prior, loglik, post);
    if (acc) {
      ++window_acc;
      if (post) ++post_acc;
    }
    if (++window_len == cfg.tune_window) {
      const double rate = static_cast<double>(window_acc) / static_cast<double>(window_len);
      report.window_acceptance.push_back(rate);
      if (cfg.tune && n <= cfg.burn_in) {
        const int dir = rate > cfg.tune_target ? 1 : -1;
        if (last_dir != 0 && dir != last_dir) factor = std::max(std::sqrt(factor), kMinTuneFactor);
        last_dir = dir;
        delta = std::clamp(dir > 0 ? delta * factor : delta / factor, 1e-12, 0.5);
      }
      window_acc = window_len = 0;
    }
    if (cfg.thin > 0 && n % cfg.thin == 0) report.loglik_trace.emplace_back(n, state.current_loglik);
    if (cfg.revalidate_every > 0 && n % cfg.revalidate_every == 0) {
      const double fresh = loglik(state.current);
      const double scale = std::max(1.0, std::abs(fresh));
      if (std::abs(fresh - state.current_loglik) > 1e-9 * scale)
        throw std::logic_error("cached log-likelihood drifted at step " + std::to_string(n));
    }
  }
  const std::size_t n_post = cfg.n_steps - cfg.burn_in;
  report.posterior_mean = mean_of(init, state.mean_sum, state.n_accumulated);
  report.acceptance_rate = static_cast<double>(post_acc) / static_cast<double>(n_post);
  report.final_window_acceptance = report.window_acceptance.empty()
                                       ? report.acceptance_rate
                                       : report.window_acceptance.back();
  report.delta_used = delta;
  report.n_steps = cfg.n_steps;
  report.burn_in = cfg.burn_in;
  report.seed = cfg.seed;
  return report;
}

MultiChainReport run_chains(const ChainConfig& cfg, std::size_t k, const PriorSampler& prior,
                            const LogLikelihoodFn& loglik, const AlgebraField& init) {
  if (k == 0) throw std::invalid_argument("need at least one chain");
  MultiChainReport out{{}, AlgebraField(init.mesh_ptr(), init.group())};
  std::array<std::vector<double>, 3> sum;
  for (auto& c : sum) c.assign(init.size(), 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    ChainConfig cc = cfg;
    cc.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(Stream::kChainBase) + c);
    out.chains.push_back(run_chain(cc, prior, loglik, init));
    for (int j = 0; j < 3; ++j) {
      const auto m = out.chains.back().posterior_mean.component(j);
      for (std::size_t v = 0; v < m.size(); ++v) sum[j][v] += m[v];
    }
  }
  out.pooled_mean = mean_of(init, sum, k);
  return out;
}

}  // namespace naxray
