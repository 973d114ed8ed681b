#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "naxray/data.hpp"
#include "naxray/field.hpp"
#include "naxray/geometry.hpp"
#include "naxray/prior.hpp"
#include "naxray/rng.hpp"

namespace naxray {

/// -1/(2 sigma^2) sum_i ||Y_i - U_f(geo_i)||_F^2. geos must be aligned 1-1
/// with ds.records (same entries, same order).
double log_likelihood(const AlgebraField& f, const Dataset& ds, std::span<const Geodesic> geos);

using LogLikelihoodFn = std::function<double(const AlgebraField&)>;

/// Binds a dataset and its geodesics, checking alignment once.
LogLikelihoodFn make_log_likelihood(const Dataset& ds, std::span<const Geodesic> geos);

struct ChainConfig {
  double delta = 2.5e-5;
  std::size_t n_steps = 1000;
  std::size_t burn_in = 0;
  bool tune = false;
  double tune_target = 0.25;
  std::size_t tune_window = 200;
  std::uint64_t seed = 0;
  /// Log-likelihood trace is recorded every `thin` steps.
  std::size_t thin = 10;
  /// When nonzero, the cached log-likelihood is recomputed from scratch every
  /// revalidate_every steps and must agree to 1e-9 relative.
  std::size_t revalidate_every = 0;
};

void validate(const ChainConfig& cfg);

struct ChainState {
  AlgebraField current;
  double current_loglik = 0;
  std::array<std::vector<double>, 3> mean_sum;
  std::size_t n_accumulated = 0;
  std::size_t accepted = 0;
  std::size_t step_index = 0;
  Rng rng;
};

ChainState init_chain(AlgebraField init, const LogLikelihoodFn& loglik, std::uint64_t seed);

/// One pCN move: proposal sqrt(1-2 delta) current + sqrt(2 delta) Psi with
/// Psi drawn from the prior, accepted with probability
/// min(1, exp(l(proposal) - l(current))). Consumes exactly one prior draw and
/// one uniform. When accumulate is set, the post-step state is added to the
/// running mean. Returns whether the proposal was accepted.
bool pcn_step(ChainState& state, double delta, const PriorSampler& prior, const LogLikelihoodFn& loglik,
              bool accumulate);

struct ChainReport {
  AlgebraField posterior_mean;
  /// Fraction accepted over the post-burn-in steps (all steps if burn_in = 0).
  double acceptance_rate = 0;
  /// Acceptance over the last tune_window steps.
  double final_window_acceptance = 0;
  std::vector<double> window_acceptance;
  std::vector<std::pair<std::size_t, double>> loglik_trace;
  double delta_used = 0;
  std::size_t n_steps = 0;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;
};

/// Runs cfg.n_steps pCN steps from init; the posterior mean averages the
/// states after steps burn_in+1 .. n_steps. With cfg.tune, delta is multiplied
/// (windowed acceptance above target) or divided (below) by a factor every
/// tune_window burn-in steps, then frozen. The factor starts at 2 and is
/// square-rooted, down to 2^(1/16), whenever the direction reverses.
ChainReport run_chain(const ChainConfig& cfg, const PriorSampler& prior, const LogLikelihoodFn& loglik,
                      const AlgebraField& init);

struct MultiChainReport {
  std::vector<ChainReport> chains;
  AlgebraField pooled_mean;
};

/// k independent chains; chain c uses seed derive_seed(cfg.seed, Stream::kChainBase + c).
MultiChainReport run_chains(const ChainConfig& cfg, std::size_t k, const PriorSampler& prior,
                            const LogLikelihoodFn& loglik, const AlgebraField& init);

}  // namespace naxray
