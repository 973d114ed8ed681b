#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace naxray {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resolved run configuration. Every field has a dotted config key, listed
/// next to it.
struct RunConfig {
  std::uint64_t seed = 1;                  // seed
  int mesh_nv = 886;                       // mesh.nv
  std::string mesh_file;                   // mesh.file (empty: generate)
  std::string metric = "paper-gaussian";   // metric.name
  double step = 1e-3;                      // forward.step
  std::string group = "su2";               // group
  std::string truth = "bumps";             // truth.name
  std::size_t n_data = 200;                // data.n
  double sigma = 0.05;                     // noise.sigma
  double nu = 3.0;                         // prior.nu
  double ell = 0.2;                        // prior.ell
  double jitter = 1e-10;                   // prior.jitter
  bool shrink = false;                     // prior.shrink
  double alpha = 2.0;                      // prior.alpha
  std::size_t steps = 20000;               // mcmc.steps
  std::optional<std::size_t> burn_in;      // mcmc.burn_in (unset: steps / 5)
  double delta = 2.5e-5;                   // mcmc.delta
  bool tune = false;                       // mcmc.tune
  double tune_target = 0.25;               // mcmc.tune_target
  std::size_t thin = 10;                   // mcmc.thin
  std::size_t chains = 1;                  // mcmc.chains
  std::size_t threads = 0;                 // threads (0: hardware default)

  std::size_t resolved_burn_in() const { return burn_in ? *burn_in : steps / 5; }
};

/// Sets one key from its textual value. Throws ConfigError for unknown keys
/// or unparsable values.
void set_key(RunConfig& cfg, std::string_view key, std::string_view value);

/// Applies "key = value" lines ('#' starts a comment) or, when the text
/// starts with '{', a JSON object whose nested objects map to dotted keys.
void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin = "<config>");
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Applies a "key=value" override.
void apply_override(RunConfig& cfg, std::string_view assignment);

/// Flat JSON object, keys sorted, burn-in resolved.
std::string to_json(const RunConfig& cfg);

}  // namespace naxray
