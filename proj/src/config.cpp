#include "naxray/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "naxray/io.hpp"

namespace naxray {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view what) {
  throw ConfigError("config key '" + std::string(key) + "': cannot parse '" + std::string(value) + "' as " +
                    std::string(what));
}

double as_double(std::string_view key, std::string_view v) {
  double x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x)) bad(key, v, "a real number");
  return x;
}

template <class T>
T as_unsigned(std::string_view key, std::string_view v) {
  T x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad(key, v, "a non-negative integer");
  return x;
}

bool as_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, v, "a boolean");
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  return std::string(v);
}

void apply_json(RunConfig& cfg, const nlohmann::json& j, const std::string& prefix) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (prefix.empty() && it.key() == "version") continue;
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object())
      apply_json(cfg, *it, key);
    else if (it->is_string())
      set_key(cfg, key, it->get<std::string>());
    else if (it->is_null())
      throw ConfigError("config key '" + key + "' is null");
    else
      set_key(cfg, key, it->dump());
  }
}

}  // namespace

void set_key(RunConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string value = unquote(trim(raw));
  const std::string_view v = value;
  if (key == "seed") cfg.seed = as_unsigned<std::uint64_t>(key, v);
  else if (key == "mesh.nv") {
    cfg.mesh_nv = as_unsigned<int>(key, v);
    if (cfg.mesh_nv < 4) throw ConfigError("mesh.nv must be at least 4");
  } else if (key == "mesh.file") cfg.mesh_file = value;
  else if (key == "metric.name") cfg.metric = value;
  else if (key == "forward.step") {
    cfg.step = as_double(key, v);
    if (!(cfg.step > 0 && cfg.step <= 0.05)) throw ConfigError("forward.step must lie in (0, 0.05]");
  } else if (key == "group") cfg.group = value;
  else if (key == "truth.name") cfg.truth = value;
  else if (key == "data.n") cfg.n_data = as_unsigned<std::size_t>(key, v);
  else if (key == "noise.sigma") {
    cfg.sigma = as_double(key, v);
    if (cfg.sigma < 0) throw ConfigError("noise.sigma must be non-negative");
  } else if (key == "prior.nu") {
    cfg.nu = as_double(key, v);
    if (!(cfg.nu > 0)) throw ConfigError("prior.nu must be positive");
  } else if (key == "prior.ell") {
    cfg.ell = as_double(key, v);
    if (!(cfg.ell > 0)) throw ConfigError("prior.ell must be positive");
  } else if (key == "prior.jitter") {
    cfg.jitter = as_double(key, v);
    if (cfg.jitter < 0) throw ConfigError("prior.jitter must be non-negative");
  } else if (key == "prior.shrink") cfg.shrink = as_bool(key, v);
  else if (key == "prior.alpha") cfg.alpha = as_double(key, v);
  else if (key == "mcmc.steps") cfg.steps = as_unsigned<std::size_t>(key, v);
  else if (key == "mcmc.burn_in") cfg.burn_in = as_unsigned<std::size_t>(key, v);
  else if (key == "mcmc.delta") cfg.delta = as_double(key, v);
  else if (key == "mcmc.tune") cfg.tune = as_bool(key, v);
  else if (key == "mcmc.tune_target") cfg.tune_target = as_double(key, v);
  else if (key == "mcmc.thin") cfg.thin = as_unsigned<std::size_t>(key, v);
  else if (key == "mcmc.chains") cfg.chains = as_unsigned<std::size_t>(key, v);
  else if (key == "threads") cfg.threads = as_unsigned<std::size_t>(key, v);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin) {
  if (trim(text).starts_with("{")) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string(origin) + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(std::string(origin) + ": expected a JSON object");
    apply_json(cfg, j, "");
    return;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = line;
    if (const auto h = l.find('#'); h != std::string_view::npos) l = l.substr(0, h);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      set_key(cfg, trim(l.substr(0, eq)), l.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  }
  apply_config_text(cfg, text, path.string());
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  set_key(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::string to_json(const RunConfig& cfg) {
  nlohmann::json j;  // std::map backed, so keys come out sorted
  j["version"] = kFormatVersion;
  j["seed"] = cfg.seed;
  j["mesh.nv"] = cfg.mesh_nv;
  j["mesh.file"] = cfg.mesh_file;
  j["metric.name"] = cfg.metric;
  j["forward.step"] = cfg.step;
  j["group"] = cfg.group;
  j["truth.name"] = cfg.truth;
  j["data.n"] = cfg.n_data;
  j["noise.sigma"] = cfg.sigma;
  j["prior.nu"] = cfg.nu;
  j["prior.ell"] = cfg.ell;
  j["prior.jitter"] = cfg.jitter;
  j["prior.shrink"] = cfg.shrink;
  j["prior.alpha"] = cfg.alpha;
  j["mcmc.steps"] = cfg.steps;
  j["mcmc.burn_in"] = cfg.resolved_burn_in();
  j["mcmc.delta"] = cfg.delta;
  j["mcmc.tune"] = cfg.tune;
  j["mcmc.tune_target"] = cfg.tune_target;
  j["mcmc.thin"] = cfg.thin;
  j["mcmc.chains"] = cfg.chains;
  j["threads"] = cfg.threads;
  return j.dump(2) + "\n";
}

}  // namespace naxray
