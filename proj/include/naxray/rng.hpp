#pragma once

#include <cstdint>
#include <random>

namespace naxray {

/// Named random streams. Every stream seed is derived from one top-level
/// seed as splitmix64(seed ^ splitmix64(stream_id)); chain c uses stream
/// id kChainBase + c.
enum class Stream : std::uint64_t {
  kMesh = 1,
  kDesign = 2,
  kNoise = 3,
  kPriorCheck = 4,
  kChainBase = 16,
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id);
inline std::uint64_t derive_seed(std::uint64_t seed, Stream s) {
  return derive_seed(seed, static_cast<std::uint64_t>(s));
}

/// Engine plus the normal distribution's cached state, so that copying an
/// Rng snapshots the full stream position.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  /// Uniform on [0, 1).
  double uniform() { return std::generate_canonical<double, 53>(engine_); }
  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    double u;
    do u = uniform(); while (u == 0.0);
    return u;
  }
  std::mt19937_64& engine() { return engine_; }

  bool operator==(const Rng& o) const { return engine_ == o.engine_ && normal_ == o.normal_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace naxray
