#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace graphrom {

/// Deterministic generator. Uniform and integer draws are computed here rather than
/// through <random> distributions so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Seed for the named substream (e.g. "sampling", "kmeans", "synth") of a master seed.
std::uint64_t substream_seed(std::uint64_t master, std::string_view name,
                             std::uint64_t index = 0);

}  // namespace graphrom
