#pragma once

#include <cstdint>
#include <random>

namespace pisrl {

using Rng = std::mt19937_64;

// Named sub-streams derived from one master seed. Keeping environment
// noise, exploration noise and evaluation rollouts on separate streams
// means toggling one of them never shifts the draws of another.
enum class StreamId : std::uint64_t {
  estimate = 1,
  clone = 2,
  clone_eval = 3,
  mc = 4,
  improve = 5,
  eval = 6,
};

enum class NoiseRole : std::uint64_t {
  environment = 1,
  exploration = 2,
};

// splitmix64 finalizer; statistically independent outputs for distinct inputs.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(base ^ mix64(a)) ^ mix64(b + 0x517cc1b727220a95ULL));
}

inline Rng make_stream(std::uint64_t replica_seed, StreamId phase, NoiseRole role) {
  return Rng(derive_seed(replica_seed, static_cast<std::uint64_t>(phase),
                         static_cast<std::uint64_t>(role)));
}

// One Gaussian draw. A fresh distribution per call keeps the draw count a
// pure function of the generator state (no cached second variate).
inline double gaussian(Rng& rng, double mean, double stddev) {
  std::normal_distribution<double> dist(mean, stddev);
  return dist(rng);
}

}  // namespace pisrl
