#ifndef ASA_RANDOM_HPP_
#define ASA_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace asa {

using Rng = std::mt19937_64;

// Independent purposes get disjoint seed sequences.
enum class StreamTag : std::uint32_t {
  Run = 0,
  Channel = 1,
  User = 2,
  Centralized = 3,
  Detector = 4,
};

// Deterministic stream derived from (seed, tag, index) through std::seed_seq.
// Both seed_seq and mt19937_64 are fully specified by the standard, so the
// streams are identical across platforms.
inline Rng make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

// Seed of the run-th Monte Carlo replication under a master seed.
inline std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run) {
  Rng rng = make_stream(master_seed, StreamTag::Run, run);
  return rng();
}

}  // namespace asa

#endif  // ASA_RANDOM_HPP_
