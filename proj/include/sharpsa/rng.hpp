#pragma once

#include <cstdint>
#include <random>

#include "sharpsa/vec.hpp"

namespace sharpsa {

/// Seeded random stream for one replication. Streams for distinct
/// (master_seed, replication_index) pairs are derived through a SplitMix64
/// counter hash, so replications can be fanned out across threads without
/// any shared state and reproduce bit-for-bit.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t replication_index);

    double uniform();                     // U(0,1)
    double normal(double mean = 0.0, double sd = 1.0);
    Vec gaussian(int dim, double sd = 1.0);

    /// Samples an index from an (unnormalized, nonnegative) weight vector.
    int categorical(const Vec& weights);

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t replication() const { return rep_; }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::uint64_t master_ = 0;
    std::uint64_t rep_ = 0;
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace sharpsa
