#pragma once

#include <cstdint>

namespace padicrmt {

std::uint64_t mix64(std::uint64_t z);

// Counter-based generator: output i of stream (seed, stream_id) is a fixed
// function of (seed, stream_id, i), so streams can be handed to workers in
// any order without changing results.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  // Unbiased integer in [0, bound); bound >= 1.
  std::uint64_t uniform(std::uint64_t bound);
  // Double in [0, 1) with 53 random bits.
  double uniform01();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace padicrmt
