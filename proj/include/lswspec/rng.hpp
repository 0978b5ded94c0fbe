#pragma once

#include <array>
#include <cstdint>

namespace lswspec {

//! Philox4x32-10 counter-based generator (Salmon et al., SC'11). Each block
//! is a pure function of (key, counter), so any draw in a simulation is
//! addressable directly and the output never depends on evaluation order.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Key key, Counter ctr);
};

//! Stream tags keep draws for different purposes out of each other's way.
enum class StreamTag : std::uint32_t {
  simulation = 0x5349414d,   // process increments xi_{jk}
  regularizer = 0x52454732,  // additive noise z_{j,k;T}
};

//! Standard normal draws keyed by (seed, tag, scale depth, index).
//! The Gaussian is produced by Box-Muller from one Philox block.
class GaussianStream {
public:
  GaussianStream(std::uint64_t seed, StreamTag tag)
    : seed_(seed), tag_(static_cast<std::uint32_t>(tag))
  {}

  double normal(std::uint32_t scale_depth, std::uint64_t index) const;

private:
  std::uint64_t seed_;
  std::uint32_t tag_;
};

} // namespace lswspec
