#include "lswspec/rng.hpp"

#include <cmath>

namespace lswspec {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(Philox4x32::Counter& x, const Philox4x32::Key& k)
{
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

} // namespace

Philox4x32::Counter Philox4x32::block(Key key, Counter ctr)
{
  for (int r = 0; r < 10; ++r) {
    round_once(ctr, key);
    if (r < 9) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
  }
  return ctr;
}

double GaussianStream::normal(std::uint32_t scale_depth,
                              std::uint64_t index) const
{
  const Philox4x32::Key key = {static_cast<std::uint32_t>(seed_),
                               static_cast<std::uint32_t>(seed_ >> 32)};
  const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(index),
                                   static_cast<std::uint32_t>(index >> 32),
                                   scale_depth, tag_};
  const auto out = Philox4x32::block(key, ctr);

  const std::uint64_t a =
    (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  const std::uint64_t b =
    (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
  // 53-bit mantissas shifted into (0,1); the offset keeps u1 away from 0.
  const double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = (static_cast<double>(b >> 11) + 0.5) * 0x1.0p-53;
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

} // namespace lswspec
