#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "lswspec/rng.hpp"

using namespace lswspec;

TEST_CASE("philox4x32-10 known-answer vectors")
{
  // Reference vectors from the original Random123 distribution.
  {
    const auto out = Philox4x32::block({0u, 0u}, {0u, 0u, 0u, 0u});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
  }
  {
    const auto out = Philox4x32::block(
      {0xffffffffu, 0xffffffffu},
      {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);
  }
  {
    const auto out = Philox4x32::block(
      {0xa4093822u, 0x299f31d0u},
      {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
  }
}

TEST_CASE("gaussian stream is reproducible and keyed")
{
  const GaussianStream a(42, StreamTag::simulation);
  const GaussianStream b(42, StreamTag::simulation);
  const GaussianStream c(43, StreamTag::simulation);
  const GaussianStream d(42, StreamTag::regularizer);

  CHECK(a.normal(1, 7) == b.normal(1, 7));
  CHECK(a.normal(1, 7) != c.normal(1, 7));
  CHECK(a.normal(1, 7) != d.normal(1, 7));
  CHECK(a.normal(1, 7) != a.normal(2, 7));
  CHECK(a.normal(1, 7) != a.normal(1, 8));
}

TEST_CASE("gaussian stream moments")
{
  const GaussianStream g(7, StreamTag::simulation);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0, sum3 = 0.0, sum4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = g.normal(1, static_cast<std::uint64_t>(i));
    sum += x;
    sum2 += x * x;
    sum3 += x * x * x;
    sum4 += x * x * x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
  CHECK(std::abs(sum3 / n) < 0.05);
  CHECK(std::abs(sum4 / n - 3.0) < 0.1);
}
