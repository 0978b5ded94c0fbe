#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lswspec/errors.hpp"
#include "lswspec/spectrum.hpp"

using namespace lswspec;

namespace {
const ScaleIndex s1 = ScaleIndex::from_paper(-1);
const ScaleIndex s2 = ScaleIndex::from_paper(-2);
const ScaleIndex s4 = ScaleIndex::from_paper(-4);
}

TEST_CASE("example spectrum evaluation")
{
  const SpectrumSpec spec = SpectrumSpec::example_s5();
  CHECK(spec.scale_count() == 4);
  CHECK(spec.evaluate(s1, 0.3) == doctest::Approx(1.0));
  CHECK(spec.evaluate(s1, 0.6) == 0.0);
  CHECK(spec.evaluate(s2, 0.3) == 0.0);
  CHECK(spec.evaluate(s2, 0.9) == 0.0);
  CHECK(spec.evaluate(s4, 0.2) == 0.0);
  // sin^2(5 pi z - pi/4) + 0.5 at z = 0.45
  const double z = 0.45;
  const double expected =
    std::pow(std::sin(5 * std::numbers::pi * z - std::numbers::pi / 4), 2) + 0.5;
  CHECK(spec.evaluate(s4, z) == doctest::Approx(expected).epsilon(1e-14));

  CHECK_THROWS_AS(spec.evaluate(s1, 0.0), std::domain_error);
  CHECK_THROWS_AS(spec.evaluate(s1, 1.0), std::domain_error);
  CHECK_THROWS_AS(spec.evaluate(s1, -0.5), std::domain_error);
}

TEST_CASE("parser accepts the documented format")
{
  const std::string text =
    "# comment line\n"
    "scale = -1; piece = [0.25, 0.575), const 1.0; "
    "piece = [0.75, 1.0), sin2 amp=1.0 omega=2 phase=-0.25pi offset=0.5\n"
    "scale = -2\n"
    "scale = -3; piece = [0, 0.25), sin2 amp=1.0 omega=1 phase=-0.25pi offset=0.5\n"
    "scale = -4; piece = [0.375, 1.0), sin2 amp=1.0 omega=5 phase=-0.25pi offset=0.5\n";
  const SpectrumSpec parsed = SpectrumSpec::parse(text);
  const SpectrumSpec builtin = SpectrumSpec::example_s5();
  CHECK(parsed.scale_count() == 4);
  for (double z : {0.01, 0.2, 0.3, 0.5, 0.574, 0.575, 0.74, 0.75, 0.9, 0.99})
    for (int j = -1; j >= -4; --j)
      CHECK(parsed.evaluate(ScaleIndex::from_paper(j), z) ==
            doctest::Approx(builtin.evaluate(ScaleIndex::from_paper(j), z))
              .epsilon(1e-14));
}

TEST_CASE("parser rejects malformed input with location info")
{
  CHECK_THROWS_AS(SpectrumSpec::parse("scale = 1"), ParseError);
  CHECK_THROWS_AS(SpectrumSpec::parse("piece = [0,1), const 1"), ParseError);
  CHECK_THROWS_AS(SpectrumSpec::parse("scale = -1; piece = [0.5, 0.2), const 1"),
                  ParseError);
  CHECK_THROWS_AS(SpectrumSpec::parse("scale = -1; piece = [0,1), const -2"),
                  ParseError);
  CHECK_THROWS_AS(SpectrumSpec::parse("scale = -1; piece = [0,1), wobble 1"),
                  ParseError);
  CHECK_THROWS_AS(
    SpectrumSpec::parse("scale = -1; piece = [0,0.5), const 1; piece = [0.4,1), const 2"),
    ParseError);
  try {
    SpectrumSpec::parse("scale = -1\nscale = -2; piece = [0,1), const nope");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 1);
  }
}

TEST_CASE("total variation closed forms")
{
  SpectrumSpec flat(1);
  flat.add_piece(-1, SpectrumPiece::make_const(0.0, 1.0, 3.0));
  CHECK(flat.total_variation(s1).value == 0.0);
  CHECK(flat.total_variation(s1).exact);

  SpectrumSpec box(1);
  box.add_piece(-1, SpectrumPiece::make_const(0.25, 0.575, 1.0));
  CHECK(box.total_variation(s1).value == doctest::Approx(2.0).epsilon(1e-12));

  // grid-refinement oracle gave 4 for sin^2(2 pi z) on (0,1)
  SpectrumSpec wave(1);
  wave.add_piece(-1, SpectrumPiece::make_sin2(0.0, 1.0, 1.0, 2.0, 0.0, 0.0));
  CHECK(wave.total_variation(s1).value == doctest::Approx(4.0).epsilon(1e-12));

  // jump at the right edge of an interior piece plus the oscillation
  SpectrumSpec mix = SpectrumSpec::example_s5();
  const double tv1 = mix.total_variation(s1).value;
  // two unit jumps plus the burst: jump up at 0.75 (value 1 there), the
  // sin^2 oscillation, and nothing at z=1 (boundary). Compare to a fine grid.
  double grid_tv = 0.0;
  double prev = 0.0;
  const int n = 400000;
  for (int i = 1; i < n; ++i) {
    const double z = static_cast<double>(i) / n;
    const double v = mix.evaluate(s1, z);
    if (i > 1)
      grid_tv += std::abs(v - prev);
    prev = v;
  }
  CHECK(tv1 == doctest::Approx(grid_tv).epsilon(1e-3));
}

TEST_CASE("tabulated scales: evaluation and flagged variation")
{
  SpectrumSpec spec(1);
  spec.set_table(-1, {1.0, 2.0, 0.5, 0.5});
  CHECK(spec.evaluate(s1, 0.1) == doctest::Approx(1.0));
  CHECK(spec.evaluate(s1, 0.26) == doctest::Approx(2.0));
  CHECK(spec.evaluate(s1, 0.99) == doctest::Approx(0.5));
  const auto tv = spec.total_variation(s1);
  CHECK(tv.value == doctest::Approx(2.5));
  CHECK_FALSE(tv.exact);
  CHECK(spec.integral_average(s1, 0.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("integral averages match quadrature")
{
  const SpectrumSpec spec = SpectrumSpec::example_s5();

  // constant piece fully inside
  CHECK(spec.integral_average(s1, 0.3, 0.5) == doctest::Approx(1.0));
  // plateau average over its exact support
  CHECK(spec.integral_average(s1, 0.25, 0.575) == doctest::Approx(1.0));
  // frozen quadrature value for the burst segment
  CHECK(spec.integral_average(s1, 0.75, 1.0) ==
        doctest::Approx(1.3183098861837905).epsilon(1e-12));
  CHECK(spec.integral_average(s4, 0.4, 0.8) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Riemann-sum oracle on a generic window crossing piece boundaries
  const double lo = 0.2, hi = 0.8;
  const int n = 2000000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = lo + (hi - lo) * (i + 0.5) / n;
    acc += spec.evaluate(s1, z);
  }
  acc /= n;
  CHECK(spec.integral_average(s1, lo, hi) == doctest::Approx(acc).epsilon(1e-6));
}

TEST_CASE("sup over scales stays finite and positive parts respected")
{
  const SpectrumSpec spec = SpectrumSpec::example_s5();
  CHECK(spec.sup_value(s1) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(spec.sup_value(s2) == 0.0);
  double total = 0.0;
  for (int i = 1; i <= spec.scale_count(); ++i)
    total += spec.sup_value(ScaleIndex::from_depth(i));
  CHECK(total < 10.0);

  // nonnegativity on a dense grid
  for (int i = 1; i <= spec.scale_count(); ++i)
    for (int g = 1; g < 10000; ++g)
      if (spec.evaluate(ScaleIndex::from_depth(i), g / 10000.0) < 0.0)
        FAIL("negative spectrum value");
}

TEST_CASE("white noise helper")
{
  const SpectrumSpec wn = SpectrumSpec::white_noise(6);
  for (int i = 1; i <= 6; ++i)
    CHECK(wn.evaluate(ScaleIndex::from_depth(i), 0.37) ==
          doctest::Approx(std::pow(2.0, -i)));
}
