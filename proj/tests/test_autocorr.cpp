#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lswspec/autocorr.hpp"
#include "lswspec/scales.hpp"

using namespace lswspec;

TEST_CASE("haar wavelet taps")
{
  const auto fine = haar_wavelet(ScaleIndex::from_paper(-1));
  REQUIRE(fine.values.size() == 2);
  CHECK(fine.values[0] == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-15));
  CHECK(fine.values[1] == doctest::Approx(-std::pow(2.0, -0.5)).epsilon(1e-15));

  const auto j2 = haar_wavelet(ScaleIndex::from_paper(-2));
  REQUIRE(j2.values.size() == 4);
  CHECK(j2.values[0] == doctest::Approx(0.5));
  CHECK(j2.values[1] == doctest::Approx(0.5));
  CHECK(j2.values[2] == doctest::Approx(-0.5));
  CHECK(j2.values[3] == doctest::Approx(-0.5));

  for (int i = 1; i <= 10; ++i) {
    const auto w = haar_wavelet(ScaleIndex::from_depth(i));
    double energy = 0.0, mean = 0.0;
    for (double v : w.values) {
      energy += v * v;
      mean += v;
    }
    CHECK(energy == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(mean) < 1e-12);
  }

  CHECK_THROWS_AS(ScaleIndex::from_paper(0), std::domain_error);
  CHECK_THROWS_AS(ScaleIndex::from_depth(0), std::domain_error);
}

TEST_CASE("autocorrelation wavelet values")
{
  CHECK(autocorrelation_wavelet(ScaleIndex::from_paper(-1), 0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(autocorrelation_wavelet(ScaleIndex::from_paper(-1), 1) ==
        doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(autocorrelation_wavelet(ScaleIndex::from_paper(-2), 2) ==
        doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(autocorrelation_wavelet(ScaleIndex::from_paper(-1), 5) == 0.0);
  CHECK(autocorrelation_wavelet(ScaleIndex::from_paper(-2), 1) ==
        doctest::Approx(0.25).epsilon(1e-14));
  CHECK(autocorrelation_wavelet(ScaleIndex::from_paper(-3), 5) ==
        doctest::Approx(-0.375).epsilon(1e-14));
  CHECK(autocorrelation_wavelet(ScaleIndex::from_paper(-4), 11) ==
        doctest::Approx(-0.3125).epsilon(1e-14));
}

TEST_CASE("cached tables match the brute-force definition")
{
  // Oracle: Psi_j(tau) = sum_k psi_{jk}(0) psi_{jk}(tau) evaluated through
  // the shifted-wavelet form, independent of the table construction.
  const AutocorrSystem system(6);
  for (int i = 1; i <= 6; ++i) {
    const auto scale = ScaleIndex::from_depth(i);
    const auto w = haar_wavelet(scale);
    const long len = scale.support_length();
    for (long tau = -len - 2; tau <= len + 2; ++tau) {
      double oracle = 0.0;
      for (long k = -2 * len; k <= 2 * len; ++k)
        oracle += haar_shifted(w, k, 0) * haar_shifted(w, k, tau);
      CHECK(system.psi(scale, tau) == doctest::Approx(oracle).epsilon(1e-13));
    }
  }
}

TEST_CASE("psi properties: symmetry, unit origin, bounded, support")
{
  const AutocorrSystem system(10);
  for (int i = 1; i <= 10; ++i) {
    const auto scale = ScaleIndex::from_depth(i);
    const long len = scale.support_length();
    CHECK(system.psi(scale, 0) == doctest::Approx(1.0).epsilon(1e-12));
    for (long tau = 0; tau <= len + 3; ++tau) {
      CHECK(system.psi(scale, tau) == system.psi(scale, -tau));
      CHECK(std::abs(system.psi(scale, tau)) <= 1.0 + 1e-12);
    }
    CHECK(system.psi(scale, len) == 0.0);
    CHECK(system.psi(scale, 2 * len - 1) == 0.0);
  }
}

TEST_CASE("gram matrix small cases")
{
  const GramMatrix g1 = gram_matrix(1);
  CHECK(g1.a(0, 0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(g1.a_inv(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  const GramMatrix g2 = gram_matrix(2);
  CHECK(g2.a(0, 1) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(g2.a(1, 0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(g2.a(1, 1) == doctest::Approx(1.75).epsilon(1e-13));

  const GramMatrix g4 = gram_matrix(4);
  CHECK(g4.a(0, 3) == doctest::Approx(0.1875).epsilon(1e-13));
  CHECK(g4.a(2, 3) == doctest::Approx(2.0625).epsilon(1e-13));
  CHECK(g4.a_inv(0, 0) == doctest::Approx(0.8525229406404305).epsilon(1e-10));
  CHECK(g4.a_inv(0, 1) == doctest::Approx(-0.3939220548032297).epsilon(1e-10));
}

TEST_CASE("gram matrix structural invariants")
{
  for (int J : {1, 2, 4, 8, 12}) {
    const GramMatrix g = gram_matrix(J);
    for (int r = 0; r < J; ++r) {
      for (int c = 0; c < J; ++c) {
        CHECK(g.a(r, c) == g.a(c, r));
        const double cap = std::min((2L << (r + 1)) - 1.0, (2L << (c + 1)) - 1.0);
        CHECK(g.a(r, c) <= cap);
      }
    }
    const double residual =
      (g.a * g.a_inv - Eigen::MatrixXd::Identity(J, J)).cwiseAbs().maxCoeff();
    CHECK(residual <= 1e-8);
    CHECK(g.condition_number > 0.0);
  }

  // determinism across rebuilds
  const GramMatrix a = gram_matrix(8);
  const GramMatrix b = gram_matrix(8);
  CHECK((a.a - b.a).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.a_inv - b.a_inv).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("delta identity residuals")
{
  const AutocorrSystem system(12);
  for (int J : {4, 6, 8, 10, 12}) {
    // at the origin the truncated sum is exactly 1 - 2^-J
    double origin = 0.0;
    for (int i = 1; i <= J; ++i)
      origin += std::pow(2.0, -i) * system.psi(ScaleIndex::from_depth(i), 0);
    CHECK(std::abs((1.0 - origin) - std::pow(2.0, -J)) < 1e-14);

    const double worst = check_delta_identity(system, J, 32);
    CHECK(worst <= std::pow(2.0, -J) + 1e-12);
  }
  // J=1: the partial sum vanishes beyond the support
  const AutocorrSystem s1(1);
  double v = 0.5 * s1.psi(ScaleIndex::from_depth(1), 2);
  CHECK(v == 0.0);
}

TEST_CASE("inverse row sums approach 2^j")
{
  const GramMatrix g1 = gram_matrix(1);
  const auto dev1 = check_inverse_rowsum(g1);
  CHECK(dev1[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  double prev = 1e9;
  for (int J : {4, 6, 8, 10}) {
    const auto dev = check_inverse_rowsum(gram_matrix(J));
    CHECK(dev[0] < prev);
    prev = dev[0];
  }
  // deep system: the finest-scale deviation is far below the coarse bound
  const auto dev10 = check_inverse_rowsum(gram_matrix(10));
  CHECK(dev10[0] <= std::pow(2.0, -0.5) * std::pow(2.0, -5.0));
}

TEST_CASE("weighted gram rows recover psi at the origin")
{
  // sum_l 2^l A_{jl} converges to Psi_j(0) = 1 with residual <= 2^-J (2L_j-1)
  for (int J : {6, 8, 10}) {
    const GramMatrix g = gram_matrix(J);
    for (int r = 0; r < std::min(J, 4); ++r) {
      double s = 0.0;
      for (int c = 0; c < J; ++c)
        s += std::pow(2.0, -(c + 1)) * g.a(r, c);
      const double bound =
        std::pow(2.0, -J) * (2.0 * (1L << (r + 1)) - 1.0) + 1e-12;
      CHECK(std::abs(s - 1.0) <= bound);
    }
  }
}
