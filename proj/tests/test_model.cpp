#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "lswspec/errors.hpp"
#include "lswspec/estimator.hpp"
#include "lswspec/model.hpp"
#include "lswspec/rng.hpp"

using namespace lswspec;

namespace {

std::shared_ptr<const SpectrumSpec> shared_spec(SpectrumSpec s)
{
  return std::make_shared<const SpectrumSpec>(std::move(s));
}

} // namespace

TEST_CASE("local autocovariance basics")
{
  const AutocorrSystem system(10);
  const SpectrumSpec wn = SpectrumSpec::white_noise(10);

  CHECK(local_autocovariance(wn, system, 0.5, 0) ==
        doctest::Approx(1.0 - std::pow(2.0, -10)).epsilon(1e-12));
  CHECK(std::abs(local_autocovariance(wn, system, 0.5, 3)) <=
        std::pow(2.0, -10) * 7.0);

  const SpectrumSpec zero(2);
  for (long tau : {0L, 1L, 5L})
    CHECK(local_autocovariance(zero, system, 0.3, tau) == 0.0);

  // symmetry in tau
  const SpectrumSpec s5 = SpectrumSpec::example_s5();
  const AutocorrSystem sys4(4);
  for (long tau = 0; tau <= 20; ++tau)
    CHECK(local_autocovariance(s5, sys4, 0.41, tau) ==
          local_autocovariance(s5, sys4, 0.41, -tau));
}

TEST_CASE("covariance matrix structure")
{
  const SpectrumSpec s5 = SpectrumSpec::example_s5();
  const Eigen::MatrixXd sigma = covariance_matrix(s5, 64);

  // frozen oracle entries (independent implementation)
  CHECK(sigma(32, 32) == doctest::Approx(2.046753496621408).epsilon(1e-12));
  CHECK(sigma(32, 33) == doctest::Approx(0.4034476704455666).epsilon(1e-12));
  CHECK(sigma(10, 12) == doctest::Approx(0.16211536675327737).epsilon(1e-12));

  CHECK((sigma - sigma.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma,
                                                    Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);

  CHECK_THROWS_AS(covariance_matrix(s5, 8), std::domain_error);
  CHECK_THROWS_AS(covariance_matrix(s5, 5000), ResourceError);
}

TEST_CASE("constant spectrum gives Toeplitz interior")
{
  SpectrumSpec flat(3);
  flat.add_piece(-1, SpectrumPiece::make_const(0.0, 1.0, 0.8));
  flat.add_piece(-3, SpectrumPiece::make_const(0.0, 1.0, 0.4));
  const long T = 128;
  const Eigen::MatrixXd sigma = covariance_matrix(flat, T);
  const long margin = 16;  // 2 L_J
  for (long lag = 0; lag <= 10; ++lag) {
    const double ref = sigma(margin, margin + lag);
    for (long s = margin; s + lag < T - margin; ++s)
      CHECK(sigma(s, s + lag) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("banded covariance equals the dense one")
{
  const SpectrumSpec s5 = SpectrumSpec::example_s5();
  const long T = 96;
  const Eigen::MatrixXd dense = covariance_matrix(s5, T);
  const BandedSymmetric banded = covariance_banded(s5, T);
  for (long s = 0; s < T; ++s)
    for (long t = 0; t < T; ++t)
      CHECK(banded.get(s, t) == doctest::Approx(dense(s, t)).epsilon(1e-13));
}

TEST_CASE("simulate: basic contracts")
{
  auto zero = shared_spec(SpectrumSpec(2));
  const SeriesSample z = simulate(zero, 64, 5);
  for (double v : z.values)
    CHECK(v == 0.0);

  auto s5 = shared_spec(SpectrumSpec::example_s5());
  const SeriesSample a = simulate(s5, 1000, 42);
  const SeriesSample b = simulate(s5, 1000, 42);
  const SeriesSample c = simulate(s5, 1000, 43);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.T == 1000);

  CHECK_THROWS_AS(simulate(s5, 8, 1), std::domain_error);
}

TEST_CASE("simulate matches the brute-force synthesis")
{
  auto s5 = shared_spec(SpectrumSpec::example_s5());
  const long T = 80;
  const SeriesSample fast = simulate(s5, T, 99);

  // oracle: direct double sum over (j, k) with explicit shifted wavelets
  const GaussianStream xi(99, StreamTag::simulation);
  std::vector<double> slow(static_cast<size_t>(T), 0.0);
  const int J = simulation_scale_count(*s5, T);
  for (int i = 1; i <= J; ++i) {
    const auto scale = ScaleIndex::from_depth(i);
    const auto w = haar_wavelet(scale);
    for (long k = 0; k < T; ++k) {
      const double sv = s5->value_at_grid(scale, k, T);
      if (sv == 0.0)
        continue;
      const double coeff = std::sqrt(sv) * xi.normal(i, k);
      for (long t = 0; t < T; ++t)
        slow[static_cast<size_t>(t)] += coeff * haar_shifted(w, k, t);
    }
  }
  for (long t = 0; t < T; ++t)
    CHECK(fast.values[static_cast<size_t>(t)] ==
          doctest::Approx(slow[static_cast<size_t>(t)]).epsilon(1e-12));
}

TEST_CASE("monte carlo covariance of simulate matches covariance_matrix")
{
  auto wn = shared_spec(SpectrumSpec::white_noise(9));
  const long T = 512;
  const Eigen::MatrixXd sigma = covariance_matrix(*wn, T);
  const int reps = 10000;

  // spot pairs spread over the matrix, including off-diagonal and boundary
  const std::pair<long, long> pairs[] = {
    {256, 256}, {256, 257}, {256, 258}, {300, 310}, {5, 5},
    {5, 9},     {500, 505}, {128, 128}, {128, 160}, {40, 41},
  };
  double acc[10][2] = {};
  for (int r = 0; r < reps; ++r) {
    const SeriesSample x = simulate(wn, T, 1000 + static_cast<unsigned>(r));
    for (int p = 0; p < 10; ++p) {
      const double prod = x.values[static_cast<size_t>(pairs[p].first)] *
                          x.values[static_cast<size_t>(pairs[p].second)];
      acc[p][0] += prod;
      acc[p][1] += prod * prod;
    }
  }
  for (int p = 0; p < 10; ++p) {
    const double mean = acc[p][0] / reps;
    const double var = acc[p][1] / reps - mean * mean;
    const double se = std::sqrt(var / reps);
    const double target = sigma(pairs[p].first, pairs[p].second);
    CHECK(std::abs(mean - target) <= 3.5 * se + 1e-12);
  }
}

TEST_CASE("autocovariance convergence in T")
{
  // D(T) = sum_{|tau|<=taumax} T^{-1} sum_t |sigma_{t,t+tau} - c(t/T,tau)|
  // drops like 1/T for the example spectrum.
  const SpectrumSpec s5 = SpectrumSpec::example_s5();
  const AutocorrSystem system(4);
  const long tau_max = 32;
  double d_prev = -1.0;
  for (long T : {256L, 512L, 1024L}) {
    const Eigen::MatrixXd sigma = covariance_matrix(s5, T);
    double d = 0.0;
    for (long tau = -tau_max; tau <= tau_max; ++tau)
      for (long t = 0; t < T; ++t) {
        const long u = t + tau;
        const double model =
          (u >= 0 && u < T)
            ? sigma(t, u)
            : 0.0;
        const double z = std::max(1e-12, std::min(1.0 - 1e-12,
                                                  static_cast<double>(t) / T));
        d += std::abs(model - local_autocovariance(s5, system, z, tau)) / T;
      }
    if (d_prev > 0.0)
      CHECK(d / d_prev <= 0.7);
    d_prev = d;
  }
}
