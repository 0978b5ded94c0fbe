#include "lswspec/model.hpp"

#include <algorithm>
#include <cmath>

#include "lswspec/errors.hpp"
#include "lswspec/rng.hpp"

namespace lswspec {

int max_scale_count(long T)
{
  int j = 0;
  while ((2L << j) <= T)
    ++j;
  return j;
}

int simulation_scale_count(const SpectrumSpec& spec, long T)
{
  return std::min(spec.scale_count(), max_scale_count(T));
}

double local_autocovariance(const SpectrumSpec& spec,
                            const AutocorrSystem& system, double z, long tau)
{
  if (!(z > 0.0 && z < 1.0))
    throw std::domain_error("rescaled time must lie in (0,1)");
  double c = 0.0;
  const int J = std::min(spec.scale_count(), system.max_depth());
  for (int i = 1; i <= J; ++i) {
    const auto scale = ScaleIndex::from_depth(i);
    c += spec.evaluate(scale, z) * system.psi(scale, tau);
  }
  return c;
}

Eigen::MatrixXd covariance_matrix(const SpectrumSpec& spec, long T)
{
  if (T < 16)
    throw std::domain_error("covariance_matrix needs T >= 16");
  if (T > kDenseTLimit)
    throw ResourceError("T exceeds the dense-matrix bound of " +
                        std::to_string(kDenseTLimit));

  const int J = simulation_scale_count(spec, T);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(T, T);
  for (int i = 1; i <= J; ++i) {
    const auto scale = ScaleIndex::from_depth(i);
    const auto w = haar_wavelet(scale);
    const long len = scale.support_length();
    for (long k = 0; k < T; ++k) {
      const double s_val = spec.value_at_grid(scale, k, T);
      if (s_val == 0.0)
        continue;
      const long t_lo = std::max(0L, k - len + 1);
      for (long s = t_lo; s <= k; ++s) {
        const double ws = w.values[static_cast<size_t>(k - s)];
        for (long t = s; t <= k; ++t)
          sigma(s, t) += s_val * ws * w.values[static_cast<size_t>(k - t)];
      }
    }
  }
  return sigma.selfadjointView<Eigen::Upper>();
}

SeriesSample simulate(std::shared_ptr<const SpectrumSpec> spec, long T,
                      std::uint64_t seed)
{
  if (!spec)
    throw std::domain_error("simulate needs a spectrum");
  if (T < 16)
    throw std::domain_error("simulate needs T >= 16");

  SeriesSample out;
  out.T = T;
  out.seed = seed;
  out.spec = spec;
  out.values.assign(static_cast<size_t>(T), 0.0);

  const GaussianStream xi(seed, StreamTag::simulation);
  const int J = simulation_scale_count(*spec, T);

  std::vector<double> prefix(static_cast<size_t>(T) + 1);
  for (int i = 1; i <= J; ++i) {
    const auto scale = ScaleIndex::from_depth(i);
    const long len = scale.support_length();
    const double amp = std::pow(2.0, -i / 2.0);

    // prefix sums of c_k = sqrt(S_j(k/T)) xi_{jk}
    prefix[0] = 0.0;
    for (long k = 0; k < T; ++k) {
      const double s_val = spec->value_at_grid(scale, k, T);
      const double c =
        s_val > 0.0
          ? std::sqrt(s_val) * xi.normal(static_cast<std::uint32_t>(i),
                                         static_cast<std::uint64_t>(k))
          : 0.0;
      prefix[static_cast<size_t>(k) + 1] = prefix[static_cast<size_t>(k)] + c;
    }
    const auto range_sum = [&](long a, long b) {
      a = std::clamp(a, 0L, T);
      b = std::clamp(b, 0L, T);
      return prefix[static_cast<size_t>(b)] - prefix[static_cast<size_t>(a)];
    };
    // X_t += 2^{j/2} (sum_{k in [t, t+L/2)} c_k - sum_{k in [t+L/2, t+L)} c_k)
    for (long t = 0; t < T; ++t)
      out.values[static_cast<size_t>(t)] +=
        amp * (range_sum(t, t + len / 2) - range_sum(t + len / 2, t + len));
  }
  return out;
}

} // namespace lswspec
