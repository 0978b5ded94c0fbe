#include "lswspec/periodogram.hpp"

#include <algorithm>
#include <cmath>

#include "lswspec/errors.hpp"

namespace lswspec {

PeriodogramGrid PeriodogramGrid::raw_only(std::span<const double> series,
                                          int scale_count)
{
  const long T = static_cast<long>(series.size());
  if (scale_count < 1)
    throw std::domain_error("periodogram needs at least one scale");
  if (scale_count > max_scale_count(T))
    throw std::domain_error("periodogram scale_count exceeds floor(log2 T)");

  PeriodogramGrid g;
  g.T_ = T;
  g.scale_count_ = scale_count;
  g.raw_ = Eigen::MatrixXd(scale_count, T);

  std::vector<double> prefix(static_cast<size_t>(T) + 1, 0.0);
  for (long t = 0; t < T; ++t)
    prefix[static_cast<size_t>(t) + 1] =
      prefix[static_cast<size_t>(t)] + series[static_cast<size_t>(t)];
  const auto range_sum = [&](long a, long b) {
    a = std::clamp(a, 0L, T);
    b = std::clamp(b, 0L, T);
    return prefix[static_cast<size_t>(b)] - prefix[static_cast<size_t>(a)];
  };

  for (int i = 1; i <= scale_count; ++i) {
    const long len = 1L << i;
    const double amp = std::pow(2.0, -i / 2.0);
    for (long k = 0; k < T; ++k) {
      // psi_{jk}(t) = +amp on t in [k-L/2+1, k], -amp on [k-L+1, k-L/2]
      const double d = amp * (range_sum(k - len / 2 + 1, k + 1) -
                              range_sum(k - len + 1, k - len / 2 + 1));
      g.raw_(i - 1, k) = d * d;
    }
  }
  return g;
}

PeriodogramGrid corrected_periodogram(const PeriodogramGrid& raw_grid,
                                      const GramMatrix& gram)
{
  if (gram.scale_count != raw_grid.scale_count())
    throw std::domain_error("Gram matrix scale count does not match the grid");
  PeriodogramGrid g = raw_grid;
  g.corrected_ = gram.a_inv * g.raw_;
  g.gram_ = gram;
  return g;
}

PeriodogramGrid PeriodogramGrid::compute(std::span<const double> series,
                                         const GramMatrix& gram)
{
  return corrected_periodogram(raw_only(series, gram.scale_count), gram);
}

PeriodogramGrid PeriodogramGrid::compute(std::span<const double> series,
                                         int scale_count)
{
  return compute(series, gram_matrix(scale_count));
}

double wavelet_coefficient_bruteforce(std::span<const double> series,
                                      ScaleIndex scale, long k)
{
  const auto w = haar_wavelet(scale);
  const long T = static_cast<long>(series.size());
  double d = 0.0;
  for (long t = std::max(0L, k - scale.support_length() + 1);
       t <= std::min(k, T - 1); ++t)
    d += series[static_cast<size_t>(t)] * haar_shifted(w, k, t);
  return d;
}

} // namespace lswspec
