#include "lswspec/scales.hpp"

#include <cmath>

namespace lswspec {

WaveletVector haar_wavelet(ScaleIndex scale)
{
  const long len = scale.support_length();
  const double amp = std::pow(2.0, scale.paper() / 2.0);
  std::vector<double> v(static_cast<size_t>(len));
  for (long m = 0; m < len / 2; ++m)
    v[static_cast<size_t>(m)] = amp;
  for (long m = len / 2; m < len; ++m)
    v[static_cast<size_t>(m)] = -amp;
  return WaveletVector{scale, std::move(v)};
}

double haar_shifted(const WaveletVector& w, long k, long t)
{
  const long m = k - t;
  if (m < 0 || m >= static_cast<long>(w.values.size()))
    return 0.0;
  return w.values[static_cast<size_t>(m)];
}

} // namespace lswspec
