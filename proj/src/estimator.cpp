#include "lswspec/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "lswspec/errors.hpp"

namespace lswspec {

TimeInterval make_interval(long lo, long hi, long T)
{
  if (!(0 <= lo && lo < hi && hi <= T))
    throw std::domain_error("interval must satisfy 0 <= lo < hi <= T");
  return TimeInterval{lo, hi};
}

QAverager::QAverager(const PeriodogramGrid& grid, double c2,
                     std::uint64_t seed)
  : T_(grid.T()), c2_(c2)
{
  if (!grid.has_corrected())
    throw std::domain_error("QAverager needs a corrected periodogram");
  if (c2 < 0.0)
    throw std::domain_error("regularization constant c2 must be >= 0");

  const int J = grid.scale_count();
  data_prefix_ = Eigen::MatrixXd::Zero(J, T_ + 1);
  noise_prefix_ = Eigen::MatrixXd::Zero(J, T_ + 1);
  const GaussianStream z(seed, StreamTag::regularizer);
  const double c = std::sqrt(c2);
  for (int i = 1; i <= J; ++i) {
    const double sd = c * std::pow(2.0, -i / 2.0);
    for (long k = 0; k < T_; ++k) {
      data_prefix_(i - 1, k + 1) =
        data_prefix_(i - 1, k) + grid.corrected()(i - 1, k);
      const double zk =
        (c2 > 0.0) ? sd * z.normal(static_cast<std::uint32_t>(i),
                                   static_cast<std::uint64_t>(k))
                   : 0.0;
      noise_prefix_(i - 1, k + 1) = noise_prefix_(i - 1, k) + zk;
    }
  }
}

double QAverager::average(ScaleIndex scale, TimeInterval r) const
{
  const int row = scale.row();
  if (row >= data_prefix_.rows())
    throw std::domain_error("scale deeper than the periodogram grid");
  if (!(0 <= r.lo && r.lo < r.hi && r.hi <= T_))
    throw std::domain_error("interval out of range");
  const double data = data_prefix_(row, r.hi) - data_prefix_(row, r.lo);
  const double noise = noise_prefix_(row, r.hi) - noise_prefix_(row, r.lo);
  return (data + noise) / static_cast<double>(r.count());
}

double QAverager::noise_floor(ScaleIndex scale, TimeInterval r) const
{
  return c2_ * std::pow(2.0, scale.paper()) / static_cast<double>(r.count());
}

AveragedEstimate averaged_estimator(const PeriodogramGrid& grid,
                                    ScaleIndex scale, TimeInterval r,
                                    double c2, std::uint64_t seed)
{
  const QAverager q(grid, c2, seed);
  AveragedEstimate est;
  est.scale = scale;
  est.interval = r;
  est.q = q.average(scale, r);
  est.sigma2 = q.noise_floor(scale, r);
  est.sigma_source = AveragedEstimate::SigmaSource::floor_only;
  return est;
}

double target_q(const SpectrumSpec& spec, ScaleIndex scale, TimeInterval r,
                long T)
{
  return spec.integral_average(scale,
                               static_cast<double>(r.lo) / static_cast<double>(T),
                               static_cast<double>(r.hi) / static_cast<double>(T));
}

Eigen::MatrixXd u_matrix(ScaleIndex scale, TimeInterval r, long T,
                         const GramMatrix& gram)
{
  if (T > kDenseTLimit)
    throw ResourceError("T exceeds the dense-matrix bound");
  if (scale.depth() > gram.scale_count)
    throw std::domain_error("estimation scale outside the Gram matrix");

  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(T, T);
  for (int i = 1; i <= gram.scale_count; ++i)
  {
    const double weight = gram.a_inv(scale.row(), i - 1);
    const auto w = haar_wavelet(ScaleIndex::from_depth(i));
    const long len = 1L << i;
    for (long k = r.lo; k < r.hi; ++k) {
      const long t_lo = std::max(0L, k - len + 1);
      const long t_hi = std::min(k, T - 1);
      for (long s = t_lo; s <= t_hi; ++s) {
        const double ws = weight * w.values[static_cast<size_t>(k - s)];
        for (long t = s; t <= t_hi; ++t)
          u(s, t) += ws * w.values[static_cast<size_t>(k - t)];
      }
    }
  }
  Eigen::MatrixXd full = u.selfadjointView<Eigen::Upper>();
  full /= static_cast<double>(r.count());
  return full;
}

double exact_variance(const SpectrumSpec& spec, ScaleIndex scale,
                      TimeInterval r, long T, double c2,
                      const GramMatrix& gram)
{
  const Eigen::MatrixXd sigma = covariance_matrix(spec, T);
  const Eigen::MatrixXd u = u_matrix(scale, r, T, gram);
  const Eigen::MatrixXd us = u * sigma;
  const double quad = 2.0 * (us.array() * us.transpose().array()).sum();
  return quad + c2 * std::pow(2.0, scale.paper()) /
                  static_cast<double>(r.count());
}

BandedSymmetric::BandedSymmetric(long T, long bandwidth)
  : T_(T), bandwidth_(std::min(bandwidth, T - 1))
{
  if (T < 1 || bandwidth < 0)
    throw std::domain_error("bad banded-matrix shape");
  rows_.resize(static_cast<size_t>(bandwidth_) + 1);
  for (long u = 0; u <= bandwidth_; ++u)
    rows_[static_cast<size_t>(u)].assign(static_cast<size_t>(T_ - u), 0.0);
}

double& BandedSymmetric::at(long s, long u)
{
  return rows_[static_cast<size_t>(u)][static_cast<size_t>(s)];
}

double BandedSymmetric::get(long s, long t) const
{
  if (s < 0 || t < 0 || s >= T_ || t >= T_)
    return 0.0;
  const long u = std::abs(t - s);
  if (u > bandwidth_)
    return 0.0;
  return rows_[static_cast<size_t>(u)][static_cast<size_t>(std::min(s, t))];
}

BandedSymmetric BandedSymmetric::from_dense(const Eigen::MatrixXd& m,
                                            long bandwidth)
{
  BandedSymmetric b(m.rows(), bandwidth);
  for (long u = 0; u <= b.bandwidth(); ++u)
    for (long s = 0; s + u < b.T(); ++s)
      b.at(s, u) = m(s, s + u);
  return b;
}

BandedSymmetric covariance_banded(const SpectrumSpec& spec, long T)
{
  const int J = simulation_scale_count(spec, T);
  const long bw = (1L << J) - 1;
  BandedSymmetric sigma(T, bw);
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
        const double ws = s_val * w.values[static_cast<size_t>(k - s)];
        for (long t = s; t <= k; ++t)
          sigma.at(s, t - s) += ws * w.values[static_cast<size_t>(k - t)];
      }
    }
  }
  return sigma;
}

namespace {

//! Window of `window_len` points centred at s, clipped to [0, T).
TimeInterval centred_window(long s, long window_len, long T)
{
  const long half = window_len / 2;
  const long lo = std::max(0L, s - half);
  const long hi = std::min(T, s - half + window_len);
  return TimeInterval{lo, std::max(hi, lo + 1)};
}

} // namespace

double plugin_covariance(const PeriodogramGrid& grid, long s, long u,
                         long m_t, long window_len, double c2,
                         std::uint64_t seed)
{
  if (window_len < 1)
    throw std::domain_error("plug-in window length must be >= 1");
  if (std::labs(u) > m_t)
    return 0.0;
  const QAverager q(grid, c2, seed);
  const AutocorrSystem system(grid.scale_count());
  const TimeInterval w = centred_window(s, window_len, grid.T());
  double val = 0.0;
  for (int i = 1; i <= grid.scale_count(); ++i) {
    const auto scale = ScaleIndex::from_depth(i);
    val += q.average(scale, w) * system.psi(scale, u);
  }
  return val;
}

BandedSymmetric build_sigma_tilde(const PeriodogramGrid& grid, long m_t,
                                  long window_len, double c2,
                                  std::uint64_t seed)
{
  if (window_len < 1)
    throw std::domain_error("plug-in window length must be >= 1");
  if (m_t < 0)
    throw std::domain_error("plug-in truncation m_t must be >= 0");
  const long T = grid.T();
  const int J = grid.scale_count();
  const QAverager q(grid, c2, seed);
  const AutocorrSystem system(J);

  // window averages per scale and centre
  Eigen::MatrixXd win(J, T);
  for (int i = 1; i <= J; ++i) {
    const auto scale = ScaleIndex::from_depth(i);
    for (long s = 0; s < T; ++s)
      win(i - 1, s) = q.average(scale, centred_window(s, window_len, T));
  }

  BandedSymmetric sigma(T, m_t);
  for (long u = 0; u <= std::min(m_t, T - 1); ++u) {
    for (long s = 0; s + u < T; ++s) {
      double a = 0.0;  // entry keyed by the left time point
      double b = 0.0;  // entry keyed by the right time point
      for (int i = 1; i <= J; ++i) {
        const double p = system.psi(ScaleIndex::from_depth(i), u);
        a += win(i - 1, s) * p;
        b += win(i - 1, s + u) * p;
      }
      sigma.at(s, u) = 0.5 * (a + b);
    }
  }
  return sigma;
}

VarianceKernel::VarianceKernel(int grid_scale_count,
                               ScaleIndex estimation_scale,
                               const GramMatrix& gram,
                               const BandedSymmetric& sigma)
  : T_(sigma.T()), scale_(estimation_scale)
{
  if (gram.scale_count != grid_scale_count)
    throw std::domain_error("Gram matrix does not match the grid scales");
  if (estimation_scale.depth() > grid_scale_count)
    throw std::domain_error("estimation scale outside the grid");

  const long bw = sigma.bandwidth();
  const int J = grid_scale_count;
  std::vector<WaveletVector> wavelets;
  wavelets.reserve(static_cast<size_t>(J));
  for (int i = 1; i <= J; ++i)
    wavelets.push_back(haar_wavelet(ScaleIndex::from_depth(i)));
  const Eigen::VectorXd a_row = gram.a_inv.row(scale_.row());

  prefix_ = Eigen::MatrixXd::Zero(T_ + 1, T_ + 1);
  // prefix_ accumulates H at (k+1, k'+1) and is cumulated afterwards.

  std::vector<double> y;
  std::vector<double> ycum;
  for (int m = 1; m <= J; ++m) {
    const long len_m = 1L << m;
    const auto& vm = wavelets[static_cast<size_t>(m - 1)].values;
    for (long kp = 0; kp < T_; ++kp) {
      const long a_supp = std::max(0L, kp - len_m + 1);
      const long b_supp = std::min(kp, T_ - 1);
      const long t0 = std::max(0L, a_supp - bw);
      const long t1 = std::min(T_ - 1, b_supp + bw);
      const long ylen = t1 - t0 + 1;
      y.assign(static_cast<size_t>(ylen), 0.0);
      for (long t = t0; t <= t1; ++t) {
        const long q_lo = std::max(a_supp, t - bw);
        const long q_hi = std::min(b_supp, t + bw);
        double acc = 0.0;
        for (long tp = q_lo; tp <= q_hi; ++tp)
          acc += sigma.get(t, tp) * vm[static_cast<size_t>(kp - tp)];
        y[static_cast<size_t>(t - t0)] = acc;
      }
      ycum.assign(static_cast<size_t>(ylen) + 1, 0.0);
      for (long i = 0; i < ylen; ++i)
        ycum[static_cast<size_t>(i) + 1] =
          ycum[static_cast<size_t>(i)] + y[static_cast<size_t>(i)];
      const auto yrange = [&](long a, long b) {  // sum of y over t in [a, b]
        a = std::max(a, t0);
        b = std::min(b, t1);
        if (a > b)
          return 0.0;
        return ycum[static_cast<size_t>(b - t0 + 1)] -
               ycum[static_cast<size_t>(a - t0)];
      };

      const double am = a_row(m - 1);
      for (int l = 1; l <= J; ++l) {
        const long len_l = 1L << l;
        const double amp_l = std::pow(2.0, -l / 2.0);
        const double weight = a_row(l - 1) * am;
        const long k_hi = std::min(T_ - 1, t1 + len_l - 1);
        for (long k = t0; k <= k_hi; ++k) {
          const double g = amp_l * (yrange(k - len_l / 2 + 1, k) -
                                    yrange(k - len_l + 1, k - len_l / 2));
          if (g != 0.0)
            prefix_(k + 1, kp + 1) += weight * g * g;
        }
      }
    }
  }

  // in-place 2-D cumulative sums
  for (long r = 1; r <= T_; ++r)
    for (long c = 1; c <= T_; ++c)
      prefix_(r, c) +=
        prefix_(r - 1, c) + prefix_(r, c - 1) - prefix_(r - 1, c - 1);
}

double VarianceKernel::quadratic_part(TimeInterval r) const
{
  if (!(0 <= r.lo && r.lo < r.hi && r.hi <= T_))
    throw std::domain_error("interval out of range");
  const double rect = prefix_(r.hi, r.hi) - prefix_(r.lo, r.hi) -
                      prefix_(r.hi, r.lo) + prefix_(r.lo, r.lo);
  const double n = static_cast<double>(r.count());
  return std::max(0.0, 2.0 * rect / (n * n));
}

double VarianceKernel::variance(TimeInterval r, double c2) const
{
  return quadratic_part(r) + c2 * std::pow(2.0, scale_.paper()) /
                               static_cast<double>(r.count());
}

double plugin_variance(const PeriodogramGrid& grid, ScaleIndex scale,
                       TimeInterval r, long m_t, long window_len, double c2,
                       std::uint64_t seed)
{
  const BandedSymmetric sigma =
    build_sigma_tilde(grid, m_t, window_len, c2, seed);
  const VarianceKernel kernel(grid.scale_count(), scale, grid.gram(), sigma);
  return kernel.variance(r, c2);
}

long default_smooth_bandwidth(long T)
{
  return std::max(1L, std::lround(std::sqrt(static_cast<double>(T)) / 2.0));
}

NuisanceEstimates estimate_nuisance(const PeriodogramGrid& grid,
                                    long smooth_bandwidth)
{
  if (smooth_bandwidth < 1)
    throw std::domain_error("smoothing bandwidth must be >= 1");
  const long T = grid.T();
  const int J = grid.scale_count();
  const AutocorrSystem system(J);

  // running mean with clipped window, then clipped at zero
  Eigen::MatrixXd smooth(J, T);
  for (int i = 1; i <= J; ++i) {
    std::vector<double> prefix(static_cast<size_t>(T) + 1, 0.0);
    for (long k = 0; k < T; ++k)
      prefix[static_cast<size_t>(k) + 1] =
        prefix[static_cast<size_t>(k)] + grid.corrected()(i - 1, k);
    for (long s = 0; s < T; ++s) {
      const long a = std::max(0L, s - smooth_bandwidth);
      const long b = std::min(T, s + smooth_bandwidth + 1);
      const double mean =
        (prefix[static_cast<size_t>(b)] - prefix[static_cast<size_t>(a)]) /
        static_cast<double>(b - a);
      smooth(i - 1, s) = std::max(0.0, mean);
    }
  }

  NuisanceEstimates est;

  const long u_max = 2L * (1L << J);
  double c_norm = 0.0;
  double c2 = 0.0;
  for (long s = 0; s < T; ++s) {
    double sum_u = 0.0;
    for (long u = -u_max; u <= u_max; ++u) {
      double c = 0.0;
      for (int i = 1; i <= J; ++i) {
        const auto scale = ScaleIndex::from_depth(i);
        if (std::labs(u) < scale.support_length())
          c += smooth(i - 1, s) * system.psi(scale, u);
      }
      sum_u += std::abs(c);
    }
    c_norm = std::max(c_norm, sum_u);
    c2 = std::max(c2, smooth.col(s).sum());
  }
  est.c_norm = c_norm;
  est.c2 = c2;

  // alternating-extrema total variation of each smoothed row; within a
  // monotone run the extremum differences telescope, so this equals the
  // sequence variation (end points count as extrema).
  est.tv_per_scale.resize(static_cast<size_t>(J), 0.0);
  for (int i = 1; i <= J; ++i) {
    double tv = 0.0;
    for (long s = 1; s < T; ++s)
      tv += std::abs(smooth(i - 1, s) - smooth(i - 1, s - 1));
    est.tv_per_scale[static_cast<size_t>(i - 1)] = tv;
  }
  return est;
}

} // namespace lswspec
