#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "lswspec/periodogram.hpp"
#include "lswspec/rng.hpp"
#include "lswspec/spectrum.hpp"

namespace lswspec {

//! Observed-time interval [lo, hi); the rescaled interval is [lo/T, hi/T).
struct TimeInterval {
  long lo = 0;
  long hi = 0;

  long count() const { return hi - lo; }
  double rescaled_length(long T) const
  {
    return static_cast<double>(count()) / static_cast<double>(T);
  }
  bool contains_point(long k) const { return k >= lo && k < hi; }
  bool contains(const TimeInterval& other) const
  {
    return lo <= other.lo && other.hi <= hi;
  }
  bool operator==(const TimeInterval&) const = default;
};

TimeInterval make_interval(long lo, long hi, long T);

//! Averaged estimator value over an interval, with its variance.
struct AveragedEstimate {
  enum class SigmaSource { exact_oracle, plugin, floor_only };
  ScaleIndex scale = ScaleIndex::from_depth(1);
  TimeInterval interval;
  double q = 0.0;
  double sigma2 = 0.0;
  SigmaSource sigma_source = SigmaSource::floor_only;
};

//! Precomputed prefix sums of corrected rows plus regularization noise,
//! so any interval average Q_{j,R;T} is O(1). The noise z_{j,k;T} is keyed
//! by (seed, j, k): the same k reuses the same draw across nested intervals.
class QAverager {
public:
  QAverager(const PeriodogramGrid& grid, double c2, std::uint64_t seed);

  double average(ScaleIndex scale, TimeInterval r) const;
  double noise_floor(ScaleIndex scale, TimeInterval r) const;
  double c2() const { return c2_; }
  long T() const { return T_; }
  int scale_count() const { return static_cast<int>(data_prefix_.rows()); }

private:
  long T_;
  double c2_;
  Eigen::MatrixXd data_prefix_;   // J x (T+1)
  Eigen::MatrixXd noise_prefix_;  // J x (T+1)
};

//! Q_{j,R;T}: interval average of corrected periodogram plus noise. The
//! returned sigma2 is only the regularization floor; callers wanting a real
//! variance attach one from exact_variance or a VarianceKernel.
AveragedEstimate averaged_estimator(const PeriodogramGrid& grid,
                                    ScaleIndex scale, TimeInterval r,
                                    double c2, std::uint64_t seed);

//! Q_{j,R} = |R|^{-1} int_R S_j(z) dz, the estimand (closed form).
double target_q(const SpectrumSpec& spec, ScaleIndex scale, TimeInterval r,
                long T);

//! Dense U_{j,R;T} with X' U X equal to the interval-averaged corrected
//! periodogram. Oracle-grade; respects the dense-T bound.
Eigen::MatrixXd u_matrix(ScaleIndex scale, TimeInterval r, long T,
                         const GramMatrix& gram);

//! Var Q_{j,R;T} = 2 tr((U Sigma)^2) + C^2 2^j / |RT| from the exact process
//! covariance. Oracle only; dense linear algebra.
double exact_variance(const SpectrumSpec& spec, ScaleIndex scale,
                      TimeInterval r, long T, double c2,
                      const GramMatrix& gram);

//! Symmetric banded matrix; entries vanish for |s - t| > bandwidth.
class BandedSymmetric {
public:
  BandedSymmetric(long T, long bandwidth);

  long T() const { return T_; }
  long bandwidth() const { return bandwidth_; }

  double& at(long s, long u);          // entry (s, s+u), 0 <= u <= bandwidth
  double get(long s, long t) const;    // any pair; zero outside band

  static BandedSymmetric from_dense(const Eigen::MatrixXd& m, long bandwidth);

private:
  long T_;
  long bandwidth_;
  std::vector<std::vector<double>> rows_;  // rows_[u][s] = entry (s, s+u)
};

//! Banded true covariance of the process (bandwidth L_J - 1).
BandedSymmetric covariance_banded(const SpectrumSpec& spec, long T);

//! Eq.-style plug-in covariance estimate: zero for |u| > m_t, otherwise
//! sum_j Q_{j,W(s);T} Psi_j(u) with W(s) the window_len points centred at s
//! clipped to [0, T).
double plugin_covariance(const PeriodogramGrid& grid, long s, long u,
                         long m_t, long window_len, double c2,
                         std::uint64_t seed);

//! All plug-in covariances at once, symmetrized, as a banded matrix.
BandedSymmetric build_sigma_tilde(const PeriodogramGrid& grid, long m_t,
                                  long window_len, double c2,
                                  std::uint64_t seed);

//! Interval-independent kernel for the quadratic-form variance at one
//! estimation scale: sigma2(R) = 2 |RT|^{-2} sum_{k,k' in RT} H(k,k') with
//! H(k,k') = sum_{l,m} Ainv_{jl} Ainv_{jm} (psi_{lk}' Sigma psi_{mk'})^2.
//! Built once per (grid scale set, estimation scale, Sigma); every interval
//! query is O(1) through a 2-D prefix table.
class VarianceKernel {
public:
  VarianceKernel(int grid_scale_count, ScaleIndex estimation_scale,
                 const GramMatrix& gram, const BandedSymmetric& sigma);

  //! 2 tr((U Sigma)^2), clamped at zero (Sigma estimates may be indefinite).
  double quadratic_part(TimeInterval r) const;
  //! quadratic part plus the regularization floor c2 2^j / |RT|.
  double variance(TimeInterval r, double c2) const;

  ScaleIndex estimation_scale() const { return scale_; }

private:
  long T_;
  ScaleIndex scale_;
  Eigen::MatrixXd prefix_;  // (T+1) x (T+1)
};

//! One-shot plug-in variance (builds Sigma-tilde and a kernel internally);
//! prefer sharing a VarianceKernel when evaluating many intervals.
double plugin_variance(const PeriodogramGrid& grid, ScaleIndex scale,
                       TimeInterval r, long m_t, long window_len, double c2,
                       std::uint64_t seed);

//! Nuisance quantities estimated from the smoothed corrected periodogram.
struct NuisanceEstimates {
  double c_norm = 0.0;               // plug-in for the (1,inf) covariance norm
  std::vector<double> tv_per_scale;  // total-variation estimates, row = depth-1
  double c2 = 0.0;                   // regularization constant derived from it
};

//! Running-mean smoothing (half-width = smooth_bandwidth, clipped at zero)
//! followed by the plug-in functionals. c2 is the supremum over time of the
//! estimated local variance sum_j L*_j(s).
NuisanceEstimates estimate_nuisance(const PeriodogramGrid& grid,
                                    long smooth_bandwidth);

//! Default smoothing half-width: round(sqrt(T)/2).
long default_smooth_bandwidth(long T);

} // namespace lswspec
