#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "lswspec/estimator.hpp"

namespace lswspec {

//! Tuning knobs of the pointwise adaptive estimator. Negative values on
//! k_t and c2 mean "derive the default from the data / sample size".
struct AdaptiveConfig {
  double k_t = -1.0;        // threshold growth factor; default log2(T)
  double eta_scale = 1.0;   // multiplier on the per-scale eta formula
  double alpha = 0.5;       // enters eta = eta_scale * 2^{-j/2} * 5 (2 alpha + p)
  double p = 2.0;
  long delta_points = 8;    // minimum sub-interval length, observed time
  double grid_ratio = 1.4;  // geometric growth of candidate offsets
  double c2 = -1.0;         // regularization constant; default from nuisance fit
  long m_t = 2;             // plug-in covariance truncation lag
  long window_len = 9;      // plug-in covariance window, observed-time points
  enum class VarianceMode { exact_oracle, plugin };
  VarianceMode variance_mode = VarianceMode::plugin;
  bool sequential = false;  // stop at the first rejected candidate
  std::uint64_t noise_seed = 0;

  double resolved_k_t(long T) const;
  double eta(ScaleIndex scale) const;
};

//! Candidate intervals around one estimation point, following the geometric
//! grid construction: offsets 0, ceil(d r^i) from the centre, clipped.
struct CandidateGrids {
  long z0_point = 0;                    // [z0 T]
  std::vector<long> left_points;        // candidate lo endpoints (ascending)
  std::vector<long> right_points;       // candidate hi endpoints (ascending)
  std::vector<TimeInterval> lambda;     // candidates, sorted by preference
  std::vector<std::vector<TimeInterval>> test_sets;  // per-candidate subsets
};

CandidateGrids build_grids(double z0, long T, const AdaptiveConfig& cfg);

//! One homogeneity test: reject R against U if
//! |Q_R - Q_U| > 2 eta (sigma_R + sigma_U) k_t.
struct TestRecord {
  TimeInterval r;
  TimeInterval u;
  double statistic = 0.0;
  double threshold = 0.0;
  bool rejected = false;
};

TestRecord homogeneity_reject(const AveragedEstimate& q_r,
                              const AveragedEstimate& q_u, double eta,
                              double k_t);

//! Result of the interval selection at one (scale, z0).
struct AdaptiveEstimate {
  ScaleIndex scale = ScaleIndex::from_depth(1);
  double z0 = 0.0;
  TimeInterval selected;
  double value = 0.0;
  double sigma2 = 0.0;
  std::vector<TestRecord> trace;
};

//! Batch output of estimate_spectrum.
struct EstimateGrid {
  struct Row {
    int paper_scale = -1;
    double z0 = 0.0;
    double value = 0.0;
    TimeInterval selected;
    double sigma2 = 0.0;
  };
  std::vector<Row> rows;
};

//! Shared state for running the adaptive estimator over many points:
//! Q prefix sums, the plug-in (or oracle) covariance and one variance
//! kernel per estimation scale. Safe to use from one thread; independent
//! sessions over the same grid may run concurrently.
class AdaptiveSession {
public:
  //! `oracle_spec` is required in exact_oracle variance mode; it supplies
  //! the true process covariance.
  AdaptiveSession(const PeriodogramGrid& grid, AdaptiveConfig cfg,
                  const SpectrumSpec* oracle_spec = nullptr);

  AdaptiveEstimate select_interval(ScaleIndex scale, double z0,
                                   bool keep_trace = true);
  EstimateGrid estimate_spectrum(const std::vector<int>& paper_scales,
                                 const std::vector<double>& z0s);

  double resolved_c2() const { return c2_; }
  const AdaptiveConfig& config() const { return cfg_; }
  const VarianceKernel& kernel(ScaleIndex scale);

private:
  const PeriodogramGrid& grid_;
  AdaptiveConfig cfg_;
  double c2_;
  double k_t_;
  std::unique_ptr<QAverager> q_;
  std::unique_ptr<BandedSymmetric> sigma_;
  std::map<int, VarianceKernel> kernels_;  // keyed by scale depth
};

} // namespace lswspec
